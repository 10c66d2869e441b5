# freeboundary/core/__init__.py
# 2026-10-17
from .errors import *
from .params import FluidParams, PRESETS, jump, validate_params
from .geometry import Sector, StripDomain, in_sector
