# freeboundary/__init__.py
# 2026-10-17
from . import core, symbol, dispersion, kernels, spaces
from .core import FluidParams, PRESETS, validate_params
