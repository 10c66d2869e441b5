# freeboundary/dispersion/__init__.py
# 2026-10-17
from .growth import (symbol, symbol_derivative, critical_wavenumber, find_growth_rate, fixed_point_growth_rate,
    small_z_growth_rate, inviscid_growth_rate, DispersionRow, DispersionCurve, dispersion_curve)
from .zeros import Rectangle, winding_integral, count_zeros_rhp
from .talbot import FixedTalbot
from .mode import ModeResponse, mode_response, fit_rate
