# freeboundary/symbol/__init__.py
# 2026-10-17
from .ansatz import (decay_exponents, ResolventAnsatz, InterfaceSystem, assemble_interface_system,
    normal_velocity_response, interface_residuals, bulk_residuals, stacked_interface_matrix)
from .response import k_zero, k_of_z, k_from_lambda_tau, branch_points, k_bound, symmetry_defects, limit_anchors
from .extended import SymbolValue, s_tilde, eval_extended_symbol, eval_boundary_symbol
from .bounds import SweepGrid, BoundsReport, verify_sandwich
