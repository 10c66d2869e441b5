# freeboundary/spaces/__init__.py
# 2026-10-17
from .sampled import SampledFunction, IntervalFunction, SeminormReport, dilate
from .seminorms import (slobodeckij_seminorm, poisson_seminorm, riesz_seminorm, riesz_potential, hardy_ratio, hardy_uniformity,
    exterior_weight, interval_lp_norm, interval_seminorm)
from .extension import extend_c1, extend_c1_derivative, seam_mismatch
from .partition import PartitionOfUnity, partition_of_unity, smooth_step, cutoff
