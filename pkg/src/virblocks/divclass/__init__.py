"""Divisor classes, F-curves and the Virasoro coinvariant divisors."""

from .classes import (
    Divisor0,
    Divisor1,
    DivisorError,
    big_average,
    boundary0,
    boundary_keys0,
    lambda1,
    normalize_subset0,
    pic1_basis,
    psi0,
    psi1,
    pullback0,
    pullback_pi,
    relabel0,
    restrict_boundary0,
    restrict_fi,
    standard_form,
)
from .fcurves import (
    FCurve,
    Tail,
    enumerate_fcurves,
    enumerate_fcurves0,
    enumerate_fcurves1,
    fcurve0,
    fcurve1_type1,
    fcurve1_type5,
    fcurve1_type6,
    fingerprint0,
    fingerprint_pullback0,
    pair_class_fcurve0,
    same_class0,
    set_partitions,
)
from .vir import (
    deg_m04,
    deg_m11,
    divisor0_from_cyclic,
    divisor0_from_vir,
    divisor1_from_vir,
    vir_intersection_fcurve,
)
