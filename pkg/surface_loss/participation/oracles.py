from logging import getLogger
from math import e, isfinite, log, pi, sqrt

from surface_loss.constants import (
    DEFAULT_LAYER_EPS,
    DEFAULT_LAYER_THICKNESS,
    DEFAULT_SUBSTRATE_EPS,
    EPSILON_0,
    INTERFACE,
    LOGGER_NAME,
)
from surface_loss.exception import OracleError
from surface_loss.geometry.design import LayerSpec, parallel_plate_fixture

"""

oracles.py

This script holds closed-form reference values used to check the field solver and the participation integrals:

    stacked parallel plate:  R = (t / eps_layer) / ((d - t) + t / eps_layer)
    coax:                    C = 2 pi eps_0 / ln(b / a)
    coplanar strips:         C = eps_0 (1 + eps_substrate) / 2 * K(k') / K(k),  k = s / (s + 2 w)

The complete elliptic integrals are computed by the arithmetic-geometric mean and take the modulus k, not the
parameter m = k^2.

This script holds the following object(s):
AnalyticOracles(object)

This script holds the following function(s):
ellipk(k)
ellipe(k)
legendre_residual(k)
elliptic_ratio(k)
parallel_plate_participation(fixture)
coax_capacitance(inner_radius, outer_radius)
coplanar_strip_capacitance(strip_width, gap, substrate_eps=DEFAULT_SUBSTRATE_EPS)
analytic_oracles()

"""

AGM_TOLERANCE = 1e-15
AGM_MAXIMUM_ITERATIONS = 64
LEGENDRE_TOLERANCE = 1e-12


def _check_modulus(k):
    if not (isfinite(k) and 0.0 < k < 1.0):
        log_message = f"Invalid elliptic modulus: {k}, expected 0 < k < 1."
        getLogger(LOGGER_NAME).error(log_message)
        raise OracleError(log_message)


def _agm(k):
    """
    Runs the arithmetic-geometric mean from (1, k') and returns the limit and sum(2^(n - 1) c_n^2) with c_0 = k.
    """
    a, b, c = 1.0, sqrt(1.0 - k * k), k
    weighted = 0.5 * c * c
    power = 0.5
    for _ in range(AGM_MAXIMUM_ITERATIONS):
        if abs(a - b) <= AGM_TOLERANCE * a:
            return a, weighted
        a, b, c = 0.5 * (a + b), sqrt(a * b), 0.5 * (a - b)
        power *= 2.0
        weighted += power * c * c
    log_message = f"The arithmetic-geometric mean did not converge for modulus: {k}."
    getLogger(LOGGER_NAME).error(log_message)
    raise OracleError(log_message)


def ellipk(k):
    _check_modulus(k)
    mean, _ = _agm(k)
    return pi / (2.0 * mean)


def ellipe(k):
    _check_modulus(k)
    mean, weighted = _agm(k)
    return pi / (2.0 * mean) * (1.0 - weighted)


def legendre_residual(k):
    """
    Returns E K' + E' K - K K' - pi / 2, which vanishes for exact complete elliptic integrals.
    """
    _check_modulus(k)
    complement = sqrt(1.0 - k * k)
    first_kind, second_kind = ellipk(k), ellipe(k)
    first_kind_complement, second_kind_complement = ellipk(complement), ellipe(complement)
    return (
        second_kind * first_kind_complement
        + second_kind_complement * first_kind
        - first_kind * first_kind_complement
        - pi / 2.0
    )


def elliptic_ratio(k):
    """
    Returns K(k') / K(k) after checking the Legendre relation at k.
    """
    residual = legendre_residual(k)
    if abs(residual) > LEGENDRE_TOLERANCE:
        log_message = f"Legendre relation check failed at modulus: {k} with residual: {residual}."
        getLogger(LOGGER_NAME).error(log_message)
        raise OracleError(log_message)
    return ellipk(sqrt(1.0 - k * k)) / ellipk(k)


def parallel_plate_participation(fixture):
    layer_term = fixture.layer_thickness / fixture.layer.eps_layer
    return layer_term / (fixture.vacuum_thickness + layer_term)


def coax_capacitance(inner_radius, outer_radius):
    if not 0 < inner_radius < outer_radius:
        log_message = f"Invalid coax radii: inner {inner_radius} m and outer {outer_radius} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise OracleError(log_message)
    return 2.0 * pi * EPSILON_0 / log(outer_radius / inner_radius)


def coplanar_strip_capacitance(strip_width, gap, substrate_eps=DEFAULT_SUBSTRATE_EPS):
    if not (strip_width > 0 and gap > 0):
        log_message = f"Invalid coplanar strips: width {strip_width} m and gap {gap} m."
        getLogger(LOGGER_NAME).error(log_message)
        raise OracleError(log_message)
    k = gap / (gap + 2.0 * strip_width)
    return EPSILON_0 * (1.0 + substrate_eps) / 2.0 * elliptic_ratio(k)


class AnalyticOracles:
    def __init__(self):
        self.parallel_plate_participation = parallel_plate_participation
        self.coax_capacitance = coax_capacitance
        self.coplanar_strip_capacitance = coplanar_strip_capacitance
        self.elliptic_ratio = elliptic_ratio

    def __repr__(self):
        return "AnalyticOracles(parallel_plate_participation, coax_capacitance, coplanar_strip_capacitance)"

    def reference_values(self):
        """
        Returns the reference values quoted throughout the tests.
        """
        fixture = parallel_plate_fixture(1e-6, LayerSpec(INTERFACE.MV, DEFAULT_LAYER_THICKNESS, DEFAULT_LAYER_EPS))
        return {
            "coax_a_1mm_b_e_mm_F_per_m": coax_capacitance(1e-3, 1e-3 * e),
            "elliptic_ratio_k_0.5": elliptic_ratio(0.5),
            "parallel_plate_R_d_1um_t_3nm_eps_6.2": parallel_plate_participation(fixture),
        }


def analytic_oracles():
    return AnalyticOracles()
