"""Real-spectrum branch: choose beta3 so that the imaginary energy vanishes.

Setting E_i = 0 and dividing by a_i^2 leaves the quadratic

    A beta3^2 + B beta3 - A/4 = 0,
    A = 2 W m_r - (W^2 - 1) m_i,   B = -2 W m_i - (W^2 - 1) m_r,   W = a_r / a_i.

Its discriminant A^2 + B^2 is never negative, so both roots are real and
their product is -1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .closed_form import coefficients
from .core import ModelError, SystemParameters

BOTH_ADMISSIBLE = "both_admissible"
NONE_ADMISSIBLE = "none_admissible"

# alpha1, beta1 must exceed this fraction of their own scale to count as positive
ADMISSIBILITY_TOL = 1e-12


class ZeroImaginaryMorse(ModelError):
    """a_i == 0, so a_r / a_i is undefined."""


class DegenerateQuadratic(ModelError):
    """A == 0: the quadratic collapses to B beta3 = 0 with the single root 0."""

    root = 0.0


@dataclass(frozen=True)
class RosCoefficients:
    omega: float
    a: float
    b: float


@dataclass(frozen=True)
class RosSolution:
    roots: tuple[float, float]
    selected: float | None
    implied_v_or: float | None
    reason: str | None = None

    def mismatch_ratio(self, v_or: float) -> float | None:
        """implied / configured well depth."""
        if self.implied_v_or is None or v_or == 0:
            return None
        return self.implied_v_or / v_or


def ros_coefficients(params: SystemParameters) -> RosCoefficients:
    if params.a_i == 0:
        raise ZeroImaginaryMorse("a_i = 0 leaves a_r/a_i undefined")
    w = params.a_r / params.a_i
    return RosCoefficients(
        omega=w,
        a=2.0 * w * params.m_r - (w * w - 1.0) * params.m_i,
        b=-2.0 * w * params.m_i - (w * w - 1.0) * params.m_r,
    )


def ros_roots(c: RosCoefficients) -> tuple[float, float]:
    """(-B + sqrt(A^2+B^2)) / 2A and (-B - sqrt(A^2+B^2)) / 2A, in that order.

    The root whose numerator would cancel is recovered from the product -1/4
    instead, which keeps both roots accurate to rounding.
    """
    if c.a == 0:
        raise DegenerateQuadratic("A = 0: the only root is beta3 = 0")
    disc = math.hypot(c.a, c.b)
    if c.b <= 0:
        plus = (-c.b + disc) / (2.0 * c.a)
        minus = -0.25 / plus
    else:
        minus = (-c.b - disc) / (2.0 * c.a)
        plus = -0.25 / minus
    return plus, minus


def quadratic_residual(c: RosCoefficients, beta3: float) -> float:
    """A beta3^2 + B beta3 - A/4."""
    return c.a * beta3 * beta3 + c.b * beta3 - c.a / 4.0


def is_admissible(params: SystemParameters, beta3: float, tol: float = ADMISSIBILITY_TOL) -> bool:
    """alpha1 > 0 and beta1 > 0 strictly, with a rounding margin.

    For a_i > 0 this is beta3 > -a_i/(2 a_r) together with beta3 > a_r/(2 a_i).
    """
    co = coefficients(params, beta3)
    a1_scale = abs(beta3 * params.a_i) + params.a_r / 2.0
    b1_scale = abs(beta3 * params.a_r) + abs(params.a_i) / 2.0
    return co.alpha1 > tol * a1_scale and co.beta1 > tol * b1_scale


def implied_v_or(params: SystemParameters, beta3: float) -> float:
    """Well depth that would reproduce ``beta3`` in the forward relation."""
    return params.hbar**2 * beta3**2 * params.denominator / (2.0 * params.mod_m_sq)


def ros_select(params: SystemParameters, roots) -> RosSolution:
    roots = tuple(float(r) for r in roots)
    ok = [r for r in roots if is_admissible(params, r)]
    if len(ok) == 1:
        beta3 = ok[0]
        return RosSolution(roots, beta3, implied_v_or(params, beta3))
    reason = BOTH_ADMISSIBLE if len(ok) > 1 else NONE_ADMISSIBLE
    return RosSolution(roots, None, None, reason)


def solve_ros(params: SystemParameters) -> RosSolution:
    return ros_select(params, ros_roots(ros_coefficients(params)))
