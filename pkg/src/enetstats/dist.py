"""Special functions behind every p-value in the package.

The F and Student-t tail probabilities both reduce to the regularized
incomplete beta function I_x(a, b), evaluated here by a continued fraction
(modified Lentz iteration) with the symmetry switch to I_{1-x}(b, a) once x
passes (a + 1) / (a + b + 2). Accuracy is at the 1e-13 level over the
degree-of-freedom range this package meets in practice (df up to ~1000),
which is enough to print trustworthy p-values down to the 1e-7 scale.
"""

from __future__ import annotations

import math
from typing import NamedTuple

__all__ = [
    "TailProbability",
    "log_gamma",
    "reg_incomplete_beta",
    "f_sf",
    "t_sf",
]

# Continued-fraction evaluation limits. 300 terms is far more than the
# fraction needs inside the supported df range; hitting the cap means a
# domain bug, not slow convergence.
_CF_MAX_ITER = 300
_CF_EPS = 1e-15
_FPMIN = 1e-300

# Tail probabilities below this clamp to exactly 0.0 (and are flagged) so
# report files never carry subnormal noise.
UNDERFLOW_LIMIT = 1e-300


class TailProbability(NamedTuple):
    """An upper-tail probability; ``clamped`` marks an underflow to zero."""

    value: float
    clamped: bool = False

    def __float__(self) -> float:
        return self.value


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Backed by the platform lgamma, which is accurate to a few ulp across
    [0.5, 1000]; the domain check is ours.
    """
    if not x > 0:
        raise ValueError(f"log_gamma is defined for x > 0, got {x!r}")
    return math.lgamma(x)


# Above this, the Stirling correction series for log-gamma is accurate to
# ~1 ulp with five terms.
_STIRLING_MIN = 15.0


def _stirling_phi(z: float) -> float:
    """Correction phi(z) = lnGamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2]."""
    rz2 = 1.0 / (z * z)
    series = (
        (((rz2 / 1188.0 - 1.0 / 1680.0) * rz2 + 1.0 / 1260.0) * rz2 - 1.0 / 360.0)
        * rz2
        + 1.0 / 12.0
    )
    return series / z


def _log_beta(a: float, b: float) -> float:
    """ln B(a, b), organized so no large Stirling terms cancel.

    Plain lgamma differences lose ~1e-13 absolute at shapes in the
    hundreds; grouping the log terms as ratios keeps every summand at the
    scale of the result.
    """
    if a < b:
        a, b = b, a
    s = a + b
    if b >= _STIRLING_MIN:
        return (
            0.5 * math.log(2.0 * math.pi)
            - 0.5 * math.log(s)
            + (a - 0.5) * math.log(a / s)
            + (b - 0.5) * math.log(b / s)
            + _stirling_phi(a)
            + _stirling_phi(b)
            - _stirling_phi(s)
        )
    if a >= _STIRLING_MIN:
        # lnGamma(a) - lnGamma(a + b) expanded around the large argument
        return (
            math.lgamma(b)
            + (a - 0.5) * math.log(a / s)
            - b * math.log(s)
            + b
            + _stirling_phi(a)
            - _stirling_phi(s)
        )
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(s)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError(
        f"incomplete beta continued fraction failed to converge "
        f"(a={a!r}, b={b!r}, x={x!r})"
    )


def reg_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Endpoints are exact: I_0 = 0 and I_1 = 1. Elsewhere the continued
    fraction is evaluated on whichever side of the symmetry point
    (a + 1) / (a + b + 2) converges fast, using
    I_x(a, b) = 1 - I_{1-x}(b, a) for the far side.
    """
    if not a > 0 or not b > 0:
        raise ValueError(f"shape parameters must be positive, got a={a!r}, b={b!r}")
    if x < 0.0 or x > 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_sf(f: float, d1: int, d2: int) -> TailProbability:
    """Upper tail P(F_{d1,d2} > f) of the F distribution."""
    if d1 < 1 or d2 < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got ({d1!r}, {d2!r})")
    if f < 0:
        raise ValueError(f"F statistics are nonnegative, got {f!r}")
    if math.isinf(f):
        return TailProbability(0.0)
    p = reg_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
    return _as_tail(p)


def t_sf(t: float, df: int) -> TailProbability:
    """Two-sided tail P(|T_df| > |t|) of Student's t distribution."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df!r}")
    if math.isinf(t):
        return TailProbability(0.0)
    p = reg_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
    return _as_tail(p)


def _as_tail(p: float) -> TailProbability:
    # for a finite statistic the true tail is strictly positive, so a
    # sub-limit result (including an exact 0.0 from exp underflow) is a clamp
    if p < UNDERFLOW_LIMIT:
        return TailProbability(0.0, True)
    return TailProbability(min(1.0, max(0.0, p)))
