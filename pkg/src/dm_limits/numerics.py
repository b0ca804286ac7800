"""Scalar special functions and deterministic 1-D minimization.

Every bound formula in this package reduces to the standard normal CDF, the
regularized lower incomplete gamma function (chi-square CDF), and infima of
piecewise objectives over an interval.  These primitives live here so the
rest of the code never touches scipy directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import optimize, special

from .errors import PreconditionError

__all__ = [
    "Interval",
    "std_normal_cdf",
    "chi_square_cdf",
    "chi_square_median",
    "minimize_scalar",
    "floor_guarded",
]

_SQRT2 = math.sqrt(2.0)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi for golden-section steps


@dataclass(frozen=True)
class Interval:
    """A nonempty open/closed search interval (lo < hi strictly)."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise PreconditionError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise PreconditionError(f"empty or inverted interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function.

    erfc keeps full relative accuracy in the lower tail, so absolute error
    stays far below 1e-12 even for arguments near -40.
    """
    if not math.isfinite(x):
        raise PreconditionError("std_normal_cdf requires a finite argument")
    return 0.5 * math.erfc(-x / _SQRT2)


def chi_square_cdf(x: float, n: int) -> float:
    """CDF of the chi-square law with n degrees of freedom.

    Evaluated as the regularized lower incomplete gamma function P(n/2, x/2).
    """
    if n < 1 or int(n) != n:
        raise PreconditionError("degrees of freedom must be a positive integer")
    if x < 0:
        raise PreconditionError("chi_square_cdf requires x >= 0")
    return float(special.gammainc(n / 2.0, x / 2.0))


def chi_square_median(n: int) -> float:
    """Median of the chi-square law with n degrees of freedom.

    Bracketing root search on [0, 3n + 10]; the returned point satisfies
    |chi_square_cdf(m, n) - 1/2| <= 1e-10.
    """
    if n < 1 or int(n) != n:
        raise PreconditionError("degrees of freedom must be a positive integer")
    hi = 3.0 * n + 10.0
    return float(
        optimize.brentq(lambda x: chi_square_cdf(x, n) - 0.5, 0.0, hi, xtol=1e-13, rtol=8.9e-16)
    )


def _golden_section(f: Callable[[float], float], a: float, b: float, tol: float):
    # plain golden-section descent; returns the best of the final bracket midpoints
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def minimize_scalar(
    f: Callable[[float], float],
    domain: Interval,
    tol: float = 1e-9,
    grid: int = 2048,
) -> tuple[float, float]:
    """Minimize f over the interval; returns (argmin, min).

    A dense grid (2048 cells by default) locates the best region first, then
    golden-section descent refines inside the two neighbouring cells.  The
    grid stage is what makes this safe for piecewise objectives with floor
    jumps, where a pure unimodal method could lock onto the wrong branch.
    Deterministic for fixed inputs.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    step = domain.width / grid
    best_x, best_f = domain.lo, f(domain.lo)
    for i in range(1, grid + 1):
        x = domain.lo + i * step if i < grid else domain.hi
        fx = f(x)
        if fx < best_f:
            best_x, best_f = x, fx
    lo = max(domain.lo, best_x - step)
    hi = min(domain.hi, best_x + step)
    if hi > lo:
        x_ref, f_ref = _golden_section(f, lo, hi, min(tol, step))
        if f_ref < best_f:
            best_x, best_f = x_ref, f_ref
    return best_x, best_f


def floor_guarded(x: float, tol: float = 1e-9) -> int:
    """Floor that snaps to the nearest integer when x is within tol of one.

    Protects floors of computed quantities (exponents such as 1/pi_C) against
    floating-point underestimation, e.g. floor(2 - 1e-13) staying 2 rather
    than collapsing to 1.
    """
    if x < 0:
        raise PreconditionError("floor_guarded requires x >= 0")
    if not 0 < tol < 0.5:
        raise PreconditionError("guard tolerance must lie in (0, 0.5)")
    r = round(x)
    if abs(x - r) <= tol:
        return int(r)
    return int(math.floor(x))
