"""Closed-form convergence-rate bounds from drift and minorization parameters.

Two parameterizations are supported: the renewal-theory conditions with
parameter (lambda, K, epsilon, beta) for reversible, non-negative definite
chains (Baxendale 2005, Theorem 1.3), and the coupling conditions with
parameter (eta, L, epsilon, d) (Rosenthal 1995, Theorem 12).  Alongside each
upper bound this module computes floors: lower bounds on the best value any
simple bound built from the same conditions can achieve.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import PreconditionError
from .numerics import floor_guarded

__all__ = [
    "Branch",
    "DmParamsA",
    "DmParamsB",
    "BoundReport",
    "baxendale_alpha_star",
    "baxendale_bound",
    "paraoptima_lower",
    "rosenthal_bound",
    "rosenthal_paraoptima_lower",
    "pic1_stationary_mass_lower",
    "chain_specific_lower_a",
    "chain_specific_lower_b",
]


class Branch(str, enum.Enum):
    """Which convention branch produced a bound value."""

    EPS_LT_ONE = "eps_lt_one"
    EPS_EQ_ONE = "eps_eq_one"
    LAMBDA_ZERO = "lambda_zero"


@dataclass(frozen=True)
class DmParamsA:
    """Drift/minorization parameter (lambda, K, epsilon, beta).

    lambda is the off-set drift factor, K the bound on the small set,
    epsilon the minorization constant, beta the strong-aperiodicity mass.
    The tuple must lie in [0,1) x [1,inf) x (0,1] x (0,1].
    """

    lam: float
    K: float
    eps: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam < 1.0:
            raise PreconditionError(f"lambda must lie in [0, 1), got {self.lam}")
        if self.K < 1.0:
            raise PreconditionError(f"K must be >= 1, got {self.K}")
        if not 0.0 < self.eps <= 1.0:
            raise PreconditionError(f"epsilon must lie in (0, 1], got {self.eps}")
        if not 0.0 < self.beta <= 1.0:
            raise PreconditionError(f"beta must lie in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class DmParamsB:
    """Coupling-style parameter (eta, L, epsilon, d).

    eta and L describe the one-step contraction PV <= eta*V + L, epsilon the
    minorization constant on the level set {V <= d}.  The derived flag `b3`
    records whether d clears the coupling threshold 2L/(1 - eta).
    """

    eta: float
    L: float
    eps: float
    d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta < 1.0:
            raise PreconditionError(f"eta must lie in [0, 1), got {self.eta}")
        if self.L < 0.0:
            raise PreconditionError(f"L must be >= 0, got {self.L}")
        if not 0.0 < self.eps <= 1.0:
            raise PreconditionError(f"epsilon must lie in (0, 1], got {self.eps}")
        if self.d <= 0.0:
            raise PreconditionError(f"d must be positive, got {self.d}")

    @property
    def b3_threshold(self) -> float:
        return 2.0 * self.L / (1.0 - self.eta)

    @property
    def b3(self) -> bool:
        return self.d > self.b3_threshold

    def require_b3(self) -> None:
        if not self.b3:
            raise PreconditionError(
                f"d = {self.d} must exceed 2L/(1-eta) = {self.b3_threshold:.12g}"
            )


@dataclass(frozen=True)
class BoundReport:
    """A bound value together with every intermediate quantity and the branch taken."""

    value: float
    branch: Branch
    alpha_star: float | None = None
    alpha_floor: int | None = None
    lambda_tilde: float | None = None
    K_tilde: float | None = None
    alpha_double_star: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise PreconditionError(f"bound value {self.value} escapes [0, 1]")

    def as_dict(self) -> dict:
        out: dict = {"value": self.value, "branch": self.branch.value}
        for name in ("alpha_star", "alpha_floor", "lambda_tilde", "K_tilde", "alpha_double_star"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out


def baxendale_alpha_star(p: DmParamsA) -> float:
    """Renewal exponent alpha_* = (log[(K-eps)/(1-eps)] + log(1/lambda)) / log(1/lambda).

    Defined for eps < 1; interpreted as 1 when lambda = 0.
    """
    if p.eps >= 1.0:
        raise PreconditionError("alpha_star is undefined at epsilon = 1; use the lambda branch")
    if p.lam == 0.0:
        return 1.0
    log_inv_lam = -math.log(p.lam)
    return (math.log((p.K - p.eps) / (1.0 - p.eps)) + log_inv_lam) / log_inv_lam


def _branch_a(p: DmParamsA) -> Branch:
    if p.eps >= 1.0:
        return Branch.EPS_EQ_ONE
    if p.lam == 0.0:
        return Branch.LAMBDA_ZERO
    return Branch.EPS_LT_ONE


def baxendale_bound(p: DmParamsA) -> BoundReport:
    """Upper rate bound max{lambda, (1-eps)^(1/alpha_*)} for eps < 1, else lambda.

    Valid only for reversible, non-negative definite chains; the caller is
    responsible for those structural hypotheses.  beta never enters.
    """
    if p.eps >= 1.0:
        return BoundReport(value=p.lam, branch=Branch.EPS_EQ_ONE)
    a_star = baxendale_alpha_star(p)
    value = max(p.lam, (1.0 - p.eps) ** (1.0 / a_star))
    return BoundReport(
        value=value,
        branch=_branch_a(p),
        alpha_star=a_star,
        alpha_floor=floor_guarded(a_star),
    )


def paraoptima_lower(p: DmParamsA) -> BoundReport:
    """Floor on the best simple bound achievable with this exact parameter tuple.

    Identical in shape to `baxendale_bound` but with the floored exponent
    alpha = floor(alpha_*); a slow witness chain attains it, so no simple
    bound built from (lambda, K, epsilon, beta) can dip below this value.
    """
    if p.eps >= 1.0:
        return BoundReport(value=p.lam, branch=Branch.EPS_EQ_ONE)
    a_star = baxendale_alpha_star(p)
    a = floor_guarded(a_star)
    value = max(p.lam, (1.0 - p.eps) ** (1.0 / a))
    return BoundReport(value=value, branch=_branch_a(p), alpha_star=a_star, alpha_floor=a)


def rosenthal_bound(p: DmParamsB) -> BoundReport:
    """Coupling-based upper rate bound (1-eps)^(1/alpha_**) for eps < 1, else lambda-tilde.

    Requires d > 2L/(1-eta); lambda_tilde = (1+2L+eta*d)/(1+d) is then < 1.
    """
    p.require_b3()
    lam_t = (1.0 + 2.0 * p.L + p.eta * p.d) / (1.0 + p.d)
    if not lam_t < 1.0:
        raise PreconditionError(f"lambda_tilde = {lam_t} must be < 1")  # implied by b3
    K_t = 1.0 + 2.0 * p.eta * p.d + 2.0 * p.L
    if p.eps >= 1.0:
        return BoundReport(
            value=lam_t, branch=Branch.EPS_EQ_ONE, lambda_tilde=lam_t, K_tilde=K_t
        )
    log_inv = -math.log(lam_t)
    a_dd = (math.log(K_t / (1.0 - p.eps)) + log_inv) / log_inv
    value = (1.0 - p.eps) ** (1.0 / a_dd)
    return BoundReport(
        value=value,
        branch=Branch.EPS_LT_ONE,
        lambda_tilde=lam_t,
        K_tilde=K_t,
        alpha_double_star=a_dd,
    )


def rosenthal_paraoptima_lower(p: DmParamsB) -> float:
    """Floor 1 - eps on the best simple bound from the coupling conditions."""
    p.require_b3()
    return 1.0 - p.eps


def pic1_stationary_mass_lower(lam: float, K: float) -> float:
    """Lower bound log(1/lambda) / (log K + log(1/lambda)) on the small set's stationary mass.

    Interpreted as 1 when lambda = 0.  Holds for any chain satisfying the
    drift and minorization pair with these (lambda, K).
    """
    if not 0.0 <= lam < 1.0:
        raise PreconditionError(f"lambda must lie in [0, 1), got {lam}")
    if K < 1.0:
        raise PreconditionError(f"K must be >= 1, got {K}")
    if lam == 0.0:
        return 1.0
    log_inv_lam = -math.log(lam)
    return log_inv_lam / (math.log(K) + log_inv_lam)


def _as_probability(x: float, name: str) -> float:
    # summed probabilities may overshoot the unit interval by an ulp or two
    if -1e-12 <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + 1e-12:
        return 1.0
    if not 0.0 <= x <= 1.0:
        raise PreconditionError(f"{name} must lie in [0, 1], got {x}")
    return x


def chain_specific_lower_a(eps_c: float, pi_c: float) -> float:
    """Floor (1 - eps_C)^(1/floor(1/Pi(C))) on any simple bound using the set C.

    eps_c is the largest minorization constant achievable on C, pi_c the
    stationary mass of C (must be positive).
    """
    pi_c = _as_probability(pi_c, "Pi(C)")
    if pi_c == 0.0:
        raise PreconditionError("Pi(C) must be positive")
    eps_c = _as_probability(eps_c, "eps_C")
    exponent = 1.0 / floor_guarded(1.0 / pi_c)
    return (1.0 - eps_c) ** exponent


def chain_specific_lower_b(eps_c: float) -> float:
    """Floor 1 - eps_C for the coupling conditions, for any C with Pi(C) > 1/2."""
    return 1.0 - _as_probability(eps_c, "eps_C")
