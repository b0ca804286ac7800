"""Exact finite-state Markov chain engine.

Stationary analysis, spectral convergence rates, attainable minorization
constants, drift-condition verifiers, and the explicit slow witness chains
whose rates meet the floors in `dm_bounds` exactly.  Everything here is the
brute-force oracle side of the package: small dense matrices, deterministic
linear algebra, no sampling.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .dm_bounds import DmParamsA, DmParamsB, baxendale_alpha_star
from .errors import (
    ChainFormatError,
    DecayWindowWarning,
    InvariantViolation,
    NonUniqueStationaryError,
    NonUniqueStationaryWarning,
    PreconditionError,
    RateCheckError,
)
from .numerics import floor_guarded

__all__ = [
    "FiniteChain",
    "DriftSpecA",
    "DriftSpecB",
    "BivariateDriftSpec",
    "VerifyResult",
    "stationary_distribution",
    "is_reversible",
    "is_nonneg_definite",
    "tv_distance",
    "true_rate",
    "epsilon_c",
    "verify_a",
    "verify_b",
    "verify_bivariate",
    "witness_figure1",
    "witness_two_state",
    "witness_rosenthal",
    "cycle_walk",
    "star_walk",
    "exhaustive_chain_floor",
    "min_majority_cardinality",
    "max_degree",
    "adjacency_from_chain",
    "load_chain_json",
    "load_chain_csv",
    "chain_to_json",
]

_ROW_SUM_TOL = 1e-12
#  TV window used by the decay cross-check in true_rate
_CHECK_LO, _CHECK_HI = 50, 200


@dataclass(frozen=True)
class FiniteChain:
    """A row-stochastic transition matrix with optional state labels."""

    P: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        P = np.array(self.P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
            raise ChainFormatError("transition matrix must be square and nonempty")
        if (P < 0).any():
            i, j = np.argwhere(P < 0)[0]
            raise ChainFormatError(f"negative entry P[{i},{j}] = {P[i, j]}")
        bad = np.flatnonzero(np.abs(P.sum(axis=1) - 1.0) > _ROW_SUM_TOL)
        if bad.size:
            raise ChainFormatError(
                f"row {bad[0]} sums to {P[bad[0]].sum():.15g}, not 1 within {_ROW_SUM_TOL}"
            )
        if self.labels is not None and len(self.labels) != P.shape[0]:
            raise ChainFormatError("label count must match the number of states")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @property
    def n_states(self) -> int:
        return self.P.shape[0]


@dataclass(frozen=True)
class DriftSpecA:
    """Drift function V >= 1, small set C, and optional minorization measure."""

    V: np.ndarray
    C: tuple[int, ...]
    nu: np.ndarray | None = None

    def __post_init__(self) -> None:
        V = np.asarray(self.V, dtype=float)
        if (V < 1.0).any():
            raise PreconditionError("drift function must satisfy V >= 1 everywhere")
        object.__setattr__(self, "V", V)
        C = tuple(sorted(set(int(i) for i in self.C)))
        if not C:
            raise PreconditionError("small set must be nonempty")
        object.__setattr__(self, "C", C)
        if self.nu is not None:
            nu = np.asarray(self.nu, dtype=float)
            if (nu < 0).any() or abs(nu.sum() - 1.0) > 1e-9:
                raise PreconditionError("nu must be a probability vector")
            object.__setattr__(self, "nu", nu)


@dataclass(frozen=True)
class DriftSpecB:
    """Drift function V >= 0 with level threshold d; the small set is {V <= d}."""

    V: np.ndarray
    d: float

    def __post_init__(self) -> None:
        V = np.asarray(self.V, dtype=float)
        if (V < 0.0).any():
            raise PreconditionError("drift function must satisfy V >= 0 everywhere")
        if self.d <= 0:
            raise PreconditionError("level threshold d must be positive")
        object.__setattr__(self, "V", V)

    def level_set(self) -> np.ndarray:
        return np.flatnonzero(self.V <= self.d)


@dataclass(frozen=True)
class BivariateDriftSpec:
    """Two drift functions and a set of state pairs for the bivariate condition."""

    V1: np.ndarray
    V2: np.ndarray
    C_tilde: np.ndarray  # boolean n x n mask over state pairs
    lambda_prime: float
    K_prime: float

    def __post_init__(self) -> None:
        V1 = np.asarray(self.V1, dtype=float)
        V2 = np.asarray(self.V2, dtype=float)
        mask = np.asarray(self.C_tilde, dtype=bool)
        if (V1 < 0).any() or (V2 < 0).any():
            raise PreconditionError("bivariate drift functions must be nonnegative")
        if V1.min() + V2.min() <= 0:
            raise PreconditionError("inf over pairs of V1(x) + V2(y) must be positive")
        if not self.lambda_prime < 1:
            raise PreconditionError("lambda_prime must be < 1")
        if not 0 < self.K_prime < math.inf:
            raise PreconditionError("K_prime must lie in (0, inf)")
        if mask.shape != (V1.size, V2.size):
            raise PreconditionError("C_tilde mask must be n x n")
        object.__setattr__(self, "V1", V1)
        object.__setattr__(self, "V2", V2)
        object.__setattr__(self, "C_tilde", mask)

    def projections(self) -> tuple[np.ndarray, np.ndarray]:
        return np.flatnonzero(self.C_tilde.any(axis=1)), np.flatnonzero(self.C_tilde.any(axis=0))


@dataclass(frozen=True)
class VerifyResult:
    """Boolean verdict plus the first violated condition, if any."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# structure and stationary analysis


def _communicating_classes(P: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Strongly connected components of the support graph; returns (closed classes, labels)."""
    graph = csr_matrix((P > 0).astype(np.int8))
    n_comp, labels = connected_components(graph, directed=True, connection="strong")
    closed = []
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        outside = np.flatnonzero(labels != c)
        if outside.size == 0 or P[np.ix_(idx, outside)].sum() == 0.0:
            closed.append(idx)
    return closed, labels


def _solve_stationary(P: np.ndarray) -> np.ndarray:
    # pi (P - I) = 0 plus normalization, as a deterministic least-squares solve
    n = P.shape[0]
    A = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def stationary_distribution(chain: FiniteChain) -> np.ndarray:
    """Solve pi = pi P exactly on the recurrent class, zero on transient states.

    A reducible chain with several recurrent classes has no unique stationary
    law; a warning is emitted and the least-squares solution over the full
    space is returned.  Chains with one absorbing state and otherwise
    transient states are fine: the point mass is unique.
    """
    P = chain.P
    closed, _ = _communicating_classes(P)
    if len(closed) != 1:
        warnings.warn(
            f"chain has {len(closed)} recurrent classes; stationary law is not unique",
            NonUniqueStationaryWarning,
            stacklevel=2,
        )
        pi = _solve_stationary(P)
    else:
        R = closed[0]
        pi = np.zeros(chain.n_states)
        pi[R] = _solve_stationary(P[np.ix_(R, R)])
    residual = np.abs(pi @ P - pi).sum()
    if residual > 1e-10:
        raise InvariantViolation(f"stationary solve residual {residual:.3e} exceeds 1e-10")
    return pi


def tv_distance(mu: Sequence[float], nu: Sequence[float]) -> float:
    """Total variation distance, half the L1 distance on a finite space."""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if mu.shape != nu.shape:
        raise PreconditionError("distributions must have equal length")
    return 0.5 * float(np.abs(mu - nu).sum())


def is_reversible(chain: FiniteChain, pi: np.ndarray, tol: float = 1e-9) -> bool:
    """Detailed balance pi(x)P(x,y) = pi(y)P(y,x), restricted to the support of pi."""
    sup = np.flatnonzero(pi > 1e-14)
    F = pi[sup, None] * chain.P[np.ix_(sup, sup)]
    return bool(np.abs(F - F.T).max() <= tol)


def is_nonneg_definite(chain: FiniteChain, pi: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the pi-symmetrized transition matrix has spectrum >= -tol on the support."""
    if not is_reversible(chain, pi, tol=max(tol, 1e-9)):
        raise PreconditionError("non-negative definiteness requires a reversible chain")
    sup = np.flatnonzero(pi > 1e-14)
    if sup.size == 1:
        return True
    s = np.sqrt(pi[sup])
    M = (s[:, None] / s[None, :]) * chain.P[np.ix_(sup, sup)]
    eigs = np.linalg.eigvalsh(0.5 * (M + M.T))
    return bool(eigs.min() >= -tol)


# ---------------------------------------------------------------------------
# convergence rate


def _matrix_power(P: np.ndarray, m: int) -> np.ndarray:
    out = np.eye(P.shape[0])
    base = P
    while m:
        if m & 1:
            out = out @ base
        m >>= 1
        if m:
            base = base @ base
    return out


def _decay_cross_check(chain: FiniteChain, pi: np.ndarray, rho: float, tol: float) -> None:
    """Compare the spectral rate against the observed TV decay over a window.

    The guard exists to catch defective eigenstructure or a wrong branch in
    the spectral construction.  Three outcomes: silently consistent, a
    DecayWindowWarning when the window cannot resolve the rate (rates very
    close to 1 need windows longer than the chain's mixing time), or a
    RateCheckError on genuine disagreement.
    """
    n = chain.n_states
    if n > 400:
        warnings.warn(
            "decay cross-check skipped for chains above 400 states", DecayWindowWarning,
            stacklevel=3,
        )
        return
    if rho > 0.985:
        # over the m = 50..200 window the TV would shrink by less than one
        # decade, which cannot pin the rate to 1e-3
        warnings.warn(
            f"rate {rho:.6f} too close to 1 for the decay window; cross-check inconclusive",
            DecayWindowWarning,
            stacklevel=3,
        )
        return

    # Propagate the deviation from stationarity rather than the raw row:
    # (row - pi) P = row P - pi, and the deviation vector keeps full relative
    # accuracy where `1 - tiny` would freeze at machine epsilon.  Roundoff
    # leaks a component along pi itself (eigenvalue 1, never contracts), so
    # re-impose the zero-sum constraint after every multiply.
    def _tv_series(v: np.ndarray, m_first: int, m_last: int):
        v = v - v.sum() * pi
        ms, tvs = [], []
        for m in range(m_first, m_last + 1):
            if m > m_first:
                v = v @ chain.P
                v -= v.sum() * pi
            ms.append(m)
            tvs.append(0.5 * float(np.abs(v).sum()))
        return np.array(ms, dtype=float), np.array(tvs)

    A = _matrix_power(chain.P, _CHECK_LO)
    dev_rows = A - pi
    tv_rows = 0.5 * np.abs(dev_rows).sum(axis=1)
    ms_arr, tv_arr = _tv_series(
        dev_rows[int(np.argmax(tv_rows))].copy(), _CHECK_LO, _CHECK_HI
    )
    usable = tv_arr > 1e-250

    if usable.sum() < 12:
        # the chain decays too fast for the default window; refit early
        dev1 = chain.P - pi
        x = int(np.argmax(0.5 * np.abs(dev1).sum(axis=1)))
        ms_arr, tv_arr = _tv_series(dev1[x].copy(), 1, _CHECK_LO - 1)
        usable = tv_arr > 1e-250
        if usable.sum() < 3:
            if rho <= tol:  # immediate absorption; nothing to fit and nothing to contradict
                return
            raise RateCheckError(
                f"TV decay vanished within a few steps but spectral rate is {rho:.6g}"
            )

    m_u = ms_arr[usable]
    log_tv = np.log(tv_arr[usable])
    slope = np.polyfit(m_u, log_tv, 1)[0]
    if abs(math.exp(slope) - rho) <= tol:
        return

    # Staircase decay (renewal-style chains) defeats a plain linear fit: the
    # TV drops only every alpha steps.  Endpoint ratios whose spacing is a
    # multiple of the period recover the rate exactly, so accept the spectral
    # value if any pair alignment does.
    half = len(m_u) // 2
    if half >= 1:
        la = log_tv[:half]
        lb = log_tv[half:]
        ma = m_u[:half]
        mb = m_u[half:]
        with np.errstate(divide="ignore", invalid="ignore"):
            est = np.exp((lb[None, :] - la[:, None]) / (mb[None, :] - ma[:, None]))
        if np.nanmin(np.abs(est - rho)) <= tol:
            return
    raise RateCheckError(
        f"spectral rate {rho:.9g} disagrees with observed TV decay "
        f"(fit {math.exp(slope):.9g}) beyond {tol}"
    )


def true_rate(chain: FiniteChain, cross_check: bool = True, check_tol: float = 1e-3) -> float:
    """Exact geometric decay rate of max_x d_TV(delta_x P^m, pi).

    On the recurrent class this is the largest eigenvalue modulus after
    removing the stationary eigenvalue 1; chains with transient states
    contribute the spectral radius of the transient block as well.  The
    result is cross-validated against the observed TV decay unless
    `cross_check` is disabled.
    """
    P = chain.P
    closed, _labels = _communicating_classes(P)
    if len(closed) != 1:
        raise NonUniqueStationaryError(
            f"true rate needs a unique stationary law; found {len(closed)} recurrent classes"
        )
    R = closed[0]
    if R.size > 1:
        ev = np.linalg.eigvals(P[np.ix_(R, R)])
        keep = np.ones(ev.size, dtype=bool)
        keep[int(np.argmin(np.abs(ev - 1.0)))] = False
        rho_recurrent = float(np.abs(ev[keep]).max())
    else:
        rho_recurrent = 0.0

    transient = np.flatnonzero(~np.isin(np.arange(chain.n_states), R))
    if transient.size:
        rho_transient = float(
            np.abs(np.linalg.eigvals(P[np.ix_(transient, transient)])).max()
        )
    else:
        rho_transient = 0.0

    rho = min(max(rho_recurrent, rho_transient), 1.0)
    if cross_check:
        pi = np.zeros(chain.n_states)
        pi[R] = _solve_stationary(P[np.ix_(R, R)])
        _decay_cross_check(chain, pi, rho, check_tol)
    return rho


# ---------------------------------------------------------------------------
# minorization and condition verifiers


def _as_index_set(chain: FiniteChain, C: Iterable[int]) -> np.ndarray:
    idx = np.array(sorted(set(int(i) for i in C)), dtype=int)
    if idx.size == 0:
        raise PreconditionError("state set must be nonempty")
    if idx.min() < 0 or idx.max() >= chain.n_states:
        raise PreconditionError("state index out of range")
    return idx


def epsilon_c(chain: FiniteChain, C: Iterable[int]) -> tuple[float, np.ndarray | None]:
    """Largest minorization constant on C and the measure attaining it.

    On a finite space the supremum is the sum of column minima of P over rows
    in C; the optimal measure is that column-minimum vector normalized.
    Returns (eps_C, nu), with nu = None when eps_C = 0.
    """
    idx = _as_index_set(chain, C)
    col_min = chain.P[idx].min(axis=0)
    eps = min(float(col_min.sum()), 1.0)  # row-sum roundoff can leak past 1
    if eps <= 0.0:
        return 0.0, None
    return eps, col_min / eps


def verify_a(
    chain: FiniteChain, spec: DriftSpecA, p: DmParamsA, tol: float = 1e-9
) -> VerifyResult:
    """Check the drift, minorization, and strong-aperiodicity conditions.

    Drift off the small set within tol, PV <= K on it, minorization with the
    supplied measure (or the best achievable one when absent), and nu(C) >= beta.
    """
    P, V = chain.P, spec.V
    if V.size != chain.n_states:
        raise PreconditionError("drift table length must match the chain")
    idx = np.asarray(spec.C, dtype=int)
    in_C = np.zeros(chain.n_states, dtype=bool)
    in_C[idx] = True
    PV = P @ V

    off = np.flatnonzero(~in_C)
    bad = off[PV[off] > p.lam * V[off] + tol] if off.size else np.array([], dtype=int)
    if bad.size:
        x = int(bad[0])
        return VerifyResult(False, f"drift fails at state {x}: PV = {PV[x]:.9g} > lambda*V = {p.lam * V[x]:.9g}")
    bad = idx[PV[idx] > p.K + tol]
    if bad.size:
        x = int(bad[0])
        return VerifyResult(False, f"drift fails at state {x}: PV = {PV[x]:.9g} > K = {p.K:.9g}")

    if spec.nu is not None:
        nu = spec.nu
        deficit = p.eps * nu[None, :] - P[idx] - tol
        if (deficit > 0).any():
            x = int(idx[np.argwhere(deficit > 0)[0][0]])
            return VerifyResult(False, f"minorization fails at state {x} with eps = {p.eps}")
    else:
        eps_max, nu = epsilon_c(chain, idx)
        if nu is None or p.eps > eps_max + tol:
            return VerifyResult(
                False, f"minorization fails: eps = {p.eps} exceeds attainable {eps_max:.9g}"
            )
    mass_on_C = float(nu[idx].sum())
    if mass_on_C < p.beta - tol:
        return VerifyResult(
            False, f"strong aperiodicity fails: nu(C) = {mass_on_C:.9g} < beta = {p.beta}"
        )
    return VerifyResult(True)


def verify_b(
    chain: FiniteChain, spec: DriftSpecB, p: DmParamsB, tol: float = 1e-9
) -> VerifyResult:
    """Check the coupling-style conditions: PV <= eta V + L, minorization on {V <= d}, d threshold."""
    P, V = chain.P, spec.V
    if V.size != chain.n_states:
        raise PreconditionError("drift table length must match the chain")
    if spec.d != p.d:
        raise PreconditionError("spec level d and parameter d must agree")
    PV = P @ V
    bad = np.flatnonzero(PV > p.eta * V + p.L + tol)
    if bad.size:
        x = int(bad[0])
        return VerifyResult(
            False, f"drift fails at state {x}: PV = {PV[x]:.9g} > eta*V + L = {p.eta * V[x] + p.L:.9g}"
        )
    if not p.b3:
        return VerifyResult(
            False, f"level d = {p.d} does not exceed 2L/(1-eta) = {p.b3_threshold:.9g}"
        )
    C = spec.level_set()
    if C.size == 0:
        return VerifyResult(False, "level set {V <= d} is empty")
    eps_max, nu = epsilon_c(chain, C)
    if nu is None or p.eps > eps_max + tol:
        return VerifyResult(
            False, f"minorization fails on level set: eps = {p.eps} exceeds attainable {eps_max:.9g}"
        )
    return VerifyResult(True)


def verify_bivariate(
    chain: FiniteChain, spec: BivariateDriftSpec, tol: float = 1e-9
) -> tuple[VerifyResult, float]:
    """Check the bivariate drift inequality over all state pairs.

    Returns (holds, mass_sum) where mass_sum = Pi(C1) + Pi(C2) over the
    projections of the pair set.  Whenever the inequality holds, mass_sum
    must exceed 1; that consequence is enforced.
    """
    P = chain.P
    PV1, PV2 = P @ spec.V1, P @ spec.V2
    S = PV1[:, None] + PV2[None, :]
    B = spec.V1[:, None] + spec.V2[None, :]
    inside = spec.C_tilde
    viol_out = (~inside) & (S > spec.lambda_prime * B + tol)
    viol_in = inside & (S > spec.K_prime + tol)
    pi = stationary_distribution(chain)
    C1, C2 = spec.projections()
    mass_sum = float(pi[C1].sum() + pi[C2].sum())
    if viol_out.any():
        x, y = map(int, np.argwhere(viol_out)[0])
        return VerifyResult(False, f"bivariate drift fails at pair ({x}, {y})"), mass_sum
    if viol_in.any():
        x, y = map(int, np.argwhere(viol_in)[0])
        return VerifyResult(False, f"bound K' fails at pair ({x}, {y})"), mass_sum
    if mass_sum <= 1.0:
        raise InvariantViolation(
            f"bivariate drift holds but Pi(C1) + Pi(C2) = {mass_sum:.12g} <= 1"
        )
    return VerifyResult(True), mass_sum


# ---------------------------------------------------------------------------
# witness chains and graph walks


def witness_figure1(p: DmParamsA) -> tuple[FiniteChain, DriftSpecA]:
    """The renewal witness chain on {0, ..., alpha} with alpha = floor(alpha_*).

    State 0 is absorbing; state 1 falls to 0 with probability eps and jumps
    to alpha otherwise; higher states step down deterministically.  Returns
    the chain with the drift table that certifies the conditions at exactly
    the parameters p (small set {0, 1}, point mass at 0 as minorization
    measure).  Its rate is (1 - eps)^(1/alpha).
    """
    if p.eps >= 1.0:
        raise PreconditionError("the witness construction needs epsilon < 1")
    alpha = floor_guarded(baxendale_alpha_star(p))
    n = alpha + 1
    P = np.zeros((n, n))
    P[0, 0] = 1.0
    P[1, 0] = p.eps
    P[1, alpha] += 1.0 - p.eps
    for x in range(2, n):
        P[x, x - 1] = 1.0
    V = np.ones(n)
    V[alpha] = (p.K - p.eps) / (1.0 - p.eps)
    for x in range(1, alpha):
        V[x] = p.lam ** (-x + 1)
    nu = np.zeros(n)
    nu[0] = 1.0
    return FiniteChain(P), DriftSpecA(V=V, C=(0, 1), nu=nu)


def witness_two_state(lam: float, delta: float) -> FiniteChain:
    """Two-state witness with an absorbing state and rate exactly lam - delta."""
    if not 0.0 < lam < 1.0:
        raise PreconditionError("lambda must lie in (0, 1)")
    if not 0.0 < delta < lam:
        raise PreconditionError("delta must lie in (0, lambda)")
    stay = lam - delta
    return FiniteChain(np.array([[1.0, 0.0], [1.0 - stay, stay]]))


def witness_rosenthal(eps: float) -> FiniteChain:
    """Two-state witness for the coupling conditions; rate exactly 1 - eps."""
    if not 0.0 < eps <= 1.0:
        raise PreconditionError("epsilon must lie in (0, 1]")
    return FiniteChain(np.array([[1.0, 0.0], [eps, 1.0 - eps]]))


def cycle_walk(n: int) -> FiniteChain:
    """Nearest-neighbour random walk on the n-cycle, n odd and >= 3."""
    if n < 3 or n % 2 == 0:
        raise PreconditionError("cycle walk needs an odd n >= 3")
    P = np.zeros((n, n))
    for x in range(n):
        P[x, (x - 1) % n] = 0.5
        P[x, (x + 1) % n] = 0.5
    return FiniteChain(P)


def star_walk(n: int, theta: float) -> FiniteChain:
    """Lazy walk on the star graph: hub state 0 plus n leaves.

    The chain holds with probability theta everywhere; from the hub it
    spreads the rest uniformly over leaves, from a leaf it returns to the hub.
    """
    if n < 1:
        raise PreconditionError("star walk needs at least one leaf")
    if not 0.0 < theta < 1.0:
        raise PreconditionError("theta must lie in (0, 1)")
    P = np.zeros((n + 1, n + 1))
    P[0, 0] = theta
    P[0, 1:] = (1.0 - theta) / n
    for i in range(1, n + 1):
        P[i, i] = theta
        P[i, 0] = 1.0 - theta
    return FiniteChain(P)


def exhaustive_chain_floor(chain: FiniteChain) -> tuple[float, tuple[int, ...]]:
    """Smallest set-specific floor over every subset with positive stationary mass.

    Evaluates (1 - eps_C)^(1/floor(1/Pi(C))) for all 2^n - 1 candidate small
    sets and returns the minimum with its attaining set.  Any simple bound
    computable for this chain from valid drift/minorization parameters is at
    least this value.  Exhaustive enumeration is desk-scale: chains above 20
    states are rejected, above 16 a warning is emitted first.
    """
    from .dm_bounds import chain_specific_lower_a

    n = chain.n_states
    if n > 20:
        raise PreconditionError("exhaustive enumeration is capped at 20 states")
    if n > 16:
        warnings.warn(
            f"enumerating {2 ** n - 1} subsets of a {n}-state chain", UserWarning,
            stacklevel=2,
        )
    pi = stationary_distribution(chain)
    best, best_set = 1.0, tuple(range(n))
    for mask in range(1, 1 << n):
        C = [i for i in range(n) if mask >> i & 1]
        mass = float(pi[C].sum())
        if mass <= 0.0:
            continue
        eps, _nu = epsilon_c(chain, C)
        value = chain_specific_lower_a(eps, min(mass, 1.0))
        if value < best:
            best, best_set = value, tuple(C)
    return best, best_set


def min_majority_cardinality(pi: Sequence[float]) -> int:
    """Smallest number of states whose stationary mass strictly exceeds 1/2.

    Greedy selection in decreasing mass order is optimal for this objective.
    """
    pi = np.asarray(pi, dtype=float)
    if (pi < 0).any() or abs(pi.sum() - 1.0) > 1e-9:
        raise PreconditionError("pi must be a probability vector")
    cum = np.cumsum(np.sort(pi)[::-1])
    above = np.flatnonzero(cum > 0.5 + 1e-9)
    if above.size == 0:
        raise InvariantViolation("no majority set found; mass does not sum to 1?")
    return int(above[0] + 1)


def max_degree(adjacency: np.ndarray) -> int:
    """Maximum vertex degree of a graph given as a symmetric boolean matrix."""
    A = np.asarray(adjacency, dtype=bool)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise PreconditionError("adjacency must be square")
    if (A != A.T).any():
        raise PreconditionError("adjacency must be symmetric")
    if A.diagonal().any():
        raise PreconditionError("adjacency must have no self-loops")
    return int(A.sum(axis=1).max())


def adjacency_from_chain(chain: FiniteChain) -> np.ndarray:
    """Underlying undirected graph: an edge wherever either direction moves mass."""
    A = (chain.P > 0) | (chain.P.T > 0)
    np.fill_diagonal(A, False)
    return A


# ---------------------------------------------------------------------------
# ingestion

_LOAD_TOL = 1e-9


def _finish_load(P: np.ndarray, labels: tuple[str, ...] | None) -> FiniteChain:
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ChainFormatError("matrix must be square")
    if (P < -1e-12).any():
        i, j = np.argwhere(P < -1e-12)[0]
        raise ChainFormatError(f"negative entry P[{i},{j}] = {P[i, j]}")
    sums = P.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > _LOAD_TOL)
    if bad.size:
        rows = ", ".join(f"{i} (sum {sums[i]:.12g})" for i in bad[:5])
        raise ChainFormatError(f"rows not summing to 1 within {_LOAD_TOL}: {rows}")
    P = np.clip(P, 0.0, None)
    P = P / P.sum(axis=1, keepdims=True)
    return FiniteChain(P, labels=labels)


def load_chain_json(source: str | Path) -> FiniteChain:
    """Load a chain from a JSON object {"labels": [...], "P": [[...], ...]}."""
    text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ChainFormatError(f"invalid JSON: {e}") from e
    if "P" not in obj:
        raise ChainFormatError('JSON chain must contain a "P" matrix')
    P = np.asarray(obj["P"], dtype=float)
    labels = tuple(str(x) for x in obj["labels"]) if obj.get("labels") else None
    return _finish_load(P, labels)


def load_chain_csv(source: str | Path) -> FiniteChain:
    """Load a chain from CSV: a square matrix with an optional header row of labels."""
    lines = [ln.strip() for ln in Path(source).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ChainFormatError("empty CSV file")
    labels = None
    first = lines[0].split(",")
    try:
        [float(tok) for tok in first]
    except ValueError:
        labels = tuple(tok.strip() for tok in first)
        lines = lines[1:]
    try:
        P = np.array([[float(tok) for tok in ln.split(",")] for ln in lines])
    except ValueError as e:
        raise ChainFormatError(f"non-numeric matrix entry: {e}") from e
    return _finish_load(P, labels)


def chain_to_json(chain: FiniteChain) -> str:
    obj: dict = {"P": chain.P.tolist()}
    if chain.labels is not None:
        obj["labels"] = list(chain.labels)
    return json.dumps(obj, sort_keys=True)
