"""Shared fixtures: randomized chains carrying valid drift specs.

The corpus backs the stationary-mass and majority-mass property suites: each
entry is a (chain, spec, params) triple that passes its verifier, built by
deriving the tightest parameters from a random drift function and rejecting
draws that cannot satisfy the conditions.
"""

from __future__ import annotations

import numpy as np
import pytest

from dm_limits import (
    BivariateDriftSpec,
    DmParamsA,
    DmParamsB,
    DriftSpecA,
    DriftSpecB,
    FiniteChain,
    epsilon_c,
    verify_a,
    verify_b,
    verify_bivariate,
    witness_figure1,
)


def random_ergodic_chain(rng: np.random.Generator, n: int) -> FiniteChain:
    P = rng.dirichlet(np.full(n, 2.0), size=n)
    return FiniteChain(P / P.sum(axis=1, keepdims=True))


def random_spec_a(rng: np.random.Generator, chain: FiniteChain):
    """Draw a drift spec and the tightest parameters it certifies."""
    n = chain.n_states
    states = np.arange(n)
    for _ in range(500):
        size = int(rng.integers(1, n + 1))
        C = np.sort(rng.choice(n, size=size, replace=False))
        off = np.setdiff1d(states, C)
        V = np.ones(n)
        V[C] = 1.0 + 0.2 * rng.random(size)
        V[off] = 3.0 + 2.0 * rng.random(off.size)
        PV = chain.P @ V
        if off.size:
            lam = float(np.max(PV[off] / V[off]))
            if lam >= 0.999:
                continue
        else:
            lam = float(rng.uniform(0.1, 0.9))
        K = max(1.0, float(PV[C].max()))
        eps_max, nu = epsilon_c(chain, C)
        if nu is None or eps_max <= 1e-6:
            continue
        beta = min(1.0, float(nu[C].sum()))
        if beta <= 1e-9:
            continue
        eps = min(1.0, float(rng.uniform(0.2, 1.0)) * eps_max)
        p = DmParamsA(lam=lam, K=K, eps=eps, beta=beta)
        spec = DriftSpecA(V=V, C=tuple(int(i) for i in C))
        res = verify_a(chain, spec, p)
        assert res, res.reason
        return spec, p
    raise RuntimeError("failed to draw a valid drift spec")


def random_spec_b(rng: np.random.Generator, chain: FiniteChain):
    n = chain.n_states
    for _ in range(500):
        V = rng.exponential(scale=2.0, size=n)
        eta = float(rng.uniform(0.1, 0.9))
        PV = chain.P @ V
        L = max(0.0, float(np.max(PV - eta * V)))
        d = 2.0 * L / (1.0 - eta) * (1.0 + float(rng.uniform(0.05, 2.0))) + float(
            rng.uniform(0.01, 0.5)
        )
        spec = DriftSpecB(V=V, d=d)
        C = spec.level_set()
        if C.size == 0:
            continue
        eps_max, nu = epsilon_c(chain, C)
        if nu is None or eps_max <= 1e-6:
            continue
        eps = min(1.0, float(rng.uniform(0.2, 1.0)) * eps_max)
        p = DmParamsB(eta=eta, L=L, eps=eps, d=d)
        res = verify_b(chain, spec, p)
        assert res, res.reason
        return spec, p
    raise RuntimeError("failed to draw a valid coupling spec")


def random_bivariate_spec(rng: np.random.Generator, chain: FiniteChain):
    n = chain.n_states
    for _ in range(500):
        V1 = 0.25 + rng.exponential(scale=1.5, size=n)
        V2 = 0.25 + rng.exponential(scale=1.5, size=n)
        S = (chain.P @ V1)[:, None] + (chain.P @ V2)[None, :]
        B = V1[:, None] + V2[None, :]
        for q in (0.3, 0.5, 0.7, 0.9):
            inside = B <= np.quantile(B, q)
            if not inside.any():
                continue
            outside = ~inside
            lam_p = float((S[outside] / B[outside]).max()) if outside.any() else 0.5
            if lam_p >= 0.999:
                continue
            spec = BivariateDriftSpec(
                V1=V1,
                V2=V2,
                C_tilde=inside,
                lambda_prime=lam_p,
                K_prime=float(S[inside].max()),
            )
            res, _mass = verify_bivariate(chain, spec)
            assert res, res.reason
            return spec
    raise RuntimeError("failed to draw a valid bivariate spec")


@pytest.fixture(scope="session")
def corpus_a():
    """Witness chains plus 100 random chains of up to 6 states, with A-specs."""
    rng = np.random.default_rng(20240801)
    triples = []
    for lam in (0.0, 0.3, 0.6):
        for K in (1.0, 5.0, 40.0):
            for eps in (0.2, 0.7):
                p = DmParamsA(lam=lam, K=K, eps=eps)
                chain, spec = witness_figure1(p)
                triples.append((chain, spec, p))
    for _ in range(100):
        chain = random_ergodic_chain(rng, int(rng.integers(2, 7)))
        spec, p = random_spec_a(rng, chain)
        triples.append((chain, spec, p))
    return triples


@pytest.fixture(scope="session")
def corpus_b():
    rng = np.random.default_rng(20240802)
    triples = []
    for _ in range(100):
        chain = random_ergodic_chain(rng, int(rng.integers(2, 7)))
        spec, p = random_spec_b(rng, chain)
        triples.append((chain, spec, p))
    return triples


@pytest.fixture(scope="session")
def corpus_bivariate():
    rng = np.random.default_rng(20240803)
    pairs = []
    for _ in range(60):
        chain = random_ergodic_chain(rng, int(rng.integers(2, 7)))
        pairs.append((chain, random_bivariate_spec(rng, chain)))
    return pairs
