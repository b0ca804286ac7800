"""Finite-chain engine: stationary laws, rates, minorization, verifiers, witnesses."""

import warnings

import numpy as np
import pytest

from dm_limits import (
    BivariateDriftSpec,
    DmParamsA,
    DmParamsB,
    DriftSpecA,
    DriftSpecB,
    FiniteChain,
    adjacency_from_chain,
    baxendale_bound,
    chain_specific_lower_a,
    cycle_walk,
    epsilon_c,
    exhaustive_chain_floor,
    is_nonneg_definite,
    is_reversible,
    load_chain_csv,
    load_chain_json,
    max_degree,
    min_majority_cardinality,
    star_walk,
    stationary_distribution,
    true_rate,
    tv_distance,
    verify_a,
    verify_b,
    verify_bivariate,
    witness_figure1,
    witness_rosenthal,
    witness_two_state,
)
from dm_limits.errors import (
    ChainFormatError,
    DecayWindowWarning,
    NonUniqueStationaryError,
    NonUniqueStationaryWarning,
    PreconditionError,
)
from dm_limits.finite_chain import chain_to_json

from conftest import random_ergodic_chain


class TestStationary:
    def test_witness_point_mass(self):
        chain, _spec = witness_figure1(DmParamsA(lam=0.5, K=10, eps=0.2))
        pi = stationary_distribution(chain)
        assert pi[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(pi[1:] == 0.0)

    def test_star_masses(self):
        pi = stationary_distribution(star_walk(10, 0.5))
        assert pi[0] == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(pi[1:], 1.0 / 20.0, atol=1e-12)

    def test_cycle_uniform(self):
        pi = stationary_distribution(cycle_walk(7))
        assert np.allclose(pi, 1.0 / 7.0, atol=1e-12)

    def test_residual_invariant(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            chain = random_ergodic_chain(rng, int(rng.integers(2, 9)))
            pi = stationary_distribution(chain)
            assert np.abs(pi @ chain.P - pi).sum() <= 1e-10

    def test_two_absorbing_states_flagged(self):
        chain = FiniteChain(np.eye(2))
        with pytest.warns(NonUniqueStationaryWarning):
            stationary_distribution(chain)
        with pytest.raises(NonUniqueStationaryError):
            true_rate(chain)


class TestStructureChecks:
    def test_cycle_reversible(self):
        chain = cycle_walk(5)
        assert is_reversible(chain, stationary_distribution(chain))

    def test_witness_trivially_reversible_on_support(self):
        chain, _ = witness_figure1(DmParamsA(lam=0.5, K=10, eps=0.2))
        assert is_reversible(chain, stationary_distribution(chain))

    def test_deterministic_cycle_not_reversible(self):
        P = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        chain = FiniteChain(P)
        assert not is_reversible(chain, stationary_distribution(chain))

    def test_star_nonneg_definite(self):
        chain = star_walk(4, 0.6)
        assert is_nonneg_definite(chain, stationary_distribution(chain))

    def test_cycle_not_nonneg_definite(self):
        chain = cycle_walk(5)
        assert not is_nonneg_definite(chain, stationary_distribution(chain))

    def test_two_state_witness_trivially_nnd(self):
        chain = witness_two_state(0.5, 0.1)
        assert is_nonneg_definite(chain, stationary_distribution(chain))

    def test_nnd_rejects_non_reversible(self):
        P = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        chain = FiniteChain(P)
        with pytest.raises(PreconditionError):
            is_nonneg_definite(chain, stationary_distribution(chain))


class TestTvDistance:
    def test_identical(self):
        assert tv_distance([0.2, 0.8], [0.2, 0.8]) == 0.0

    def test_disjoint(self):
        assert tv_distance([1.0, 0.0], [0.0, 1.0]) == 1.0

    def test_arithmetic(self):
        assert tv_distance([0.7, 0.3], [0.3, 0.7]) == pytest.approx(0.4, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(PreconditionError):
            tv_distance([1.0], [0.5, 0.5])


class TestTrueRate:
    def test_star_rate_formula(self):
        for theta in (0.1, 0.3, 0.5, 0.6, 0.9):
            for n in (2, 5, 10):
                assert true_rate(star_walk(n, theta)) == pytest.approx(
                    max(theta, 1 - 2 * theta), abs=1e-9
                )

    def test_two_state(self):
        assert true_rate(witness_two_state(0.5, 0.1)) == pytest.approx(0.4, abs=1e-12)
        assert true_rate(witness_two_state(0.9, 0.899)) == pytest.approx(0.001, abs=1e-9)

    def test_rosenthal_witness(self):
        assert true_rate(witness_rosenthal(0.3)) == pytest.approx(0.7, abs=1e-12)
        assert true_rate(witness_rosenthal(1.0)) == 0.0

    def test_figure1_transient_block_rate(self):
        chain, _ = witness_figure1(DmParamsA(lam=0.5, K=10, eps=0.19))
        assert chain.n_states == 5
        assert true_rate(chain) == pytest.approx(0.81 ** 0.25, abs=1e-9)

    def test_cycle_seven(self):
        assert true_rate(cycle_walk(7)) == pytest.approx(np.cos(np.pi / 7), abs=1e-12)

    def test_slow_cycle_warns_but_returns_spectral(self):
        with pytest.warns(DecayWindowWarning):
            r = true_rate(cycle_walk(51))
        assert r == pytest.approx(np.cos(np.pi / 51), abs=1e-12)

    def test_periodic_chain_rate_one(self):
        # deterministic 3-cycle never mixes; the rate degenerates to 1
        P = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert true_rate(FiniteChain(P)) == pytest.approx(1.0, abs=1e-12)


class TestEpsilonC:
    def test_singleton_is_one(self):
        chain = star_walk(4, 0.6)
        eps, nu = epsilon_c(chain, [2])
        assert eps == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(nu, chain.P[2])

    def test_star_pair(self):
        eps, nu = epsilon_c(star_walk(4, 0.6), [0, 1])
        assert eps == pytest.approx(0.5, abs=1e-12)
        assert nu is not None and nu.sum() == pytest.approx(1.0, abs=1e-12)

    def test_cycle_majority_zero(self):
        eps, nu = epsilon_c(cycle_walk(5), [0, 1, 2])
        assert eps == 0.0 and nu is None

    def test_monotone_under_inclusion(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            chain = random_ergodic_chain(rng, 6)
            big = sorted(rng.choice(6, size=4, replace=False).tolist())
            small = big[:2]
            assert epsilon_c(chain, big)[0] <= epsilon_c(chain, small)[0] + 1e-15


class TestVerifyA:
    def test_witness_passes_at_its_parameters(self):
        p = DmParamsA(lam=0.5, K=10, eps=0.2)
        chain, spec = witness_figure1(p)
        assert verify_a(chain, spec, p)

    def test_lowered_K_fails_at_state_one(self):
        p = DmParamsA(lam=0.5, K=10, eps=0.2)
        chain, spec = witness_figure1(p)
        res = verify_a(chain, spec, DmParamsA(lam=0.5, K=1.0, eps=0.2))
        assert not res
        assert "state 1" in res.reason

    def test_whole_space_small_set(self):
        rng = np.random.default_rng(11)
        chain = random_ergodic_chain(rng, 5)
        eps_x, _nu = epsilon_c(chain, range(5))
        assert eps_x > 0
        spec = DriftSpecA(V=np.ones(5), C=tuple(range(5)))
        p = DmParamsA(lam=0.5, K=1.0, eps=eps_x, beta=1.0)
        assert verify_a(chain, spec, p)

    def test_explicit_nu(self):
        chain = witness_rosenthal(0.5)
        spec = DriftSpecA(V=np.ones(2), C=(0, 1), nu=np.array([1.0, 0.0]))
        p = DmParamsA(lam=0.5, K=1.0, eps=0.5, beta=1.0)
        assert verify_a(chain, spec, p)
        assert not verify_a(chain, spec, DmParamsA(lam=0.5, K=1.0, eps=0.6, beta=1.0))


class TestVerifyB:
    def test_star_flat_drift(self):
        for n, theta in ((4, 0.6), (7, 0.3)):
            chain = star_walk(n, theta)
            eps = min(theta, 1 - theta)
            spec = DriftSpecB(V=np.zeros(n + 1), d=1.0)
            assert verify_b(chain, spec, DmParamsB(eta=0.0, L=0.0, eps=eps, d=1.0))

    def test_rosenthal_witness_flat_drift(self):
        chain = witness_rosenthal(0.5)
        spec = DriftSpecB(V=np.zeros(2), d=0.5)
        assert verify_b(chain, spec, DmParamsB(eta=0.0, L=0.0, eps=0.5, d=0.5))

    def test_b3_violation(self):
        chain = star_walk(4, 0.6)
        spec = DriftSpecB(V=np.full(5, 0.1), d=1.0)
        p = DmParamsB(eta=0.5, L=1.0, eps=0.1, d=1.0)
        res = verify_b(chain, spec, p)
        assert not res and "2L/(1-eta)" in res.reason


class TestVerifyBivariate:
    def test_full_product_set(self):
        chain = star_walk(4, 0.6)
        n = chain.n_states
        spec = BivariateDriftSpec(
            V1=np.full(n, 0.5),
            V2=np.full(n, 0.5),
            C_tilde=np.ones((n, n), dtype=bool),
            lambda_prime=0.5,
            K_prime=2.0,
        )
        res, mass = verify_bivariate(chain, spec)
        assert res
        assert mass == pytest.approx(2.0, abs=1e-12)

    def test_failing_pair_reported(self):
        chain = star_walk(4, 0.6)
        n = chain.n_states
        V = np.array([0.5, 5.0, 0.5, 0.5, 0.5])
        mask = np.zeros((n, n), dtype=bool)
        mask[0, 0] = True
        spec = BivariateDriftSpec(
            V1=V, V2=V, C_tilde=mask, lambda_prime=0.01, K_prime=10.0
        )
        res, _mass = verify_bivariate(chain, spec)
        assert not res
        assert "pair" in res.reason

    def test_c1_specialization_on_rosenthal_witness(self):
        chain = witness_rosenthal(0.5)
        V1 = np.zeros(2) + 0.5  # V + 1/2 with V identically zero
        mask = np.ones((2, 2), dtype=bool)  # C' x C' with C' = {0, 1}
        spec = BivariateDriftSpec(
            V1=V1, V2=V1, C_tilde=mask, lambda_prime=0.5, K_prime=1.0
        )
        res, mass = verify_bivariate(chain, spec)
        assert res
        assert mass == pytest.approx(2.0, abs=1e-12)


class TestWitnessConstruction:
    def test_figure1_drift_table(self):
        chain, spec = witness_figure1(DmParamsA(lam=0.5, K=10, eps=0.19))
        assert chain.n_states == 5
        assert spec.V[4] == pytest.approx((10 - 0.19) / 0.81, abs=1e-9)
        assert spec.V[0] == 1.0 and spec.V[1] == 1.0
        assert spec.V[2] == pytest.approx(2.0) and spec.V[3] == pytest.approx(4.0)
        assert spec.C == (0, 1)
        assert spec.nu[0] == 1.0

    def test_figure1_alpha_one_tv_decay(self):
        # K = 1 collapses to two states whose TV decay from state 1 is (1-eps)^m
        eps = 0.3
        chain, _ = witness_figure1(DmParamsA(lam=0.5, K=1.0, eps=eps))
        assert chain.n_states == 2
        pi = stationary_distribution(chain)
        row = np.array([0.0, 1.0])
        for m in range(1, 12):
            row = row @ chain.P
            assert tv_distance(row, pi) == pytest.approx((1 - eps) ** m, abs=1e-12)

    def test_figure1_lambda_zero(self):
        chain, spec = witness_figure1(DmParamsA(lam=0.0, K=5, eps=0.25))
        assert chain.n_states == 2
        assert verify_a(chain, spec, DmParamsA(lam=0.0, K=5, eps=0.25))

    def test_figure1_rejects_eps_one(self):
        with pytest.raises(PreconditionError):
            witness_figure1(DmParamsA(lam=0.5, K=10, eps=1.0))

    def test_two_state_rejects_bad_delta(self):
        with pytest.raises(PreconditionError):
            witness_two_state(0.5, 0.5)
        with pytest.raises(PreconditionError):
            witness_two_state(0.5, 0.0)

    def test_rate_vanishes_as_delta_approaches_lambda(self):
        rates = [true_rate(witness_two_state(0.5, d)) for d in (0.3, 0.45, 0.4999)]
        assert all(a > b for a, b in zip(rates, rates[1:]))
        assert rates[-1] == pytest.approx(0.0001, abs=1e-12)


class TestGraphWalks:
    def test_cycle_rejects_even_or_small(self):
        with pytest.raises(PreconditionError):
            cycle_walk(4)
        with pytest.raises(PreconditionError):
            cycle_walk(1)

    def test_cycle_three_matrix(self):
        chain = cycle_walk(3)
        assert np.allclose(chain.P, np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]]))

    def test_star_epsilon_formula(self):
        for n, theta in ((4, 0.6), (4, 0.2), (10, 0.35)):
            chain = star_walk(n, theta)
            expected = min(theta, (1 - theta) / n) + min(1 - theta, theta)
            assert epsilon_c(chain, [0, 1])[0] == pytest.approx(expected, abs=1e-12)

    def test_m0_values(self):
        assert min_majority_cardinality(np.full(7, 1 / 7)) == 4
        pi = stationary_distribution(star_walk(6, 0.4))
        assert min_majority_cardinality(pi) == 2
        assert min_majority_cardinality([0.0, 1.0, 0.0]) == 1

    def test_m1_values(self):
        assert max_degree(adjacency_from_chain(cycle_walk(7))) == 2
        assert max_degree(adjacency_from_chain(star_walk(4, 0.6))) == 4
        single_edge = np.array([[False, True], [True, False]])
        assert max_degree(single_edge) == 1

    def test_m1_rejects_asymmetric(self):
        bad = np.array([[False, True], [False, False]])
        with pytest.raises(PreconditionError):
            max_degree(bad)

    def test_cycle_gap_scales_like_n_squared(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DecayWindowWarning)
            products = [(1 - true_rate(cycle_walk(n))) * n * n for n in (51, 101, 201)]
        assert max(products) / min(products) < 2.0


class TestExhaustiveChainFloor:
    def test_floor_below_any_bound(self, corpus_a):
        # the best over all small sets can never exceed a bound computed from
        # any one valid parameter tuple
        for chain, _spec, p in corpus_a:
            if chain.n_states > 8:
                continue
            best, _C = exhaustive_chain_floor(chain)
            assert best <= baxendale_bound(p).value + 1e-12

    def test_matches_inline_enumeration(self):
        rng = np.random.default_rng(23)
        chain = random_ergodic_chain(rng, 5)
        pi = stationary_distribution(chain)
        best = 1.0
        for mask in range(1, 1 << 5):
            C = [i for i in range(5) if mask >> i & 1]
            eps_c, _ = epsilon_c(chain, C)
            best = min(best, chain_specific_lower_a(eps_c, min(float(pi[C].sum()), 1.0)))
        got, _C = exhaustive_chain_floor(chain)
        assert got == pytest.approx(best, abs=1e-15)

    def test_degenerates_through_singletons(self):
        # a singleton minorizes itself completely, so finite chains always
        # admit a zero floor through some one-state set
        value, best_set = exhaustive_chain_floor(star_walk(4, 0.6))
        assert value == 0.0
        assert len(best_set) == 1

    def test_state_cap(self):
        with pytest.raises(PreconditionError):
            exhaustive_chain_floor(cycle_walk(21))
        with pytest.warns(UserWarning, match="subsets"):
            exhaustive_chain_floor(cycle_walk(17))


class TestIngestion:
    def test_json_round_trip(self, tmp_path):
        chain = star_walk(3, 0.4)
        path = tmp_path / "chain.json"
        path.write_text(chain_to_json(chain))
        loaded = load_chain_json(path)
        assert np.allclose(loaded.P, chain.P, atol=1e-15)
        assert true_rate(loaded) == true_rate(chain)

    def test_csv_with_labels(self, tmp_path):
        path = tmp_path / "chain.csv"
        path.write_text("a,b\n0.5,0.5\n0.25,0.75\n")
        chain = load_chain_csv(path)
        assert chain.labels == ("a", "b")
        assert chain.P[1, 1] == 0.75

    def test_csv_headerless(self, tmp_path):
        path = tmp_path / "chain.csv"
        path.write_text("0.5,0.5\n0.25,0.75\n")
        assert load_chain_csv(path).labels is None

    def test_bad_row_sum_reported(self, tmp_path):
        path = tmp_path / "chain.json"
        path.write_text('{"P": [[0.5, 0.5], [0.3, 0.8]]}')
        with pytest.raises(ChainFormatError, match="1"):
            load_chain_json(path)

    def test_non_square_rejected(self, tmp_path):
        path = tmp_path / "chain.csv"
        path.write_text("0.5,0.5\n")
        with pytest.raises(ChainFormatError):
            load_chain_csv(path)

    def test_load_normalizes_within_tolerance(self, tmp_path):
        path = tmp_path / "chain.json"
        path.write_text('{"P": [[0.5, 0.5000000001], [0.25, 0.75]]}')
        chain = load_chain_json(path)
        assert abs(chain.P[0].sum() - 1.0) <= 1e-12
