import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesarolab import (
    CounterexampleSpec,
    Seed,
    SequenceSpec,
    TailBoundParams,
    UnsupportedFamilyError,
    block_bernoulli_prob,
    sample_borel_cantelli,
    sample_counterexample,
    sample_exp_tail,
    sample_path,
    sample_power_law,
    sample_supermartingale,
)
from tests.conftest import proportion_se


class TestSeed:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Seed(-1)
        with pytest.raises(ValueError):
            Seed(2**64)

    def test_child_offsets_stream(self):
        s = Seed(5, stream_id=7)
        assert s.child(3) == Seed(5, stream_id=10)


class TestBlockBernoulliProb:
    def test_first_index_is_one(self):
        assert block_bernoulli_prob(1, 0.7) == 1.0

    def test_dyadic_block_boundary(self):
        # floor(log2 1023) = 9 -> 512**-0.5
        assert block_bernoulli_prob(1023, 0.5) == pytest.approx(0.04419417382415922, rel=1e-14)

    @settings(max_examples=50)
    @given(k=st.integers(1, 40), alpha=st.floats(0.05, 0.95))
    def test_constant_on_each_block(self, k, alpha):
        lo, hi = 2 ** (k - 1), 2**k - 1
        probe = np.unique(np.clip(np.array([lo, (lo + hi) // 2, hi]), lo, hi))
        vals = block_bernoulli_prob(probe, alpha)
        assert np.all(vals == vals[0])
        assert vals[0] == pytest.approx(2.0 ** (-alpha * (k - 1)), rel=1e-13)

    def test_strictly_decreasing_across_blocks(self):
        starts = 2 ** np.arange(0, 20)
        vals = block_bernoulli_prob(starts, 0.3)
        assert np.all(np.diff(vals) < 0)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            block_bernoulli_prob(0, 0.5)
        with pytest.raises(ValueError):
            block_bernoulli_prob(4, 0.0)


class TestCounterexampleFamily:
    def test_spec_validation(self):
        with pytest.raises(ValueError):
            CounterexampleSpec(alpha=0.6, beta=0.4)
        with pytest.raises(ValueError):
            CounterexampleSpec(alpha=0.4, beta=0.6, bound_b=0.0)

    def test_first_draw_always_b(self, seed):
        spec = CounterexampleSpec(0.4, 0.6, bound_b=2.5)
        for rep in range(20):
            assert sample_counterexample(spec, 3, seed.child(rep))[0] == 2.5

    def test_values_in_two_point_support(self, seed):
        spec = CounterexampleSpec(0.3, 0.7, bound_b=1.5)
        path = sample_counterexample(spec, 4096, seed)
        assert set(np.unique(path)).issubset({0.0, 1.5})

    def test_block_mean_matches_block_probability(self, seed):
        # mean over block [2^7, 2^8 - 1] across 10^4 paths ~ 128**-0.5
        spec = CounterexampleSpec(0.5, 0.7)
        reps, k = 10**4, 8
        lo, hi = 2 ** (k - 1), 2**k - 1
        total = 0.0
        for rep in range(reps):
            path = sample_counterexample(spec, hi, seed.child(rep))
            total += path[lo - 1 : hi].mean()
        est = total / reps
        p = 2.0 ** (-(k - 1) * 0.5)
        se = math.sqrt(p * (1 - p) / (reps * (hi - lo + 1)))
        assert abs(est - p) <= 3 * se

    def test_bitwise_determinism(self, seed):
        spec = CounterexampleSpec(0.4, 0.6)
        a = sample_counterexample(spec, 1000, seed)
        b = sample_counterexample(spec, 1000, seed)
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("n", [2**8, 2**12, 2**16])
    def test_marginal_tail_equals_block_probability(self, seed, n):
        # pr(X_n >= M n**-beta) = p_n for any M with 0 < M n**-beta <= b
        spec = CounterexampleSpec(0.4, 0.6)
        reps = 4000 if n < 2**16 else 1500
        M = 1.0
        thr = M * n**-spec.beta
        hits = 0
        for rep in range(reps):
            path = sample_counterexample(spec, n, seed.child(rep))
            hits += path[n - 1] >= thr
        p_hat = hits / reps
        p_exact = block_bernoulli_prob(n, spec.alpha)
        assert abs(p_hat - p_exact) <= 3 * proportion_se(p_exact, reps)


class TestExpTailFamily:
    def test_requires_unit_gamma_and_c1(self, seed):
        p = TailBoundParams(1, 2.0, 1, 0.5, 1.0, 0.75)
        with pytest.raises(UnsupportedFamilyError):
            sample_exp_tail(p, 10, seed)
        p2 = TailBoundParams(1, 1, 1, 0.5, 0.5, 0.9)
        with pytest.raises(UnsupportedFamilyError):
            sample_exp_tail(p2, 10, seed)

    def test_support_above_drift(self, canonical_params, seed):
        path = sample_exp_tail(canonical_params, 500, seed)
        drift = np.arange(1, 501, dtype=float) ** -0.5
        assert np.all(path >= drift)

    def test_premise_holds_with_equality(self, canonical_params, seed):
        # pr(X_64 >= 64**-0.5 + ln2/64) is exactly 0.5
        i, reps = 64, 4 * 10**4
        x = math.log(2) / (canonical_params.c2 * i)
        thr = canonical_params.c0 * i**-canonical_params.beta + x
        hits = 0
        for rep in range(reps // 500):
            block = [
                sample_exp_tail(canonical_params, i, seed.child(rep * 500 + j))[i - 1]
                for j in range(500)
            ]
            hits += int(np.sum(np.asarray(block) >= thr))
        p_hat = hits / reps
        assert abs(p_hat - 0.5) <= 3 * proportion_se(0.5, reps)

    def test_bitwise_determinism(self, canonical_params, seed):
        a = sample_exp_tail(canonical_params, 256, seed)
        b = sample_exp_tail(canonical_params, 256, seed)
        assert np.array_equal(a, b)


class TestPowerLawFamily:
    def test_zero_spread_degenerates(self, seed):
        assert np.all(sample_power_law(0.8, 0.0, 100, seed) == 0.0)

    def test_first_moment(self, seed):
        # E|X_1| = spread / 2
        reps = 20000
        vals = np.array([sample_power_law(1.0, 3.0, 1, seed.child(r))[0] for r in range(reps)])
        se = 3.0 / math.sqrt(12 * reps)
        assert abs(vals.mean() - 1.5) <= 3 * se

    def test_exact_moment_at_index_100(self, seed):
        reps = 4 * 10**4
        i, r_exp, spread = 100, 0.8, 2.0
        total = 0.0
        for rep in range(reps // 1000):
            rows = [
                sample_power_law(r_exp, spread, i, seed.child(rep * 1000 + j))[i - 1]
                for j in range(1000)
            ]
            total += float(np.sum(rows))
        mean = total / reps
        exact = i**-r_exp  # spread/2 = 1
        se = i**-r_exp * (spread / math.sqrt(12)) / math.sqrt(reps)
        assert abs(mean - exact) <= 3 * se


class TestSupermartingaleFamily:
    def test_contraction_cap(self, seed):
        with pytest.raises(ValueError):
            sample_supermartingale(0.5, 1.2, 1.0, 10, seed)

    def test_zero_start_is_absorbing(self, seed):
        assert np.all(sample_supermartingale(0.5, 0.9, 0.0, 50, seed) == 0.0)

    def test_nonnegative_paths(self, seed):
        assert np.all(sample_supermartingale(1.0, 0.8, 2.0, 200, seed) >= 0.0)

    @pytest.mark.parametrize("beta,contraction", [(0.0, 1.0), (0.5, 0.9)])
    def test_conditional_ratio_matches_contraction(self, seed, beta, contraction):
        # (1+1/n)**beta * E X_{n+1} / E X_n = contraction; the per-path shock
        # X_{n+1}/X_n is uniform with exactly that scaled mean
        n, reps = 12, 20000
        shocks = np.array(
            [
                sample_supermartingale(beta, contraction, 1.0, n + 1, seed.child(r))[n]
                / sample_supermartingale(beta, contraction, 1.0, n + 1, seed.child(r))[n - 1]
                for r in range(reps)
            ]
        )
        est = (1 + 1 / n) ** beta * shocks.mean()
        se = (1 + 1 / n) ** beta * shocks.std(ddof=1) / math.sqrt(reps)
        assert abs(est - contraction) <= 3 * se


class TestBorelCantelliFamily:
    def test_support_edge(self, seed):
        # Z_i >= i**-(1+a)/s surely, i.e. the clamped tail hits 1 at the edge
        beta, a, s = 0.5, 1.0, 2.0
        path = sample_borel_cantelli(beta, a, s, 300, seed)
        idx = np.arange(1, 301, dtype=float)
        z = path * idx**beta
        assert np.all(z >= idx ** (-(1 + a) / s) * (1 - 1e-12))

    def test_exact_tail_at_index_10(self, seed):
        # pr(Z_10 > 2) = 10**-2 * 2**-2 = 0.0025
        beta, a, s = 0.5, 1.0, 2.0
        reps = 2 * 10**5
        hits = 0
        block = 5000
        for lo in range(0, reps, block):
            vals = [
                sample_borel_cantelli(beta, a, s, 10, seed.child(lo + j))[9] * 10**beta
                for j in range(block)
            ]
            hits += int(np.sum(np.asarray(vals) > 2.0))
        p_hat = hits / reps
        assert abs(p_hat - 0.0025) <= 3 * proportion_se(0.0025, reps)

    def test_bitwise_determinism(self, seed):
        a = sample_borel_cantelli(0.5, 1.0, 2.0, 64, seed)
        b = sample_borel_cantelli(0.5, 1.0, 2.0, 64, seed)
        assert np.array_equal(a, b)


class TestSequenceSpecDispatch:
    def test_unknown_family(self):
        with pytest.raises(UnsupportedFamilyError):
            SequenceSpec("bogus", CounterexampleSpec(0.4, 0.6))

    def test_params_type_mismatch(self):
        with pytest.raises(ValueError):
            SequenceSpec("power_law", CounterexampleSpec(0.4, 0.6))

    def test_dispatch_matches_direct_sampling(self, canonical_params, seed):
        pairs = [
            (SequenceSpec.counterexample(0.4, 0.6), sample_counterexample(CounterexampleSpec(0.4, 0.6), 50, seed)),
            (SequenceSpec.exp_tail(canonical_params), sample_exp_tail(canonical_params, 50, seed)),
            (SequenceSpec.power_law(0.8, 2.0), sample_power_law(0.8, 2.0, 50, seed)),
            (SequenceSpec.supermartingale(0.5, 0.9), sample_supermartingale(0.5, 0.9, 1.0, 50, seed)),
            (SequenceSpec.borel_cantelli(0.5, 1.0, 2.0), sample_borel_cantelli(0.5, 1.0, 2.0, 50, seed)),
        ]
        for spec, direct in pairs:
            assert np.array_equal(sample_path(spec, 50, seed), direct)

    def test_stream_independence(self, seed):
        n = 10**4
        r = 0.2
        spec = SequenceSpec.power_law(r, 2.0)
        idx = np.arange(1, n + 1, dtype=float)
        # divide out the shared deterministic envelope i**-r before correlating
        a = sample_path(spec, n, Seed(seed.value, 0)) * idx**r
        b = sample_path(spec, n, Seed(seed.value, 1)) * idx**r
        corr = np.corrcoef(a, b)[0, 1]
        assert abs(corr) <= 3.0 / math.sqrt(n)
