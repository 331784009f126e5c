import numpy as np
import pytest

from fieldspec import (
    BandlimitedSignal,
    SampleSet,
    evaluate_signal,
    gap_profile,
    random_signal,
    random_topology,
    sample_signal,
)


class TestEvaluateSignal:
    def test_constant_signal(self):
        sig = BandlimitedSignal(0, [1.0])
        for t in (0.0, 0.3, 0.999):
            assert evaluate_signal(sig, t) == pytest.approx(1.0)

    def test_cosine_at_origin(self):
        sig = BandlimitedSignal(1, [0.5, 0.0, 0.5])
        assert evaluate_signal(sig, 0.0) == pytest.approx(1.0)

    def test_five_term_sum_matches_direct_oracle(self):
        # independent oracle: direct 5-term complex summation
        M, t = 2, 0.3
        coeffs = np.array([(k + 3) / 10 for k in range(-M, M + 1)], dtype=complex)
        expected = sum(
            coeffs[k + M] * np.exp(2j * np.pi * k * t) for k in range(-M, M + 1)
        )
        sig = BandlimitedSignal(M, coeffs)
        assert evaluate_signal(sig, t) == pytest.approx(expected, abs=1e-14)

    def test_domain_error(self):
        sig = BandlimitedSignal(0, [1.0])
        with pytest.raises(ValueError):
            evaluate_signal(sig, 1.0)
        with pytest.raises(ValueError):
            evaluate_signal(sig, -0.1)

    def test_vectorized_matches_scalar(self):
        sig = random_signal(3, 11)
        ts = np.linspace(0, 0.99, 17)
        vec = evaluate_signal(sig, ts)
        for t, v in zip(ts, vec):
            assert evaluate_signal(sig, float(t)) == pytest.approx(v)

    def test_real_signal_imag_negligible(self):
        sig = random_signal(8, 5, real_valued=True)
        rng = np.random.default_rng(0)
        for t in rng.uniform(0, 1, 100):
            assert abs(evaluate_signal(sig, float(t)).imag) < 1e-10


class TestBandlimitedSignal:
    def test_length_invariant(self):
        with pytest.raises(ValueError):
            BandlimitedSignal(2, [1.0, 2.0])

    def test_real_flag_enforces_conjugate_symmetry(self):
        with pytest.raises(ValueError):
            BandlimitedSignal(1, [1j, 0.0, 1j], real_valued=True)
        BandlimitedSignal(1, [-1j, 0.5, 1j], real_valued=True)  # ok

    def test_coeff_accessor(self):
        sig = BandlimitedSignal(1, [1.0, 2.0, 3.0])
        assert sig.coeff(-1) == 1.0
        assert sig.coeff(0) == 2.0
        assert sig.coeff(1) == 3.0
        with pytest.raises(ValueError):
            sig.coeff(2)


class TestSampleSignal:
    def test_constant_values(self):
        sig = BandlimitedSignal(0, [3.0])
        ss = sample_signal(sig, [0.0, 0.25, 0.5, 0.75])
        assert np.allclose(ss.values, 3.0)

    def test_single_position_half(self):
        # e^{i pi} = -1, evaluated by hand
        sig = BandlimitedSignal(1, [0.0, 0.0, 1.0])
        ss = sample_signal(sig, [0.5])
        assert ss.values[0] == pytest.approx(-1.0, abs=1e-15)

    def test_empty_positions_rejected(self):
        sig = BandlimitedSignal(0, [1.0])
        with pytest.raises(ValueError):
            sample_signal(sig, [])

    def test_positions_sorted_lockstep(self):
        sig = random_signal(2, 3)
        ss = sample_signal(sig, [0.7, 0.1, 0.4])
        assert np.all(np.diff(ss.positions) > 0)
        for t, v in zip(ss.positions, ss.values):
            assert evaluate_signal(sig, float(t)) == pytest.approx(v)

    def test_figure1_setup_regime(self):
        # r=26 samples of an M=10 signal on [0, 0.8): beta = 21/26
        sig = random_signal(10, 9)
        ss = sample_signal(sig, random_topology(26, (0.0, 0.8), 9))
        assert ss.r == 26
        assert (2 * 10 + 1) / ss.r == pytest.approx(0.80769, abs=1e-4)


class TestSampleSet:
    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            SampleSet([0.1, 0.1], [1.0, 2.0])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            SampleSet([0.1, 1.0], [1.0, 2.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            SampleSet([0.1, 0.2], [1.0])


class TestRandomTopology:
    def test_deterministic_given_seed(self):
        a = random_topology(5, (0.0, 1.0), 42)
        b = random_topology(5, (0.0, 1.0), 42)
        assert np.array_equal(a, b)

    def test_frozen_stream(self):
        # pins the generator choice (PCG64): the stream must not drift
        got = random_topology(3, (0.0, 1.0), 12345)
        assert np.array_equal(got, np.sort(np.random.default_rng(12345).uniform(0, 1, 3)))

    def test_law_of_large_numbers(self):
        t = random_topology(10000, (0.0, 1.0), 7)
        assert abs(t.mean() - 0.5) < 0.02

    def test_support_and_sorting(self):
        t = random_topology(100, (0.2, 0.6), 1)
        assert t.min() >= 0.2 and t.max() < 0.6
        assert np.all(np.diff(t) >= 0)

    def test_invalid_support(self):
        with pytest.raises(ValueError):
            random_topology(5, (0.5, 0.5), 0)
        with pytest.raises(ValueError):
            random_topology(5, (-0.1, 1.0), 0)
        with pytest.raises(ValueError):
            random_topology(0, (0.0, 1.0), 0)

    def test_figure2_regime(self):
        t = random_topology(21, (0.0, 1.0), 4)
        assert len(t) == 21  # with M=10 this is the beta = 1 regime


class TestGapProfile:
    def test_uniform_grid(self):
        r = 8
        profile = gap_profile(np.arange(r) / r)
        assert profile.delta == pytest.approx(1 / 8)
        assert np.allclose(profile.weights, 1 / 8)

    def test_hand_computed_wraparound(self):
        # t = {0.0, 0.1, 0.9}: delta = 0.8 (gap 0.1 -> 0.9)
        # w_1 = (0.1 - (0.9-1))/2 = 0.1, w_2 = (0.9-0.0)/2 = 0.45,
        # w_3 = ((1+0.0) - 0.1)/2 = 0.45
        profile = gap_profile([0.0, 0.1, 0.9])
        assert profile.delta == pytest.approx(0.8)
        assert np.allclose(profile.weights, [0.1, 0.45, 0.45])

    def test_weights_positive_and_sum_to_one(self):
        for seed in range(20):
            t = random_topology(30, (0.0, 1.0), seed)
            profile = gap_profile(t)
            assert np.all(profile.weights > 0)
            assert abs(profile.weights.sum() - 1.0) < 1e-12

    def test_too_few_positions(self):
        with pytest.raises(ValueError):
            gap_profile([0.5])
