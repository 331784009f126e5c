import math
from fractions import Fraction

import numpy as np
import pytest

from fieldspec import EnsembleSpec, finite_moment, mgf_partial, moment_polynomial, run_ensemble

F = Fraction

# E[lambda^p] for p = 1..5, coefficients c_k of beta^(p-k), k = 1..p
CLOSED_FORM = {
    1: (F(1),),
    2: (F(1), F(1)),
    3: (F(1), F(3), F(1)),
    4: (F(1), F(20, 3), F(6), F(1)),
    5: (F(1), F(40, 3), F(70, 3), F(10), F(1)),
}


class TestMomentPolynomial:
    def test_closed_forms_exact(self):
        for p, coeffs in CLOSED_FORM.items():
            assert moment_polynomial(p).coeffs == coeffs

    def test_structural_invariants(self):
        for p in range(1, 7):
            poly = moment_polynomial(p)
            assert poly.coefficient(1) == 1
            assert poly.coefficient(p) == 1
            assert all(c > 0 for c in poly.coeffs)
            assert len(poly.coeffs) == p  # degree p-1 in beta

    def test_exact_evaluation(self):
        poly = moment_polynomial(4)
        value = poly.evaluate(F(1, 4))
        assert isinstance(value, Fraction)
        assert value == 1 + 6 * F(1, 4) + F(20, 3) * F(1, 16) + F(1, 64)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            moment_polynomial(0)
        with pytest.raises(ValueError):
            moment_polynomial(13)


class TestFiniteMoment:
    def test_first_moment_is_one_exactly(self):
        for M, r in ((1, 1), (3, 7), (50, 200), (200, 535)):
            assert finite_moment(1, M, r) == 1.0

    def test_table_exact_beta025_p3(self):
        assert finite_moment(3, 200, 1604) == pytest.approx(1.810, abs=5e-4)

    def test_table_exact_beta075_p5(self):
        assert finite_moment(5, 200, 535) == pytest.approx(27.35, abs=0.01)

    def test_converges_to_limit(self):
        # relative gap below 1% at M = 200 for p <= 5 at fixed beta
        beta = F(1, 2)
        for p in range(1, 6):
            limit = float(moment_polynomial(p).evaluate(beta))
            for M in (50, 200):
                r = int(round((2 * M + 1) / beta))
                gap = abs(finite_moment(p, M, r) - limit) / limit
                if M == 200:
                    assert gap < 0.01
        # gap shrinks with M
        p = 4
        gaps = []
        for M in (25, 100, 400):
            r = int(round((2 * M + 1) / beta))
            gaps.append(abs(finite_moment(p, M, r) - float(moment_polynomial(p).evaluate(beta))))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_small_r_falling_factorial_cutoff(self):
        # k > r partitions contribute nothing; still well-defined
        assert finite_moment(3, 2, 1) > 0

    def test_matches_monte_carlo_traces(self):
        # cross-module: finite moment vs ensemble trace averages, 3 sigma
        M, beta = 50, 0.5
        spec = EnsembleSpec(M=M, beta=beta, trials=150, rng_seed=2024)
        ensemble = run_ensemble(spec)
        eigs = ensemble.all_eigenvalues.reshape(spec.trials, -1)
        for p in range(1, 5):
            per_trial = (eigs**p).mean(axis=1)
            mc = per_trial.mean()
            sigma = per_trial.std(ddof=1) / math.sqrt(spec.trials)
            exact = finite_moment(p, M, spec.r)
            assert abs(mc - exact) <= 3 * sigma + 1e-12


class TestMgfPartial:
    def test_at_zero(self):
        assert mgf_partial(0.7, 0.0, p_max=5) == 1.0

    def test_beta_zero_is_exp_truncation(self):
        for s in (0.1, 1.0, -0.5):
            for p_max in (3, 5):
                expected = sum(s**p / math.factorial(p) for p in range(p_max + 1))
                assert mgf_partial(0.0, s, p_max=p_max) == pytest.approx(expected, rel=1e-14)

    def test_direct_summation_oracle(self):
        beta, s = 0.5, 0.1
        moments = [1.0] + [float(moment_polynomial(p).evaluate(F(1, 2))) for p in range(1, 6)]
        expected = sum(m * s**p / math.factorial(p) for p, m in enumerate(moments))
        assert mgf_partial(beta, s, p_max=5) == pytest.approx(expected, rel=1e-14)
