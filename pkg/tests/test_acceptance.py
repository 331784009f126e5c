"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; the full suite takes several minutes (dominated by the M = 200
Monte Carlo ensembles).
"""

import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from fieldspec import (
    EnsembleSpec,
    SampleSet,
    build_constraints,
    build_system,
    check_min_eig_bound,
    eig_hermitian,
    empirical_cdf,
    enumerate_partitions,
    finite_moment,
    fit_tail,
    gap_profile,
    moment_polynomial,
    partition_from_index_vector,
    precond_bound,
    random_signal,
    random_topology,
    reconstruct,
    run_ensemble,
    sample_signal,
    zeta_polynomial,
    count_lattice_points,
)

F = Fraction

# Published comparison table: {beta: {p: (sim, exact, limit)}}
TABLE1 = {
    0.25: {1: (1.000, 1.000, 1.000), 2: (1.249, 1.249, 1.250),
           3: (1.810, 1.810, 1.812), 4: (2.926, 2.925, 2.932),
           5: (5.152, 5.152, 5.176)},
    0.50: {1: (1.000, 1.000, 1.000), 2: (1.499, 1.499, 1.500),
           3: (2.746, 2.744, 2.750), 4: (5.778, 5.771, 5.792),
           5: (13.51, 13.49, 13.56)},
    0.75: {1: (1.000, 1.000, 1.000), 2: (1.748, 1.748, 1.750),
           3: (3.802, 3.801, 3.812), 4: (9.630, 9.620, 9.672),
           5: (27.41, 27.35, 27.57)},
}

CLOSED_FORM = {
    1: (F(1),),
    2: (F(1), F(1)),
    3: (F(1), F(3), F(1)),
    4: (F(1), F(20, 3), F(6), F(1)),
    5: (F(1), F(40, 3), F(70, 3), F(10), F(1)),
}


def _report(num: int, ok: bool, detail: str):
    print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def _round3(x: float) -> float:
    if x == 0:
        return 0.0
    exp = math.floor(math.log10(abs(x)))
    return round(x, 2 - exp)


def test_criterion_01_exact_moment_polynomials():
    ok = all(moment_polynomial(p).coeffs == CLOSED_FORM[p] for p in range(1, 6))
    _report(1, ok, "moment polynomials p=1..5 equal the closed forms exactly")


def test_criterion_02_table1_limit_column():
    mismatches = []
    logged = None
    for beta, rows in TABLE1.items():
        frac = F(beta).limit_denominator(100)
        for p, (_, _, printed_limit) in rows.items():
            value = float(moment_polynomial(p).evaluate(frac))
            if (beta, p) == (0.25, 5):
                # documented typesetting artifact in the published table:
                # the polynomial evaluates to 5.1706, not 5.176
                if abs(value - 5.1706) < 5e-5:
                    logged = (value, printed_limit)
                else:
                    mismatches.append((beta, p, value, printed_limit))
                continue
            if _round3(value) != _round3(printed_limit):
                mismatches.append((beta, p, value, printed_limit))
    ok = not mismatches and logged is not None
    detail = ("limit column matches to 3 significant figures; "
              f"(0.25, p=5) exact {logged[0]:.4f} accepted vs printed {logged[1]}"
              if ok else f"mismatches: {mismatches}")
    _report(2, ok, detail)


def test_criterion_03_table1_exact_column():
    M = 200
    worst = 0.0
    for beta, rows in TABLE1.items():
        r = round((2 * M + 1) / beta)
        for p, (_, printed_exact, _) in rows.items():
            value = finite_moment(p, M, r)
            worst = max(worst, abs(value - printed_exact) / printed_exact)
    ok = worst <= 0.005
    _report(3, ok, f"finite moments reproduce the exact column, "
                   f"worst relative gap {worst:.2e} <= 0.5%")


def test_criterion_04_table1_sim_column():
    M, trials = 200, 300  # criterion floor is 200; extra trials buy margin
    worst = 0.0
    for beta, rows in TABLE1.items():
        spec = EnsembleSpec(M=M, beta=beta, trials=trials, rng_seed=20260810)
        ensemble = run_ensemble(spec)
        assert ensemble.failures == 0
        eigs = ensemble.all_eigenvalues.reshape(trials, -1)
        for p, (printed_sim, _, _) in rows.items():
            sim = float((eigs**p).mean())
            worst = max(worst, abs(sim - printed_sim) / printed_sim)
    ok = worst <= 0.02
    _report(4, ok, f"Monte Carlo moments at M=200, {trials} trials match the "
                   f"sim column, worst relative gap {worst:.2e} <= 2%")


def test_criterion_05_preconditioning_bound():
    per_M = {5: 167, 10: 167, 20: 166}
    checked = 0
    worst_ratio = 0.0
    for M, quota in per_M.items():
        r = 30 * M
        got = 0
        attempt = 0
        while got < quota:
            attempt += 1
            assert attempt < 100 * quota, "rejection sampling stalled"
            ss = np.random.SeedSequence(555, spawn_key=(M, attempt))
            t = random_topology(r, (0.0, 1.0), np.random.default_rng(ss))
            delta = gap_profile(t).delta
            if delta >= 1 / (2 * M):
                continue
            got += 1
            checked += 1
            system = build_system(SampleSet(t, np.zeros(r, dtype=complex)), M,
                                  weighted=True)
            kappa = eig_hermitian(system).kappa
            bound = precond_bound(delta, M)
            worst_ratio = max(worst_ratio, kappa / bound)
    ok = checked == 500 and worst_ratio <= 1.0
    _report(5, ok, f"kappa(T_w) <= ((1+2dM)/(1-2dM))^2 on all 500 topologies "
                   f"(worst kappa/bound = {worst_ratio:.4f})")


def test_criterion_06_min_eigenvalue_union_bound():
    M, trials = 40, 5000
    n = 2 * M + 1
    all_ok = True
    details = []
    offset_detail = ""
    for beta in (0.25, 0.50, 0.75):
        spec = EnsembleSpec(M=M, beta=beta, trials=trials, rng_seed=606060)
        ensemble = run_ensemble(spec)
        assert ensemble.failures == 0
        rows = [row for row in check_min_eig_bound(ensemble) if row.x < 0.1]
        bad = [row for row in rows if not row.satisfied]
        details.append(f"beta={beta}: {len(rows) - len(bad)}/{len(rows)} points")
        if bad:
            all_ok = False
        if beta == 0.25:
            sorted_all = np.sort(ensemble.all_eigenvalues)
            sorted_min = np.sort(ensemble.min_eigs)
            offsets = []
            for row in rows:
                f_min = row.f_min_emp
                f_pool = np.searchsorted(sorted_all, row.x, side="right") / len(sorted_all)
                if 10 / trials < f_min < 0.5 and f_pool > 0:
                    offsets.append(np.log10(f_min) - np.log10(f_pool))
            offset = float(np.mean(offsets))
            offset_detail = f"offset {offset:.3f} vs log10(81) = {np.log10(n):.3f}"
            if abs(offset - np.log10(n)) > 0.3:
                all_ok = False
    _report(6, all_ok, "; ".join(details) + "; " + offset_detail)


def test_criterion_07_tail_slope():
    M, trials = 200, 500  # criterion floor is 300; extra trials buy margin
    slopes = {}
    for beta in (0.15, 0.35, 0.55):
        spec = EnsembleSpec(M=M, beta=beta, trials=trials, rng_seed=707070)
        ensemble = run_ensemble(spec)
        assert ensemble.failures == 0
        positive = ensemble.all_eigenvalues[ensemble.all_eigenvalues > 0]
        grid = np.logspace(np.log10(max(positive.min(), 1e-15)),
                           np.log10(positive.max()), 400)
        fit = fit_tail(empirical_cdf(ensemble.all_eigenvalues, grid))
        slopes[beta] = fit.a_hat
    in_band = 0.85 <= slopes[0.35] <= 1.15
    decreasing = slopes[0.15] > slopes[0.35] > slopes[0.55]
    ok = in_band and decreasing
    _report(7, ok, f"a_hat(0.35) = {slopes[0.35]:.3f} in [0.85, 1.15]; "
                   f"slopes {slopes[0.15]:.3f} > {slopes[0.35]:.3f} > {slopes[0.55]:.3f}")


def test_criterion_08_reconstruction_regimes():
    # (a) Nyquist-regular exactness
    M = 4
    r = 2 * M + 2
    sig = random_signal(M, 808)
    report = reconstruct(sample_signal(sig, np.arange(r) / r), M, truth=sig)
    nyquist_ok = report.rel_l2_error < 1e-10 and report.success

    # (b) and (c): figure regimes over 1000 seeds each
    def run_regime(r, support, master):
        n_joint = 0
        n_fail = 0
        for trial in range(1000):
            ss = np.random.SeedSequence(master, spawn_key=(trial,))
            sig_rng, topo_rng = [np.random.default_rng(c) for c in ss.spawn(2)]
            sig = random_signal(10, sig_rng)
            t = random_topology(r, support, topo_rng)
            rep = reconstruct(sample_signal(sig, t), 10, truth=sig)
            if rep.success and rep.rel_l2_error < 1e-6:
                n_joint += 1
            if not rep.success:
                n_fail += 1
        return n_joint / 1000, n_fail / 1000

    joint_b, fail_b = run_regime(26, (0.0, 0.8), master=81)
    _, fail_c = run_regime(21, (0.0, 1.0), master=82)
    ok = nyquist_ok and joint_b >= 0.80 and fail_c > fail_b
    _report(8, ok, f"(a) Nyquist rel error {report.rel_l2_error:.2e} < 1e-10; "
                   f"(b) joint success {joint_b:.1%} >= 80%; "
                   f"(c) failure {fail_c:.1%} > {fail_b:.1%}")


def test_criterion_09_rank_theorem():
    violations = 0
    for p in range(1, 9):
        for tau in enumerate_partitions(p):
            if build_constraints(tau).rank != tau.k - 1:
                violations += 1
    rng = np.random.default_rng(909)
    for _ in range(10_000):
        p = int(rng.integers(1, 13))
        q = rng.integers(1, p + 4, size=p)
        tau = partition_from_index_vector(list(q))
        if build_constraints(tau).rank != tau.k - 1:
            violations += 1
    ok = violations == 0
    _report(9, ok, "rank(A) = k-1 exhaustively for p <= 8 and on 10^4 random "
                   f"index vectors for p <= 12 ({violations} violations)")


def test_criterion_10_oracle_equivalences():
    # (i) full-box brute force, p <= 4, N <= 6
    def brute(tau, N):
        A = build_constraints(tau).matrix
        return sum(
            1 for point in product(range(N + 1), repeat=tau.p)
            if all(sum(c * x for c, x in zip(row, point)) == 0 for row in A)
        )

    count_ok = all(
        count_lattice_points(tau, N) == brute(tau, N)
        for p in range(1, 5) for tau in enumerate_partitions(p) for N in range(7)
    )

    # (ii) polynomial vs counting at the out-of-sample node N = 7, p <= 6
    zeta_ok = all(
        zeta_polynomial(tau)(7) == count_lattice_points(tau, 7)
        for p in range(1, 7) for tau in enumerate_partitions(p)
    )

    # (iii) independently coded Bell / Stirling recurrences, p <= 10
    B = [1]
    for n in range(10):
        B.append(sum(math.comb(n, i) * B[i] for i in range(n + 1)))
    S = {(0, 0): 1}
    for n in range(1, 11):
        S[(n, 0)] = 0
        for k in range(1, n + 1):
            S[(n, k)] = k * S.get((n - 1, k), 0) + S.get((n - 1, k - 1), 0)
    counts_ok = True
    for p in range(1, 11):
        per_k: dict[int, int] = {}
        total = 0
        for tau in enumerate_partitions(p):
            total += 1
            per_k[tau.k] = per_k.get(tau.k, 0) + 1
        if total != B[p] or any(per_k.get(k, 0) != S[(p, k)] for k in range(1, p + 1)):
            counts_ok = False

    ok = count_ok and zeta_ok and counts_ok
    _report(10, ok, f"brute-force counts (p<=4, N<=6): {count_ok}; "
                    f"zeta at N=7 (p<=6): {zeta_ok}; "
                    f"Bell/Stirling (p<=10): {counts_ok}")
