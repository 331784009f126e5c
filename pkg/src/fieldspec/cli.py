"""Command-line interface.

Subcommands: reconstruct, sweep, spectrum, moments, precond-check.
Exit codes: 0 success; 1 usage or input error; 2 reconstruction flagged
ill-conditioned (a reportable outcome, distinguishable for scripting).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as fio
from . import plots
from .field import SampleSet, gap_profile, evaluate_signal, random_signal, random_topology, sample_signal
from .linsys import DEFAULT_KAPPA_MAX, EigenSolveError, build_system, eig_hermitian, precond_bound
from .moments import finite_moment, moment_polynomial
from .reconstruct import reconstruct, sweep
from .spectral import (
    EnsembleSpec,
    FitError,
    check_min_eig_bound,
    empirical_cdf,
    fit_tail,
    kappa_mirror_check,
    linear_histogram,
    run_ensemble,
    EIG_FLOOR,
)

log = logging.getLogger("fieldspec")

DEFAULT_BETAS = [0.25, 0.50, 0.75]


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1 (argparse default is 2, which is reserved
    # for the ill-conditioned outcome)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _JsonFormatter(logging.Formatter):
    def format(self, record):
        return json.dumps({"level": record.levelname.lower(),
                           "logger": record.name,
                           "message": record.getMessage()})


def _setup_logging(json_logs: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if json_logs:
        handler.setFormatter(_JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    root = logging.getLogger("fieldspec")
    root.handlers[:] = [handler]
    root.setLevel(logging.INFO)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _support(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("FIELDSPEC_THREADS")
    return int(env) if env else 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="master RNG seed")
    sub.add_argument("--out", type=Path, default=None, help="output directory")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker processes (default: FIELDSPEC_THREADS or 1)")
    sub.add_argument("--json-logs", action="store_true", help="log as JSON lines")
    sub.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def _out_dir(args, default_name: str) -> Path:
    out = args.out if args.out is not None else Path(default_name)
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fieldspec",
                     description="Irregular sampling of bandlimited fields: "
                                 "reconstruction, spectral statistics, exact moments.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("reconstruct", parents=[], help="reconstruct a signal from samples")
    p.add_argument("--M", type=int, required=True, help="reconstruction bandwidth")
    p.add_argument("--r", type=int, default=None, help="number of samples to draw")
    p.add_argument("--support", type=_support, default=(0.0, 1.0), metavar="LO:HI")
    p.add_argument("--regular", action="store_true", help="equally spaced topology")
    p.add_argument("--weighted", action="store_true", help="use midpoint-weight preconditioning")
    p.add_argument("--kappa-max", type=float, default=DEFAULT_KAPPA_MAX)
    p.add_argument("--samples-csv", type=Path, default=None,
                   help="read samples from CSV instead of generating them")
    p.add_argument("--grid-points", type=int, default=1000)
    _add_common(p)

    p = subs.add_parser("sweep", help="success probability over an (M, r) grid")
    p.add_argument("--M", type=_int_list, required=True, metavar="M1,M2,..")
    p.add_argument("--r", type=_int_list, required=True, metavar="R1,R2,..")
    p.add_argument("--support", type=_support, default=(0.0, 1.0), metavar="LO:HI")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--kappa-max", type=float, default=DEFAULT_KAPPA_MAX)
    _add_common(p)

    p = subs.add_parser("spectrum", help="Monte Carlo eigenvalue statistics")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--bin-width", type=float, default=0.1, help="linear histogram bin width")
    p.add_argument("--bins-per-decade", type=int, default=20, help="log histogram resolution")
    p.add_argument("--fit-tail", action="store_true", help="fit the small-x power law")
    p.add_argument("--anchor-prob", type=float, default=1e-2)
    p.add_argument("--check-min-bound", action="store_true",
                   help="check F_min <= (2M+1) F pointwise")
    p.add_argument("--mirror-check", action="store_true",
                   help="compare kappa and min-eigenvalue log-densities")
    p.add_argument("--mirror-d", type=float, default=1.0 / 3.0)
    p.add_argument("--dump-eigenvalues", action="store_true",
                   help="also write the full eigenvalue table")
    _add_common(p)

    p = subs.add_parser("moments", help="exact moment polynomials and Table-1 data")
    p.add_argument("--p-max", type=int, default=5)
    p.add_argument("--beta", type=_float_list, default=DEFAULT_BETAS, metavar="B1,B2,..")
    p.add_argument("--table1", action="store_true",
                   help="emit the Sim/Exact/Limit comparison table")
    p.add_argument("--M", type=int, default=200, help="matrix half-bandwidth for --table1")
    p.add_argument("--trials", type=int, default=200, help="Monte Carlo trials for --table1")
    _add_common(p)

    p = subs.add_parser("precond-check", help="verify the weighted condition-number bound")
    p.add_argument("--M", type=_int_list, default=[5, 10, 20], metavar="M1,M2,..")
    p.add_argument("--count", type=int, default=500, help="topologies satisfying delta < 1/2M")
    p.add_argument("--r-factor", type=int, default=30, help="samples per topology = factor * M")
    _add_common(p)

    return parser


def cmd_reconstruct(args) -> int:
    out = _out_dir(args, "fieldspec-reconstruct")
    truth = None
    if args.samples_csv is not None:
        samples = fio.read_samples_csv(args.samples_csv)
    else:
        if args.r is None:
            raise fio.CsvFormatError("either --samples-csv or --r is required")
        ss = np.random.SeedSequence(args.seed)
        sig_rng, topo_rng = [np.random.default_rng(c) for c in ss.spawn(2)]
        truth = random_signal(args.M, sig_rng)
        if args.regular:
            positions = np.arange(args.r) / args.r
        else:
            positions = random_topology(args.r, args.support, topo_rng)
        samples = sample_signal(truth, positions)

    report = reconstruct(samples, args.M, weighted=args.weighted,
                         kappa_max=args.kappa_max, truth=truth)

    t_grid = np.arange(args.grid_points) / args.grid_points
    recon_vals = evaluate_signal(report.signal(), t_grid).real
    true_vals = (evaluate_signal(truth, t_grid).real if truth is not None
                 else np.full_like(t_grid, np.nan))

    fio.write_samples_csv(out / "samples.csv", samples)
    fio.write_series_csv(out / "reconstruction.csv", ["t", "true_re", "recon_re"],
                         zip(t_grid, true_vals, recon_vals))
    payload = {
        "kappa": report.kappa,
        "min_eig": report.min_eig,
        "delta": report.delta,
        "beta": report.beta,
        "success": report.success,
        "weighted": report.weighted,
        "rel_l2_error": report.rel_l2_error,
    }
    with open(out / "report.json", "w") as fh:
        json.dump(payload, fh, indent=1)

    fio.write_system_json(out / "system.json",
                          build_system(samples, args.M, weighted=args.weighted))

    outputs = ["samples.csv", "reconstruction.csv", "report.json", "system.json"]
    if not args.no_plot:
        plots.plot_reconstruction(t_grid, true_vals, recon_vals,
                                  samples.positions, samples.values.real,
                                  out / "reconstruction.png",
                                  title=f"M={args.M}, r={samples.r}, beta={report.beta:.3f}")
        outputs.append("reconstruction.png")
    fio.write_manifest(out, "reconstruct", _params(args),
                       derived={"r": samples.r, "beta": report.beta,
                                "delta": report.delta, "kappa": report.kappa,
                                "success": report.success},
                       outputs=outputs)
    log.info("kappa=%.6g delta=%.4f beta=%.4f success=%s",
             report.kappa, report.delta, report.beta, report.success)
    return 0 if report.success else 2


def cmd_sweep(args) -> int:
    out = _out_dir(args, "fieldspec-sweep")
    cells = sweep(args.M, args.r, support=args.support, trials=args.trials,
                  weighted=args.weighted, rng_seed=args.seed, kappa_max=args.kappa_max)
    fio.write_series_csv(
        out / "sweep.csv",
        ["M", "r", "beta", "trials", "success_frac", "mean_kappa_success", "mean_delta"],
        [(c.M, c.r, c.beta, c.trials, c.success_frac, c.mean_kappa_success, c.mean_delta)
         for c in cells],
    )
    outputs = ["sweep.csv"]
    if not args.no_plot:
        plots.plot_sweep(cells, out / "sweep.png", title="success probability")
        outputs.append("sweep.png")
    fio.write_manifest(out, "sweep", _params(args), outputs=outputs)
    for c in cells:
        log.info("M=%d r=%d success=%.3f", c.M, c.r, c.success_frac)
    return 0


def cmd_spectrum(args) -> int:
    out = _out_dir(args, "fieldspec-spectrum")
    spec = EnsembleSpec(M=args.M, beta=args.beta, trials=args.trials, rng_seed=args.seed)
    ensemble = run_ensemble(spec, threads=_resolve_threads(args.threads))
    if ensemble.failures:
        log.warning("%d trials failed to decompose", ensemble.failures)

    fio.write_series_csv(out / "ensemble.csv", ["trial", "min_eig", "kappa"],
                         [(i, m, k) for i, (m, k) in
                          enumerate(zip(ensemble.min_eigs, ensemble.kappas))])
    outputs = ["ensemble.csv"]

    centers, density = linear_histogram(ensemble.all_eigenvalues, args.bin_width)
    fio.write_series_csv(out / "histogram.csv", ["x", "density"], zip(centers, density))
    outputs.append("histogram.csv")

    positive = ensemble.all_eigenvalues[ensemble.all_eigenvalues > 0]
    lo = max(positive.min(), EIG_FLOOR)
    grid = np.logspace(np.log10(lo), np.log10(ensemble.all_eigenvalues.max()),
                       args.bins_per_decade * 20)
    x, F = empirical_cdf(ensemble.all_eigenvalues, grid)
    fio.write_series_csv(out / "cdf.csv", ["x", "F"], zip(x, F))
    outputs.append("cdf.csv")

    if args.dump_eigenvalues:
        n = 2 * args.M + 1
        rows = ((trial, idx, lam)
                for trial, chunk in enumerate(ensemble.all_eigenvalues.reshape(-1, n))
                for idx, lam in enumerate(chunk))
        fio.write_series_csv(out / "eigenvalues.csv", ["trial", "index", "lambda"], rows)
        outputs.append("eigenvalues.csv")

    sidecar = {
        "M": spec.M, "beta": spec.beta, "realized_beta": spec.realized_beta,
        "r": spec.r, "trials": spec.trials, "seed": spec.rng_seed,
        "failures": ensemble.failures,
        "bin_policy": {"linear_bin_width": args.bin_width,
                       "bins_per_decade": args.bins_per_decade},
    }

    tail = None
    if args.fit_tail:
        tail = fit_tail((x, F), anchor_prob=args.anchor_prob)
        sidecar["tail_fit"] = {"a_hat": tail.a_hat, "b_hat": tail.b_hat,
                               "fit_window": list(tail.fit_window),
                               "r_squared": tail.r_squared, "n_points": tail.n_points}
        log.info("tail fit: a_hat=%.4f b_hat=%.4f", tail.a_hat, tail.b_hat)

    if args.check_min_bound:
        rows = check_min_eig_bound(ensemble)
        fio.write_series_csv(out / "min_bound.csv",
                             ["x", "F_min_emp", "bound", "sigma", "satisfied"],
                             [(r.x, r.f_min_emp, r.bound, r.sigma, int(r.satisfied))
                              for r in rows])
        outputs.append("min_bound.csv")
        n_bad = sum(not r.satisfied for r in rows)
        sidecar["min_bound_violations"] = n_bad
        log.info("min-eig bound: %d/%d grid points violated", n_bad, len(rows))
        if not args.no_plot:
            plots.plot_min_bound(rows, out / "min_bound.png",
                                 title=f"M={spec.M}, beta={spec.beta}")
            outputs.append("min_bound.png")

    if args.mirror_check:
        check = kappa_mirror_check(ensemble, d=args.mirror_d,
                                   bins_per_decade=args.bins_per_decade)
        fio.write_series_csv(out / "mirror.csv",
                             ["y", "gamma_kappa", "gamma_mirror", "discrepancy"],
                             zip(check.y, check.gamma_kappa, check.gamma_mirror,
                                 check.discrepancy))
        outputs.append("mirror.csv")
        sidecar["mirror_max_abs_discrepancy"] = check.max_abs_discrepancy
        log.info("mirror check: max |discrepancy| = %.3f", check.max_abs_discrepancy)
        if not args.no_plot:
            plots.plot_mirror(check, out / "mirror.png",
                              title=f"M={spec.M}, beta={spec.beta}, d={args.mirror_d:.3f}")
            outputs.append("mirror.png")

    with open(out / "spec.json", "w") as fh:
        json.dump(sidecar, fh, indent=1)
    outputs.append("spec.json")

    if not args.no_plot:
        plots.plot_histogram(centers, density, out / "histogram.png",
                             title=f"M={spec.M}, beta={spec.beta}")
        plots.plot_cdf_loglog([(x, F, f"beta={spec.beta}")], out / "cdf.png",
                              title=f"M={spec.M}", fit=tail)
        outputs += ["histogram.png", "cdf.png"]
    fio.write_manifest(out, "spectrum", _params(args),
                       derived={"r": spec.r, "realized_beta": spec.realized_beta},
                       outputs=outputs)
    return 0


def cmd_moments(args) -> int:
    out = _out_dir(args, "fieldspec-moments")
    polys = [moment_polynomial(p) for p in range(1, args.p_max + 1)]
    payload = fio.moments_json_payload(polys, args.beta)
    with open(out / "moments.json", "w") as fh:
        json.dump(payload, fh, indent=1)
    outputs = ["moments.json"]
    for poly in polys:
        log.info("p=%d coefficients (k=1..p): %s", poly.p,
                 ", ".join(str(c) for c in poly.coeffs))

    derived = {}
    if args.table1:
        rows = []
        for beta in args.beta:
            spec = EnsembleSpec(M=args.M, beta=beta, trials=args.trials, rng_seed=args.seed)
            derived[f"beta={beta}"] = {"r": spec.r, "realized_beta": spec.realized_beta}
            ensemble = run_ensemble(spec, threads=_resolve_threads(args.threads))
            eigs = ensemble.all_eigenvalues.reshape(spec.trials - ensemble.failures, -1)
            for p, poly in enumerate(polys, start=1):
                sim = float(np.mean(eigs**p))
                exact = finite_moment(p, args.M, spec.r)
                limit = float(poly.evaluate(Fraction(beta).limit_denominator(10**9)))
                rows.append((beta, p, sim, exact, limit))
        fio.write_series_csv(out / "table1.csv", ["beta", "p", "sim", "exact", "limit"], rows)
        outputs.append("table1.csv")
        if not args.no_plot:
            plots.plot_table1(rows, out / "table1.png", title=f"moments at M={args.M}")
            outputs.append("table1.png")
        for beta, p, sim, exact, limit in rows:
            log.info("beta=%.2f p=%d sim=%.4f exact=%.4f limit=%.4f",
                     beta, p, sim, exact, limit)

    fio.write_manifest(out, "moments", _params(args), derived=derived, outputs=outputs)
    return 0


def cmd_precond_check(args) -> int:
    out = _out_dir(args, "fieldspec-precond")
    rows = []
    worst = 0.0
    for M in args.M:
        r = args.r_factor * M
        got = 0
        attempt = 0
        while got < args.count:
            attempt += 1
            if attempt > 1000 * args.count:
                raise RuntimeError(f"rejection sampling stalled for M={M}; "
                                   f"increase --r-factor")
            ss = np.random.SeedSequence(args.seed, spawn_key=(M, attempt))
            t = random_topology(r, (0.0, 1.0), np.random.default_rng(ss))
            profile = gap_profile(t)
            if profile.delta >= 1.0 / (2.0 * M):
                continue
            got += 1
            system = build_system(SampleSet(t, np.zeros(r, dtype=complex)), M, weighted=True)
            kappa = eig_hermitian(system).kappa
            bound = precond_bound(profile.delta, M)
            ok = kappa <= bound
            worst = max(worst, kappa / bound)
            rows.append((M, r, profile.delta, kappa, bound, int(ok)))
    fio.write_series_csv(out / "precond.csv",
                         ["M", "r", "delta", "kappa_w", "bound", "ok"], rows)
    outputs = ["precond.csv"]
    if not args.no_plot:
        plots.plot_precond(rows, out / "precond.png", title="weighted-system bound")
        outputs.append("precond.png")
    n_bad = sum(1 for row in rows if not row[5])
    fio.write_manifest(out, "precond-check", _params(args),
                       derived={"violations": n_bad, "worst_ratio": worst},
                       outputs=outputs)
    log.info("precond bound: %d/%d topologies violated (worst kappa/bound = %.4f)",
             n_bad, len(rows), worst)
    return 0


def _params(args) -> dict:
    params = {}
    for key, value in vars(args).items():
        if key in ("command", "func", "out"):
            continue
        if isinstance(value, Path):
            value = str(value)
        if isinstance(value, tuple):
            value = list(value)
        params[key] = value
    params["out"] = str(args.out) if args.out is not None else None
    return params


_COMMANDS = {
    "reconstruct": cmd_reconstruct,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "moments": cmd_moments,
    "precond-check": cmd_precond_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors exit 1, --help exits 0
        return int(exc.code or 0)
    _setup_logging(getattr(args, "json_logs", False))
    try:
        return _COMMANDS[args.command](args)
    except (fio.CsvFormatError, FileNotFoundError, ValueError,
            FitError, EigenSolveError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
