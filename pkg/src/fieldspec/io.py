"""File persistence: CSV series, JSON reports, and run manifests.

All floating-point output uses 17 significant digits so files round-trip
to the exact in-memory doubles.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .field import SampleSet
from .linsys import ToeplitzSystem
from .moments import MomentPolynomial

__all__ = [
    "FORMAT_VERSION",
    "CsvFormatError",
    "fmt",
    "write_samples_csv",
    "read_samples_csv",
    "write_series_csv",
    "read_series_csv",
    "write_system_json",
    "read_system_json",
    "moments_json_payload",
    "write_manifest",
]

FORMAT_VERSION = "1"


class CsvFormatError(ValueError):
    """Malformed CSV input; the message carries the offending line number."""


def fmt(x: float) -> str:
    """Full double precision (17 significant digits)."""
    return format(float(x), ".17g")


def write_samples_csv(path, samples: SampleSet) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value_re", "value_im"])
        for t, v in zip(samples.positions, samples.values):
            writer.writerow([fmt(t), fmt(v.real), fmt(v.imag)])


def read_samples_csv(path) -> SampleSet:
    positions, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t", "value_re", "value_im"]:
            raise CsvFormatError(f"{path}:1: expected header 't,value_re,value_im'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise CsvFormatError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                positions.append(float(row[0]))
                values.append(complex(float(row[1]), float(row[2])))
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from exc
    if not positions:
        raise CsvFormatError(f"{path}: no data rows")
    return SampleSet(np.array(positions), np.array(values))


def write_series_csv(path, header: list[str], rows) -> None:
    """Generic numeric table; every cell formatted at full precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else fmt(c) for c in row])


def read_series_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(c) for c in row] for row in reader if row]
    return header, np.array(data)


def write_system_json(path, system: ToeplitzSystem) -> None:
    payload = {
        "M": system.M,
        "r": system.r,
        "weighted": system.weighted,
        "generators": [[z.real, z.imag] for z in system.generators],
        "rhs": [[z.real, z.imag] for z in system.rhs],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def read_system_json(path) -> ToeplitzSystem:
    with open(path) as fh:
        payload = json.load(fh)
    gen = np.array([complex(re, im) for re, im in payload["generators"]])
    rhs = np.array([complex(re, im) for re, im in payload["rhs"]])
    return ToeplitzSystem(M=payload["M"], r=payload["r"], generators=gen,
                          rhs=rhs, weighted=payload["weighted"])


def moments_json_payload(polys: list[MomentPolynomial], betas: list[float]) -> list[dict]:
    """One object per order p: exact coefficients plus float evaluations."""
    out = []
    for poly in polys:
        coefficients = [
            {"k": k, "numerator": c.numerator, "denominator": c.denominator}
            for k, c in enumerate(poly.coeffs, start=1)
        ]
        evaluations = [
            {"beta": b, "value": float(poly.evaluate(Fraction(b).limit_denominator(10**9)))}
            for b in betas
        ]
        out.append({"p": poly.p, "coefficients": coefficients, "evaluations": evaluations})
    return out


def write_manifest(out_dir, command: str, params: dict, derived: dict | None = None,
                   outputs: list[str] | None = None) -> Path:
    """Manifest echoing the resolved configuration; enough to re-run bit-identically."""
    manifest = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "params": params,
        "derived": derived or {},
        "outputs": outputs or [],
    }
    path = Path(out_dir) / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=1, default=_json_default)
    return path


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")
