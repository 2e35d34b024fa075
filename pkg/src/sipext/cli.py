"""Command-line front end.

Usage:
    sipext spectrum --family morse --a 5/2 --b 1
    sipext extend --family hrm --a 7/2 --b 2 --n 3 --format json
    sipext verify isospectral --family morse --a 5/2 --b 1 --n 6
    sipext verify shape-invariance --family hdpt --alpha 1/2 --beta 13/2 --n 6
    sipext export --family morse --a 5/2 --b 1 --n 6 --k 0,1 --output ext.csv

Exit status: 0 pass, 1 fail or rejected, 2 invalid input, 3 unsupported.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .charts import Family
from .dbt import (
    ExtensionSpec,
    NotInDisconjugacyRegime,
    UncertifiedSeed,
    UnsupportedFamily,
    certify_regularity,
    extend_potential,
    extended_eigenstate,
    verify_enlarged_shape_invariance,
)
from .exact import PoleError
from .oracle import (
    DEFAULT_TOL,
    Grid,
    auto_grid,
    compare_spectra,
    convergence_slope,
    darboux_consistency,
    extended_states,
    gram_matrix,
    spectrum,
    tabulate,
)
from .potentials import InvalidParameters, ParameterSet, bound_indices, dispersion, make_params, sector_table

EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3

DEFAULT_TOLERANCES = {
    "isospectral": DEFAULT_TOL,
    "orthogonality": 1e-8,
    "darboux": 0.2,  # allowed distance of the fitted order from 2
    "shape-invariance": 0.0,
}


class UsageError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} (use p/q or a decimal)") from None


def parse_k_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--k expects comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# report schema


@dataclass
class Report:
    command: str
    spec: dict
    certificate: dict | None = None
    verification: dict | None = None
    provenance: dict = field(default_factory=dict)
    data: dict | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, raw: dict) -> "Report":
        unknown = set(raw) - {"command", "spec", "certificate", "verification", "provenance", "data"}
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(**raw)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def spec_dict(params: ParameterSet, n: int | None) -> dict:
    out = {"family": params.family.value, **params.as_dict()}
    if n is not None:
        out["n"] = n
    return out


def params_from_spec_dict(raw: dict) -> tuple[ParameterSet, int | None]:
    values = {k: Fraction(raw[k]) for k in ("a", "b", "alpha", "beta") if k in raw}
    return make_params(raw["family"], **values), raw.get("n")


def certificate_dict(spec: ExtensionSpec) -> dict:
    try:
        cert = certify_regularity(spec)
    except NotInDisconjugacyRegime as exc:
        energy = dispersion(spec.params, spec.n)
        return {"node_count": None, "signs": None, "sector": spec.sector.kind.value,
                "verdict": "rejected", "kind": None, "energy": str(energy), "case": None,
                "reason": str(exc)}
    return {
        "node_count": cert.node_count,
        "signs": [cert.left_sign, cert.right_sign],
        "sector": cert.sector.value,
        "verdict": cert.verdict,
        "kind": cert.isospectral_kind,
        "energy": str(cert.energy),
        "case": cert.case,
        "reason": cert.reason,
    }


def provenance(seed: int) -> dict:
    return {"version": __version__, "seed": seed}


# ---------------------------------------------------------------------------
# output


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def emit(text: str, output: str | None) -> None:
    if output:
        write_atomic(Path(output), text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def render_text(report: Report) -> str:
    lines = [f"command: {report.command}"]
    lines.append("spec: " + ", ".join(f"{k}={v}" for k, v in report.spec.items()))
    if report.certificate:
        c = report.certificate
        lines.append(f"certificate: {c['verdict']} (sector {c['sector']}, nodes {c['node_count']}, "
                     f"signs {c['signs']}, E_n = {c['energy']})")
        if c.get("reason"):
            lines.append(f"  {c['reason']}")
    if report.verification:
        v = report.verification
        status = v.get("status") or ("pass" if v["pass"] else "fail")
        lines.append(f"verify {v['kind']}: {status}")
        if v.get("residuals"):
            lines.append(f"  max residual {max(v['residuals']):.3e} (tolerance {v['tolerance']:g})")
        for key, value in v.get("details", {}).items():
            lines.append(f"  {key}: {value}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "text":
        return render_text(report)
    raise UsageError(f"format {fmt!r} is not available for {report.command}")


# ---------------------------------------------------------------------------
# commands


def _params(args) -> ParameterSet:
    return make_params(args.family, a=args.a, b=args.b, alpha=args.alpha, beta=args.beta)


def _spec(args) -> ExtensionSpec:
    if args.n is None:
        raise UsageError("--n is required for this command")
    return ExtensionSpec(_params(args), args.n)


def _grid(args, params: ParameterSet, spec: ExtensionSpec | None) -> Grid:
    if args.x_min is not None and args.x_max is not None:
        return Grid(args.x_min, args.x_max, args.points)
    g = auto_grid(params, args.points, spec)
    return Grid(g.x_min if args.x_min is None else args.x_min,
                g.x_max if args.x_max is None else args.x_max, args.points)


def cmd_spectrum(args) -> int:
    params = _params(args)
    bound = set(bound_indices(params))
    n_max = max(args.n_max, max(bound, default=0))
    rows = []
    for n, energy, sector in sector_table(params, n_max):
        rows.append({
            "n": n,
            "energy": None if energy is None else str(energy),
            "sector": "Pole" if sector is None else sector.kind.value,
            "case": None if sector is None else sector.case,
            "bound": n in bound,
        })
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["n", "energy", "sector", "case", "bound"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        emit(buf.getvalue(), args.output)
        return EXIT_PASS
    if args.format == "json":
        report = Report("spectrum", spec_dict(params, None), provenance=provenance(args.seed),
                        data={"levels": rows})
        emit(report.to_json(), args.output)
        return EXIT_PASS
    width = max(len(r["energy"] or "") for r in rows)
    lines = [f"{'n':>3}  {'E_n':>{width}}  sector"]
    for r in rows:
        case = f" ({r['case']})" if r["case"] and not r["bound"] else ""
        lines.append(f"{r['n']:>3}  {r['energy'] or '-':>{width}}  {r['sector']}{case}")
    emit("\n".join(lines), args.output)
    return EXIT_PASS


def _coeffs(poly) -> list[str]:
    return [str(c) for c in poly.coeffs]


def cmd_extend(args) -> int:
    spec = _spec(args)
    cert = certificate_dict(spec)
    report = Report("extend", spec_dict(spec.params, spec.n), cert, provenance=provenance(args.seed))
    if cert["verdict"] == "certified-regular":
        ext = extend_potential(spec)
        report.data = {"variable": ext.rf.var, "numerator": _coeffs(ext.rf.num),
                       "denominator": _coeffs(ext.rf.den), "isospectral_kind": ext.isospectral_kind}
    emit(render(report, args.format), args.output)
    return EXIT_PASS if cert["verdict"] == "certified-regular" else EXIT_FAIL


def _verify_isospectral(spec: ExtensionSpec, args, tol: float) -> dict:
    params = spec.params
    grid = _grid(args, params, spec)
    m = len(bound_indices(params))
    base = spectrum(params, grid, m, args.levels)
    ext = spectrum(extend_potential(spec), grid, m + 1, args.levels)
    seed_energy = float(dispersion(params, spec.n))
    cmp = compare_spectra(base, ext, tol, seed_energy)
    expected = certify_regularity(spec).isospectral_kind
    residuals = list(cmp.relative)
    if cmp.extra_level is not None:
        residuals.append(abs(cmp.extra_level - seed_energy) / abs(seed_energy))
    return {
        "residuals": residuals,
        "pass": cmp.verdict == expected,
        "details": {
            "verdict": cmp.verdict,
            "expected": expected,
            "base": base.eigenvalues.tolist(),
            "extended": ext.eigenvalues.tolist(),
            "extra_level": cmp.extra_level,
            "grid": [grid.x_min, grid.x_max, grid.points, args.levels],
        },
    }


def _verify_orthogonality(spec: ExtensionSpec, args, tol: float) -> dict:
    grid = _grid(args, spec.params, spec)
    g = gram_matrix(extended_states(spec, grid), grid)
    off = np.abs(g - np.diag(np.diag(g)))[~np.eye(len(g), dtype=bool)]
    return {"residuals": off.tolist(), "pass": bool(np.all(off < tol)),
            "details": {"gram": g.tolist(), "grid": [grid.x_min, grid.x_max, grid.points]}}


def _verify_darboux(spec: ExtensionSpec, args, tol: float) -> dict:
    grid = _grid(args, spec.params, spec)
    ks = args.k or bound_indices(spec.params)
    slopes, deviations = {}, []
    for k in ks:
        slope, history = convergence_slope(spec, k, grid)
        slopes[k] = slope
        deviations.append(history[-1][1])
    ok = all(abs(s - 2) <= tol for s in slopes.values())
    return {"residuals": deviations, "pass": ok,
            "details": {"slopes": {str(k): s for k, s in slopes.items()},
                        "grid": [grid.x_min, grid.x_max, grid.points]}}


def _verify_shape(spec: ExtensionSpec, args, tol: float) -> dict:
    result = verify_enlarged_shape_invariance(spec)
    return {"residuals": [0.0 if result.holds else 1.0], "pass": result.holds,
            "details": {"E_1": str(result.e1), "residual_is_zero": result.holds}}


VERIFIERS = {
    "isospectral": _verify_isospectral,
    "orthogonality": _verify_orthogonality,
    "darboux": _verify_darboux,
    "shape-invariance": _verify_shape,
}


def cmd_verify(args) -> int:
    spec = _spec(args)
    tol = DEFAULT_TOLERANCES[args.what] if args.tol is None else args.tol
    report = Report("verify", spec_dict(spec.params, spec.n), certificate_dict(spec),
                    provenance=provenance(args.seed))
    try:
        outcome = VERIFIERS[args.what](spec, args, tol)
        status = EXIT_PASS if outcome["pass"] else EXIT_FAIL
        report.verification = {"kind": args.what, "tolerance": tol, **outcome}
    except UnsupportedFamily as exc:
        report.verification = {"kind": args.what, "residuals": [], "tolerance": tol, "pass": False,
                               "status": "unsupported", "details": {"reason": str(exc)}}
        status = EXIT_UNSUPPORTED
    emit(render(report, args.format), args.output)
    return status


def cmd_export(args) -> int:
    spec = _spec(args)
    ext = extend_potential(spec)
    ks = args.k if args.k is not None else bound_indices(spec.params)
    grid = _grid(args, spec.params, spec)
    columns = {"x": grid.x, "V": tabulate(spec.params, grid), "V_ext": tabulate(ext, grid)}
    for k in ks:
        columns[f"psi_{k}"] = tabulate(extended_eigenstate(spec, k), grid, normalize=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in zip(*columns.values()):
        writer.writerow(f"{v:.17g}" for v in row)
    emit(buf.getvalue(), args.output)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser, needs_n: bool) -> None:
    p.add_argument("--family", required=True, type=Family.parse, help="morse, hdpt, eckart or hrm")
    p.add_argument("--a", type=parse_rational)
    p.add_argument("--b", type=parse_rational)
    p.add_argument("--alpha", type=parse_rational)
    p.add_argument("--beta", type=parse_rational)
    if needs_n:
        p.add_argument("--n", type=int, help="seed level")
        p.add_argument("--k", type=parse_k_list, help="comma-separated bound levels")
        p.add_argument("--x-min", type=float)
        p.add_argument("--x-max", type=float)
        p.add_argument("--points", type=int, default=2001, help="grid points before refinement")
        p.add_argument("--levels", type=int, default=3, help="grids in the Richardson table")
        p.add_argument("--tol", type=float)
    p.add_argument("--output", "-o")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sipext", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="energies and sector of every level up to --n-max")
    _add_common(p, needs_n=False)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("extend", help="certify a seed and write V^(n) exactly")
    _add_common(p, needs_n=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="check an extension numerically or exactly")
    p.add_argument("what", choices=tuple(VERIFIERS))
    _add_common(p, needs_n=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="CSV of x, V, V_ext and extended eigenstates")
    _add_common(p, needs_n=True)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except (InvalidParameters, UsageError, UncertifiedSeed, PoleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
