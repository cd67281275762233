"""relcomp command line.

    relcomp spectrum --potential coulomb:v=0.5 --dimension 3 --channels=-1 --nu-max 1
    relcomp bound    --potential mehta_patil:v=0.5,lam=0.2,Z=2 --with-solver
    relcomp verify   --suite theorem2 --seed 42 --format json
    relcomp compare  --potential coulomb:v=0.5 --other coulomb:v=0.4

Potentials are given inline as ``kind:field=value,...`` or as the path of a
JSON file holding one spec object, e.g.

    {"kind": "interpolated", "a": 0.5,
     "lower": {"kind": "coulomb", "v": 0.5},
     "upper": {"kind": "mehta_patil", "v": 0.5, "lam": 0.2, "Z": 2}}
    {"kind": "tabulated", "path": "well.csv"}

Kinds and fields: coulomb(v), shifted_coulomb(a, b), mehta_patil(v, lam, Z),
gaussian_well(depth, width), sum(terms), interpolated(lower, upper, a),
tabulated(nodes | path). Tabulated CSV files have two columns r,V and an
optional header; relative paths resolve against the JSON file's directory.

Channels: for Dirac, a comma list of k_d values, each optionally with a node
count as ``k:nu`` (``--channels=-1,1:0``); for Klein-Gordon, l values
(``--channels 0,1``). Entries without an explicit node count expand to
nu = 0..--nu-max.

Column order of CSV output (also the key order of JSON rows):

    spectrum: equation d j tau k_d l nu label energy nodes residual iterations status
    bound:    equation d j tau k_d l nu label kind u_star t_star a b bound_value
              solver_energy gap heuristic
    compare:  pair channel E1 E2 gap

``energy_abs``/``bound_value_abs`` columns are appended when --mass is given.
Exit status: 0 success, 1 ordering violation, 2 malformed input,
3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._shooting import NoBoundState, SolverConfig, SolverError
from .analytic import DiracChannel, KGChannel, spectroscopic_label
from .dirac import solve_dirac
from .envelope import EnvelopeError, KGClosedFormError, optimize_bound
from .harness import (compare_pairs, monotonicity_suite, theorem2_suite, theorem4_suite)
from .kg import solve_kg
from .potentials import PotentialModel, from_spec, parse_inline, to_spec

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3

SPECTRUM_COLUMNS = ["equation", "d", "j", "tau", "k_d", "l", "nu", "label", "energy", "nodes",
                    "residual", "iterations", "status"]
BOUND_COLUMNS = ["equation", "d", "j", "tau", "k_d", "l", "nu", "label", "kind", "u_star",
                 "t_star", "a", "b", "bound_value", "solver_energy", "gap", "heuristic"]
COMPARE_COLUMNS = ["pair", "channel", "E1", "E2", "gap"]


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    """Numbers to 9 significant digits; everything else via str."""
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x).lower()
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.9g}"
    return str(x)


def _round(x):
    if isinstance(x, float) and math.isfinite(x):
        return float(f"{x:.9g}")
    if isinstance(x, float):
        return None
    return x


def load_potential(text: str) -> PotentialModel:
    path = Path(text)
    if text.endswith(".json") or path.is_file():
        if not path.is_file():
            raise UsageError(f"potential file {text} does not exist")
        try:
            spec = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"{text}: {exc}") from exc
        return from_spec(spec, base_dir=path.parent)
    return parse_inline(text)


def _half(x: Fraction) -> bool:
    return x.denominator in (1, 2)


def parse_channels(text: str | None, equation: str, d: int, nu_max: int):
    out = []
    if equation == "dirac":
        tokens = [t for t in (text or str(Fraction(-(d - 1), 2))).split(",") if t.strip()]
        for tok in tokens:
            kt, _, nt = tok.strip().partition(":")
            k = Fraction(kt)
            j = abs(k) - Fraction(d - 2, 2)
            if k == 0 or not _half(k) or j <= 0 or j.denominator != 2:
                raise UsageError(f"k_d={kt} is not a Dirac channel in d={d}")
            nus = [int(nt)] if nt else range(nu_max + 1)
            out += [DiracChannel(d, float(j), 1 if k > 0 else -1, nu) for nu in nus]
    else:
        for tok in [t for t in (text or "0").split(",") if t.strip()]:
            lt, _, nt = tok.strip().partition(":")
            nus = [int(nt)] if nt else range(nu_max + 1)
            out += [KGChannel(d, int(lt), nu) for nu in nus]
    if not out:
        raise UsageError("channel list is empty")
    return out


def _channel_cols(ch) -> dict:
    if isinstance(ch, DiracChannel):
        return {"equation": "dirac", "d": ch.d, "j": str(Fraction(ch.j)), "tau": ch.tau,
                "k_d": fmt(ch.k), "l": fmt(ch.ell), "nu": ch.nu, "label": spectroscopic_label(ch)}
    return {"equation": "klein_gordon", "d": ch.d, "j": "", "tau": "", "k_d": "",
            "l": ch.ell, "nu": ch.nu, "label": f"l={ch.ell} nu={ch.nu}"}


def _solve(eq):
    return solve_dirac if eq == "dirac" else solve_kg


def cmd_spectrum(args, cfg, model):
    rows = []
    for ch in parse_channels(args.channels, args.equation, args.dimension, args.nu_max):
        row = _channel_cols(ch)
        try:
            res = _solve(args.equation)(model, ch, args.m, cfg)
            row.update(energy=res.energy / args.m, nodes=res.nodes_found, residual=res.residual,
                       iterations=res.iterations, status="ok")
        except NoBoundState:
            row.update(energy=math.nan, nodes=None, residual=math.nan, iterations=0,
                       status="no_bound_state")
        if args.mass is not None:
            row["energy_abs"] = row["energy"] * args.m
        rows.append(row)
    return rows, EXIT_OK


def cmd_bound(args, cfg, model):
    rows = []
    for ch in parse_channels(args.channels, args.equation, args.dimension, args.nu_max):
        b = optimize_bound(model, ch, args.equation, args.m)
        row = _channel_cols(ch)
        E = math.nan
        if args.with_solver:
            try:
                E = _solve(args.equation)(model, ch, args.m, cfg).energy
            except NoBoundState:
                pass
        row.update(kind=b.kind, u_star=b.u_star, t_star=b.t_star, a=b.a_coeff, b=b.b_coeff,
                   bound_value=b.bound_value / args.m, solver_energy=E / args.m,
                   gap=(b.bound_value - E) / args.m, heuristic=b.heuristic)
        if args.mass is not None:
            row["bound_value_abs"] = b.bound_value
        rows.append(row)
    return rows, EXIT_OK


def cmd_compare(args, cfg, model):
    other = load_potential(args.other)
    channels = parse_channels(args.channels, args.equation, args.dimension, args.nu_max)
    rep = compare_pairs([(model, other)], channels, args.equation, cfg, args.m)
    return rep, EXIT_OK if rep.passed else EXIT_VIOLATION


SUITES = {
    "theorem1": lambda a, cfg: monotonicity_suite("dirac", a.seed, a.families or 20, cfg=cfg),
    "theorem2": lambda a, cfg: theorem2_suite(a.seed, a.pairs or 50, cfg),
    "theorem3": lambda a, cfg: monotonicity_suite("klein_gordon", a.seed, a.families or 20, cfg=cfg),
    "theorem4": lambda a, cfg: theorem4_suite(a.seed, a.pairs or 50, cfg),
}


def cmd_verify(args, cfg, model):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = {n: SUITES[n](args, cfg) for n in names}
    ok = all(r.passed for r in reports.values())
    return reports, EXIT_OK if ok else EXIT_VIOLATION


def _write_rows(rows, columns, fmt_name, extra_cols):
    cols = columns + [c for c in extra_cols if any(c in r for r in rows)]
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in cols])
        return buf.getvalue()
    body = [[fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(b[i]) for b in body)) if body else len(c)
              for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relcomp", description="Relativistic bound states in "
                                "central potentials: spectra, envelope bounds, comparison checks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("spectrum", "solve eigenvalues"), ("bound", "envelope bounds"),
                           ("verify", "run a seeded theorem suite"),
                           ("compare", "check E1 <= E2 for two ordered potentials")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--equation", choices=["dirac", "klein_gordon"], default="dirac")
        s.add_argument("--dimension", type=int, default=3)
        s.add_argument("--channels", help="k_d list (Dirac) or l list (KG), entries k or k:nu")
        s.add_argument("--nu-max", type=int, default=0)
        s.add_argument("--mass", type=float, default=None)
        s.add_argument("--format", choices=["csv", "json", "text"], default="text")
        s.add_argument("--out", help="output path (default stdout)")
        s.add_argument("--seed", type=int, default=42)
        s.add_argument("--tol", type=float, default=1e-8, help="eigenvalue tolerance e_tol")
        s.add_argument("--n-steps", type=int, default=8192)
        s.add_argument("--save-potential", help="write the parsed potential spec as JSON")
        if name in ("spectrum", "bound", "compare"):
            s.add_argument("--potential", required=True, help="inline spec or JSON file")
        if name == "bound":
            s.add_argument("--with-solver", action="store_true",
                           help="also solve the eigenvalue and report the gap")
        if name == "compare":
            s.add_argument("--other", required=True, help="the upper potential V2")
        if name == "verify":
            s.add_argument("--suite", choices=[*SUITES, "all"], default="theorem2")
            s.add_argument("--pairs", type=int, default=None)
            s.add_argument("--families", type=int, default=None)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.nu_max < 0:
            raise UsageError("--nu-max must be nonnegative")
        if args.mass is not None and not args.mass > 0:
            raise UsageError("--mass must be positive")
        args.m = args.mass if args.mass is not None else 1.0
        cfg = SolverConfig(e_tol=args.tol, n_steps=args.n_steps)
        model = load_potential(args.potential) if hasattr(args, "potential") else None
        if args.save_potential and model is not None:
            Path(args.save_potential).write_text(json.dumps(to_spec(model), indent=2) + "\n")
        result, status = {"spectrum": cmd_spectrum, "bound": cmd_bound,
                          "compare": cmd_compare, "verify": cmd_verify}[args.command](args, cfg, model)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"relcomp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, EnvelopeError, KGClosedFormError) as exc:
        print(f"relcomp: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    text = render(args, result)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def _meta(args) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("m",)}
    if getattr(args, "potential", None):
        config["potential_spec"] = to_spec(load_potential(args.potential))
    if getattr(args, "other", None):
        config["other_spec"] = to_spec(load_potential(args.other))
    return {"version": __version__, "seed": args.seed, "config": config}


def render(args, result) -> str:
    if args.command in ("spectrum", "bound"):
        cols = SPECTRUM_COLUMNS if args.command == "spectrum" else BOUND_COLUMNS
        extra = ["energy_abs"] if args.command == "spectrum" else ["bound_value_abs"]
        if args.format == "json":
            keys = cols + [c for c in extra if any(c in r for r in result)]
            rows = [{k: _round(r.get(k)) for k in keys} for r in result]
            return json.dumps({"meta": _meta(args), "rows": rows}, indent=2) + "\n"
        return _write_rows(result, cols, args.format, extra)
    if args.command == "compare":
        if args.format == "json":
            return json.dumps({"meta": _meta(args), "report": result.to_dict()}, indent=2) + "\n"
        if args.format == "csv":
            return _write_rows(result.rows, COMPARE_COLUMNS, "csv", [])
        return result.to_text() + "\n"
    # verify
    if args.format == "json":
        rep = {k: r.to_dict() for k, r in result.items()}
        for r in rep.values():
            r.pop("elapsed", None)
        return json.dumps({"meta": _meta(args), "report": rep}, indent=2, sort_keys=True) + "\n"
    if args.format == "csv":
        rows = []
        for name, r in result.items():
            if hasattr(r, "rows"):
                rows += [{"suite": name, **x} for x in r.rows]
            else:
                for i, m in enumerate(r.reports):
                    for ch, Es in m.energies.items():
                        rows += [{"suite": name, "pair": i, "channel": ch, "a": a, "E": E}
                                 for a, E in zip(m.a_grid, Es)]
        cols = ["suite", "pair", "channel", "E1", "E2", "gap"] if any("E1" in r for r in rows) \
            else ["suite", "pair", "channel", "a", "E"]
        return _write_rows(rows, cols, "csv", [])
    return "\n".join(r.to_text() for r in result.values()) + "\n"


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
