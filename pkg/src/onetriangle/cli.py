"""Command-line front end.

Every subcommand except ``construct`` prints one JSON report on stdout with
a fixed field order, so identical inputs give byte-identical output.
``construct`` prints a point set in the text format read by ``census``.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from math import comb
from pathlib import Path

from . import __version__
from .constructions import FAMILIES, construct
from .geometry import CensusReport, GeometryError, census, epsilon_census
from .labelings import (
    TriangleType,
    default_grid,
    enumerate_one_triangle_labelings,
    verify_bound,
)
from .pointfile import (
    PointFileError,
    format_number,
    format_points,
    parse_matrix,
    parse_points,
    parse_rational,
)
from .realizability import NotRealizableError, ResidualError, embedding_dimension, realize_coordinates
from .search import SearchConfig, minimize_defect, snap_and_census

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2  # argparse
EXIT_PARSE = {"malformed": 3, "arity": 4, "duplicate": 5, "empty": 6}
EXIT_PRECONDITION = 7
EXIT_IO = 8


class PreconditionError(ValueError):
    pass


def _num(x):
    return format_number(x)


def _digest(command: str, args: dict, files: dict[str, bytes]) -> str:
    blob = json.dumps(
        {
            "command": command,
            "args": {k: str(v) for k, v in sorted(args.items())},
            "files": {k: hashlib.sha256(v).hexdigest() for k, v in sorted(files.items())},
        },
        sort_keys=True,
    )
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def render_report(command: str, args: dict, files: dict[str, bytes], payload: dict) -> str:
    report = {
        "command": command,
        "version": __version__,
        "inputs_digest": _digest(command, args, files),
        "payload": payload,
    }
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def census_payload(rep: CensusReport, mode: str, ambient_dim: int) -> dict:
    return {
        "mode": mode,
        "n_points": rep.n_points,
        "ambient_dim": ambient_dim,
        "distinct_distances": {
            "count": rep.n_distinct_distances,
            "squared_values": [_num(v) for v in rep.distinct_distances],
        },
        "triangle_classes": [
            {"signature": [_num(v) for v in sig], "kind": sig.kind, "multiplicity": mult}
            if mode == "exact"
            else {"signature": [_num(v) for v in sig], "multiplicity": mult}
            for sig, mult in rep.triangle_classes
        ],
        "n_classes": rep.n_classes,
        "degenerate_triples": rep.degenerate_triples,
        "triples_total": comb(rep.n_points, 3),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_census(ns) -> tuple[str, int]:
    raw = _read_bytes(ns.file)
    cfg = parse_points(raw.decode("utf-8"))
    if len(cfg) < 3:
        raise PreconditionError(f"census needs at least 3 points, got {len(cfg)}")
    if ns.eps is None:
        rep, mode = census(cfg), "exact"
    else:
        rep, mode = epsilon_census(cfg.to_float(), ns.eps), "epsilon"
    payload = census_payload(rep, mode, cfg.ambient_dim)
    if ns.eps is not None:
        payload["eps"] = ns.eps
    args = {"eps": ns.eps}
    return render_report("census", args, {"points": raw}, payload), EXIT_OK


def cmd_realize(ns) -> tuple[str, int]:
    raw = _read_bytes(ns.file)
    D = parse_matrix(raw.decode("utf-8"))
    if ns.dim < 1:
        raise PreconditionError("--dim must be at least 1")
    rep = embedding_dimension(D)
    payload = {
        "n_points": D.n,
        "psd": rep.psd,
        "rank": rep.rank,
        "min_embedding_dim": rep.min_embedding_dim if rep.psd else "NOT_REALIZABLE",
        "witness": None if rep.witness is None else [_num(v) for v in rep.witness],
        "witness_base_index": None if rep.witness is None else rep.base_index,
        "target_dim": ns.dim,
        "realizable_in_target": rep.realizable_in(ns.dim),
        "coordinates": None,
        "max_relative_residual": None,
    }
    code = EXIT_OK
    try:
        X, residual = realize_coordinates(D, ns.dim)
        payload["coordinates"] = [[_num(v) for v in row] for row in X.tolist()]
        payload["max_relative_residual"] = _num(residual)
    except NotRealizableError as exc:
        print(f"realize: {exc}", file=sys.stderr)
        code = EXIT_PRECONDITION
    except ResidualError as exc:
        print(f"realize: {exc}", file=sys.stderr)
        payload["max_relative_residual"] = _num(exc.residual)
        code = EXIT_FAIL
    return render_report("realize", {"dim": ns.dim}, {"matrix": raw}, payload), code


def cmd_enumerate(ns) -> tuple[str, int]:
    ttype = TriangleType.parse(ns.type)
    try:
        res = enumerate_one_triangle_labelings(ns.n, ttype)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    payload = {
        "n": ns.n,
        "type": ttype.short,
        "label_multiset": list(ttype.value),
        "count": res.count,
        "representatives": [L.edge_list() for L in res.representatives],
    }
    return render_report("enumerate", {"n": ns.n, "type": ttype.short}, {}, payload), EXIT_OK


def cmd_construct(ns) -> tuple[str, int]:
    try:
        params = [parse_rational(t.strip()) for t in ns.params.split(",") if t.strip()]
    except ValueError as exc:
        raise PreconditionError(f"--params: {exc}") from None
    if ns.family == "simplex":
        if len(params) != 1 or params[0].denominator != 1:
            raise PreconditionError("simplex takes one integer parameter d")
        params = [int(params[0])]
    cfg = construct(ns.family, params)
    header = f"{ns.family} " + ",".join(_num(p) for p in params)
    return format_points(cfg.as_rows(), header), EXIT_OK


def cmd_search(ns) -> tuple[str, int]:
    cfg = SearchConfig(
        n=ns.n,
        d=ns.dim,
        restarts=ns.restarts,
        max_iters=ns.max_iters,
        seed=ns.seed,
        step=ns.step,
        shrink=ns.shrink,
        degeneracy_margin=ns.margin,
    )
    res = minimize_defect(cfg, workers=ns.workers)
    try:
        snap = snap_and_census(res.best_config, ns.eps, margin=ns.margin)
        snap_payload = census_payload(snap.report, "epsilon", cfg.d) | {"eps": ns.eps}
    except GeometryError as exc:
        # minimizers near the n = 5 floor can pinch points together
        snap_payload = {"eps": ns.eps, "error": str(exc)}
    points_text = format_points(res.best_config.tolist())
    if ns.points_out:
        Path(ns.points_out).write_text(points_text, encoding="utf-8")
    payload = {
        "config": {
            "n": cfg.n,
            "dim": cfg.d,
            "restarts": cfg.restarts,
            "max_iters": cfg.max_iters,
            "seed": cfg.seed,
            "step": cfg.step,
            "shrink": cfg.shrink,
            "degeneracy_margin": cfg.degeneracy_margin,
        },
        "best_defect": _num(res.best_defect),
        "iterations_used": res.iterations_used,
        "per_restart": [{"seed": s, "defect": _num(f)} for s, f in res.per_restart],
        "snap_census": snap_payload,
        "best_config": points_text,
    }
    args = {k: getattr(ns, k) for k in ("n", "dim", "restarts", "max_iters", "seed", "step", "shrink", "margin", "eps")}
    return render_report("search", args, {}, payload), EXIT_OK


VERIFY_FAMILIES = {
    TriangleType.EQUILATERAL: {"simplex"},
    TriangleType.ISOSCELES: {"iso-tet", "square"},
    TriangleType.SCALENE: {"opp-edge-tet", "rectangle"},
}


def run_verify(d_min: int, d_max: int) -> dict:
    """Verification table over ``d_min..d_max`` for all three triangle types."""
    if not 3 <= d_min <= d_max <= 10:
        raise PreconditionError(f"need 3 <= dmin <= dmax <= 10, got {d_min}, {d_max}")
    rows = []
    for d in range(d_min, d_max + 1):
        for ttype in TriangleType:
            rec = verify_bound(d, ttype, default_grid(ttype))
            expected = d + 1 if ttype is TriangleType.EQUILATERAL else 4
            families = rec.witness_families
            ok = rec.max_points == expected and set(families) == VERIFY_FAMILIES[ttype]
            rows.append(
                {
                    "d": d,
                    "type": ttype.short,
                    "max_points": rec.max_points,
                    "expected": expected,
                    "labelings_above_max": rec.survivors_above,
                    "witness_families": families,
                    "grid_checks": [
                        {
                            "n": c.n,
                            "values": [_num(v) for v in c.values],
                            "psd": c.psd,
                            "rank": c.rank,
                            "fits": c.fits,
                        }
                        for c in rec.checks
                    ],
                    "match": ok,
                }
            )
    return {
        "dmin": d_min,
        "dmax": d_max,
        "value_grids": {t.short: [[_num(v) for v in row] for row in default_grid(t)] for t in TriangleType},
        "rows": rows,
        "verdict": "PASS" if all(r["match"] for r in rows) else "FAIL",
    }


def cmd_verify(ns) -> tuple[str, int]:
    payload = run_verify(ns.dmin, ns.dmax)
    code = EXIT_OK if payload["verdict"] == "PASS" else EXIT_FAIL
    return render_report("verify", {"dmin": ns.dmin, "dmax": ns.dmax}, {}, payload), code


# ---------------------------------------------------------------------------


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return x


_GRID_HELP = (
    "default value grids (squared lengths): scalene (d1,d2,d3) in "
    + "; ".join(",".join(map(str, r)) for r in default_grid(TriangleType.SCALENE))
    + "; isosceles (d1,d2) in "
    + "; ".join(",".join(map(str, r)) for r in default_grid(TriangleType.ISOSCELES))
    + "; equilateral uses 1"
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onetriangle",
        description="Exact tools for point sets that determine a single distinct triangle.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="count distinct distances and triangles of a point file")
    p.add_argument("file", help="point-set file ('-' for stdin)")
    p.add_argument("--eps", type=_positive_float, default=None,
                   help="relative tolerance; switches to the floating-point census")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("realize", help="embedding dimension and coordinates for a squared-distance matrix")
    p.add_argument("file", help="matrix file: n, then the upper triangle row-wise ('-' for stdin)")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("enumerate", help="one-triangle edge labelings of K_n up to vertex relabeling")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--type", required=True, choices=["eq", "iso", "sca"])
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("construct", help="emit a one-triangle configuration as a point file")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--params", required=True,
                   help="comma-separated rationals: simplex d | rectangle a,b | iso-tet d2,h | opp-edge-tet p,q,r")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="random-restart minimization of the one-triangle defect")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=_positive_float, default=1.0)
    p.add_argument("--shrink", type=float, default=0.5)
    p.add_argument("--margin", type=float, default=1e-2, help="degeneracy margin on 16A^2/s^2")
    p.add_argument("--eps", type=_positive_float, default=1e-5, help="tolerance of the final census")
    p.add_argument("--workers", type=int, default=1, help="processes; never changes the output")
    p.add_argument("--points-out", default=None, help="also write the best configuration here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check F_d(1) for a range of dimensions", epilog=_GRID_HELP)
    p.add_argument("--dmin", type=int, default=3)
    p.add_argument("--dmax", type=int, default=3)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        out, code = ns.func(ns)
    except PointFileError as exc:
        print(f"{ns.command}: {exc}", file=sys.stderr)
        return EXIT_PARSE[exc.kind]
    except OSError as exc:
        print(f"{ns.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PreconditionError, GeometryError, ValueError) as exc:
        print(f"{ns.command}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
