"""Command-line front end.

Every command builds a JSON-able result plus a table; ``--json``,
``--table`` (default) and ``--csv`` choose the rendering.  Exit codes: 0 on
success, 1 on a domain error, 2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .circuits import enumerate_circuits, is_edge_generator
from .discriminant import (
    EXAMPLE_POLYNOMIALS,
    EXAMPLE_SUBDIVISIONS,
    ImplicitPolynomial,
    boundary_sample,
    build_chart,
    example_chart,
    example_polynomial,
    hk_sample,
    random_sample,
    slice_grid,
    verify_vanishing,
)
from .equality import check_equality
from .errors import SoncError
from .expsum import ExponentialSum, GridConfig, check_nonneg_numeric, evaluate
from .geometry import SupportSet
from .linalg import as_fraction
from .subdivision import census, sonc_complex, subdivide, tropical_complex
from .univariate import (
    build_poset,
    codim1_count,
    enumerate_labels,
    quartic_boundary_test,
)


class Result:
    def __init__(self, data, headers=(), rows=(), text: str | None = None):
        self.data = data
        self.headers = list(headers)
        self.rows = [list(r) for r in rows]
        self.text = text

    def render(self, mode: str) -> str:
        if mode == "json":
            return json.dumps(self.data, indent=2) + "\n"
        if mode == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.headers)
            w.writerows(self.rows)
            return buf.getvalue()
        if self.text is not None:
            return self.text
        return _table(self.headers, self.rows)


def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _support(path: str) -> SupportSet:
    return SupportSet.load(path)


def _vector(path_or_text: str, key: str) -> list[Fraction]:
    """A rational vector from a JSON file, or inline as ``1,2/3,-1``."""
    p = Path(path_or_text)
    if p.exists():
        data = _read_json(path_or_text)
        if isinstance(data, dict):
            data = data[key]
    else:
        data = [v for v in path_or_text.split(",") if v.strip()]
    return [as_fraction(v) for v in data]


def _fmt(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


# ------------------------------------------------------------------ commands


def cmd_circuits(args) -> Result:
    A = _support(args.support)
    rows, data = [], []
    for c in enumerate_circuits(A):
        if args.simplicial and not c.simplicial:
            continue
        edge = is_edge_generator(A, c) if c.simplicial else False
        if args.edges_only and not edge:
            continue
        vec = c.integer_vector()
        rows.append([list(c.support), _fmt(vec), _fmt(c.signature), c.simplicial, edge])
        data.append(
            {
                "support": list(c.support),
                "vector": list(vec),
                "barycentric": [str(v) for v in c.kernel_vec],
                "signature": list(c.signature),
                "simplicial": c.simplicial,
                "edge_generator": edge,
            }
        )
    return Result({"circuits": data}, ["support", "vector", "signature", "simplicial", "edge"], rows)


def _weights(args, A: SupportSet) -> list[Fraction]:
    if args.weights is None:
        return [Fraction(0)] * len(A)
    return _vector(args.weights, "weights")


def cmd_subdivide(args) -> Result:
    A = _support(args.support)
    L = subdivide(A, _weights(args, A))
    G = sonc_complex(L)
    rows = [[list(c.key), list(c.vertices), sorted(c.lifted)] for c in L.cells]
    data = L.to_json()
    data["sonc_complex"] = [list(g) for g in G.signature]
    return Result(data, ["cell", "vertices", "lifted"], rows)


def cmd_census(args) -> Result:
    A = _support(args.support)
    groups = census(A)
    total = sum(len(v) for v in groups.values())
    data = {
        "regular_subdivisions": total,
        "sonc_complexes": len(groups),
        "census": [
            {
                "generators": [list(g) for g in sig],
                "subdivisions": [[list(c) for c in L.signature] for L in subs],
                "witnesses": [L.witness.to_json() for L in subs],
            }
            for sig, subs in groups.items()
        ],
    }
    if args.sonc_complexes:
        rows = [[[list(g) for g in sig] or "empty", len(subs)] for sig, subs in groups.items()]
        text = _table(["sonc-complex", "subdivisions"], rows) + f"{len(groups)}\n"
        return Result(data, ["sonc-complex", "subdivisions"], rows, text)
    rows = []
    for sig, subs in groups.items():
        for L in subs:
            rows.append([[list(c) for c in L.signature], L.witness.to_json(), [list(g) for g in sig] or "empty"])
    text = _table(["cells", "witness", "sonc-complex"], rows) + f"{total} regular subdivisions\n"
    return Result(data, ["cells", "witness", "sonc-complex"], rows, text)


def cmd_tropical(args) -> Result:
    A = _support(args.support)
    w = _weights(args, A)
    M = tropical_complex(A, w)
    L = subdivide(A, w)
    from .subdivision import check_duality

    rows = [
        [sorted(c.indicator), c.dim, [_fmt(v) for v in c.vertices], [_fmt(r) for r in c.rays]] for c in M.cells
    ]
    data = {
        "vertices": [{"indicator": sorted(I), "x": [str(v) for v in x]} for I, x in M.vertices],
        "cells": [
            {
                "indicator": sorted(c.indicator),
                "dim": c.dim,
                "vertices": [[str(v) for v in x] for x in c.vertices],
                "rays": [[str(v) for v in r] for r in c.rays],
                "lineality": [[str(v) for v in r] for r in c.lineality],
            }
            for c in M.cells
        ],
        "dual": check_duality(L, M),
    }
    return Result(data, ["indicator", "dim", "vertices", "rays"], rows)


def _chart_from_args(args):
    """Either a built-in example stratum (``D0``..``D5``) or a support plus weights."""
    if args.chart in EXAMPLE_SUBDIVISIONS:
        chart = example_chart(args.chart)
        return chart.support, chart
    A = _support(args.chart)
    return A, build_chart(A, subdivide(A, _weights(args, A)))


def cmd_hk_sample(args) -> Result:
    args.chart = args.support
    A, chart = _chart_from_args(args)
    if args.t is None and args.z is None:
        s = random_sample(chart, random.Random(args.seed))
    else:
        t = _vector(args.t, "t") if args.t else [Fraction(1)] * len(chart.circuits)
        if args.z:
            raw = _read_json(args.z) if Path(args.z).exists() else json.loads(args.z)
            if isinstance(raw, dict):
                raw = raw["z"]
            if raw and not isinstance(raw[0], list):
                raw = [raw]
            z = [[as_fraction(v) for v in p] for p in raw]
        else:
            z = [[Fraction(1)] * A.n]
        mono = _vector(args.monomials, "monomials") if args.monomials else ()
        s = hk_sample(chart, t, z, mono)
    data = {"chart": chart.to_json(), "sample": s.to_json()}
    rows = [[i, str(a)] for i, a in enumerate(s.a)]
    return Result(data, ["index", "a"], rows)


def _poly(args) -> ImplicitPolynomial:
    if args.poly in EXAMPLE_POLYNOMIALS:
        return example_polynomial(args.poly)
    return ImplicitPolynomial.parse("D", args.poly)


def cmd_verify_disc(args) -> Result:
    A, chart = _chart_from_args(args)
    D = _poly(args)
    rng = random.Random(args.seed)
    values = [verify_vanishing(D, random_sample(chart, rng)) for _ in range(args.samples)]
    zeros = sum(1 for v in values if v == 0)
    data = {
        "poly": str(D),
        "samples": args.samples,
        "zeros": zeros,
        "nonzero": [str(v) for v in values if v != 0][:10],
    }
    rows = [[D.name, args.samples, zeros]]
    return Result(data, ["poly", "samples", "exact zeros"], rows)


def cmd_boundary_sample(args) -> Result:
    A = _support(args.support)
    w = _weights(args, A)
    t = _vector(args.t, "t") if args.t else None
    b = boundary_sample(A, w, t)
    report = check_nonneg_numeric(b.f, GridConfig(step_tol=args.tol)) if A.n <= 3 else None
    data = {
        "decomposition": b.decomposition.to_json(),
        "coeffs": [str(v) for v in b.f.coeffs],
        "loci": [[str(v) for v in x] for x in b.loci],
        "cells": list(b.cells),
        "log_scale": b.log_scale,
        "min_found": report.min_found if report else None,
        "mode": "float" if report else None,
    }
    if args.emit_grid:
        D = _poly(args) if args.poly else None
        axes = tuple(int(v) for v in args.axes.split(","))
        grid = slice_grid(b.f, D, axes, steps=args.grid_steps)
        with open(args.emit_grid, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow([f"a{i}" for i in range(len(A))] + ["D", "f_min"])
            wr.writerows(grid)
        data["grid"] = args.emit_grid
    rows = [[i, str(a)] for i, a in enumerate(b.f.coeffs)]
    return Result(data, ["index", "a"], rows)


def cmd_strata(args) -> Result:
    if args.codim1:
        c = codim1_count(args.d)
        data = {"d": args.d, "labels": c.labels, "total": c.total}
        return Result(data, ["d", "labels", "total"], [[args.d, c.labels, c.total]])
    labels = enumerate_labels(args.d, slice=args.slice)
    P = build_poset(labels)
    dim = (lambda L: L.slice_dim()) if args.slice else (lambda L: L.dim)
    data = {"labels": [{"label": str(L), "dim": dim(L)} for L in labels]}
    if args.poset:
        data["poset"] = P.to_json()
    rows = [[dim(L), str(L)] for L in labels]
    text = None
    if args.dot:
        text = P.to_dot() + "\n"
    return Result(data, ["dim", "label"], rows, text)


def cmd_quartic(args) -> Result:
    verdict = quartic_boundary_test(args.w1, args.w3)
    data = {"w1": str(as_fraction(args.w1)), "w3": str(as_fraction(args.w3)), "verdict": verdict}
    return Result(data, ["w1", "w3", "verdict"], [[data["w1"], data["w3"], verdict]])


def cmd_check_equality(args) -> Result:
    A = _support(args.support)
    r = check_equality(A)
    data = r.to_json()
    rows = [["verdict", r.verdict], ["generic", r.generic], ["sonc-complexes", len(r.census)],
            ["nonempty", len(r.nonempty)], ["nonempty up to symmetry", r.nonempty_up_to_symmetry]]
    if args.census:
        for e in r.census:
            rows.append(["complex", [list(g) for g in e.signature] or "empty"])
    return Result(data, ["field", "value"], rows)


def _exp_sum(path: str) -> ExponentialSum:
    return ExponentialSum.load(path)


def cmd_eval(args) -> Result:
    f = _exp_sum(args.f)
    z = _vector(args.at, "z")
    v = evaluate(f, z)
    data = {"value": str(v)} if isinstance(v, Fraction) else {"value": v, "mode": "float"}
    return Result(data, ["value"], [[data["value"]]])


def cmd_minimize(args) -> Result:
    f = _exp_sum(args.f)
    r = check_nonneg_numeric(f, GridConfig(step_tol=args.tol))
    data = {"mode": "float", "min_found": r.min_found, "argmin_w": list(r.argmin), "argmin_z": list(r.argmin_z)}
    return Result(data, ["min_found", "argmin_z"], [[repr(r.min_found), _fmt(f"{v:.12g}" for v in r.argmin_z)]])


# ------------------------------------------------------------------ parser


def _common(top: bool) -> argparse.ArgumentParser:
    # flags are accepted before and after the command; only the top level sets defaults
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--seed", type=int, default=d(0), help="seed for all random sampling")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="mode", action="store_const", const="json", default=d(None))
    fmt.add_argument("--table", dest="mode", action="store_const", const="table", default=d(None))
    fmt.add_argument("--csv", dest="mode", action="store_const", const="csv", default=d(None))
    common.add_argument("--out", default=d(None), help="write output here instead of stdout")
    common.add_argument("--tol", type=float, default=d(1e-12), help="float-mode step tolerance")
    return common


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sonc", parents=[_common(True)], description=__doc__.splitlines()[0], allow_abbrev=False
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    common = _common(False)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        sp.set_defaults(func=func)
        return sp

    sp = add("circuits", cmd_circuits, "list circuits and edge generators")
    sp.add_argument("support")
    sp.add_argument("--simplicial", action="store_true")
    sp.add_argument("--edges-only", action="store_true", help="only Reznick-cone edge generators")

    sp = add("subdivide", cmd_subdivide, "regular subdivision from weights")
    sp.add_argument("support")
    sp.add_argument("--weights")

    sp = add("census", cmd_census, "all regular subdivisions and their sonc-complexes")
    sp.add_argument("support")
    sp.add_argument("--sonc-complexes", action="store_true")

    sp = add("tropical", cmd_tropical, "tropical complex dual to a regular subdivision")
    sp.add_argument("support")
    sp.add_argument("--weights")

    sp = add("hk-sample", cmd_hk_sample, "evaluate a Lambda-discriminant chart")
    sp.add_argument("support", help="support JSON, or D0..D5 for the built-in example charts")
    sp.add_argument("--weights")
    sp.add_argument("--t")
    sp.add_argument("--z", help="toric points, one per top cell (JSON file or inline JSON)")
    sp.add_argument("--monomials")

    sp = add("verify-disc", cmd_verify_disc, "check an implicit polynomial on random chart samples")
    sp.add_argument("chart", help="support JSON, or D0..D5 for the built-in example charts")
    sp.add_argument("--weights")
    sp.add_argument("--poly", required=True, help="D0..D5 or a polynomial such as 'a4^2 - 4*a2*a5'")
    sp.add_argument("--samples", type=int, default=100)

    sp = add("boundary-sample", cmd_boundary_sample, "agiforms arranged on a tropical complex")
    sp.add_argument("support")
    sp.add_argument("--weights")
    sp.add_argument("--t")
    sp.add_argument("--emit-grid", metavar="CSV")
    sp.add_argument("--axes", default="0,1", help="two coefficient indices spanning the slice")
    sp.add_argument("--poly", help="implicit polynomial evaluated on the grid")
    sp.add_argument("--grid-steps", type=int, default=11)

    sp = add("strata", cmd_strata, "univariate boundary strata")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--slice", action="store_true")
    sp.add_argument("--poset", action="store_true")
    sp.add_argument("--codim1", action="store_true")
    sp.add_argument("--dot", action="store_true")

    sp = add("quartic-test", cmd_quartic, "boundary test for two quartic agiforms")
    sp.add_argument("--w1", required=True)
    sp.add_argument("--w3", required=True)

    sp = add("check-equality", cmd_check_equality, "decide whether sonc and nonnegative cones agree")
    sp.add_argument("support")
    sp.add_argument("--census", action="store_true")

    sp = add("eval", cmd_eval, "evaluate an exponential sum")
    sp.add_argument("f")
    sp.add_argument("--at", required=True)

    sp = add("minimize", cmd_minimize, "grid search plus descent for the minimum")
    sp.add_argument("f")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    mode = args.mode or "table"
    try:
        out = args.func(args).render(mode)
    except SoncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
