"""Command-line entry point: run a verification, print tab-delimited checks, write reports and figures."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Any, Callable, Iterable, Optional, Sequence

from . import cube_decomp as cd
from . import heron_pipeline as hp
from . import pythag_dissect as pd
from . import signed_expansion as se
from .exact_scalar import DomainError, QuadScalar, as_quad, parse_rational, sqrt_rational
from .geometry4 import DEFAULT_PROJECTION, GeometryError, certify_tiling, congruent, piece_volume
from .report import Check, ReportDocument

log = logging.getLogger("heron4d")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class Outcome:
    checks: list[Check] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)
    figures: list[tuple[str, list, str]] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: Any = "") -> None:
        self.checks.append(Check(name, bool(ok), str(detail)))


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _leg_pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two rationals 'x,y', got {text!r}")
    return _rational(parts[0]), _rational(parts[1])


def _projection(text: str) -> tuple[tuple[Fraction, Fraction], ...]:
    vals = [_rational(t) for t in text.split(",")]
    if len(vals) != 8:
        raise argparse.ArgumentTypeError("projection needs 8 rationals (row-major 4x2)")
    return tuple((vals[2 * i], vals[2 * i + 1]) for i in range(4))


def _txt(v) -> str:
    return as_quad(v).to_text()


# -- commands --------------------------------------------------------------------------------


def cmd_heron(args) -> Outcome:
    out = Outcome()
    rep = hp.verify_heron(args.p, args.r, args.h)
    t = rep.datum
    out.check("chain_values", rep.values_agree, " = ".join(f"{k}:{_txt(v)}" for k, v in rep.values.items()))
    for step in rep.steps:
        out.check(step.name, step.equal and all(ok for _, ok in step.lines), f"{_txt(step.left)} = {_txt(step.right)}")
        for c in step.certificates:
            out.check(f"{step.name}/{c.name}", c.verdict, c.kind)
    out.results = {
        "datum": {"p": t.p, "r": t.r, "h": t.h, "reflected": t.reflected, "a2": t.a2, "b2": t.b2, "c2": t.c2},
        "area": t.area,
        "chain": rep.values,
        "value": rep.value,
        "degenerate_isosceles_right": t.degenerate_isosceles_right,
        "steps": [
            {
                "name": s.name,
                "relation": s.relation,
                "left": s.left,
                "right": s.right,
                "lines": [{"line": label, "ok": ok} for label, ok in s.lines],
                "certificates": [{"kind": c.kind, "name": c.name, "verdict": c.verdict, **c.detail} for c in s.certificates],
            }
            for s in rep.steps
        ],
    }
    if t.degenerate_isosceles_right:
        a4 = as_quad(t.a2 * t.a2)
        out.check("degenerate_4a^4", rep.value == 4 * a4, f"4a^4 = {_txt(4 * a4)}")
    asm = hp.lhs_assembly(t)
    out.figures.append(("heron_lhs_parallelogram2", list(asm.pieces), "parallelogram x parallelogram"))
    out.figures.append(("heron_lhs_rectangle2", list(asm.moved), "rectangle x rectangle"))
    return out


def cmd_cube(args) -> Outcome:
    out = Outcome()
    n = args.n
    d = cd.simplicial_decomposition(n)
    mats = d.matrices
    out.check("count", len(mats) == factorial(n), f"{len(mats)} simplices")
    out.check("distinct_orderings", len({m.ordering() for m in mats}) == len(mats), "")
    vols = d.volumes()
    unit = Fraction(1, factorial(n))
    out.check("volumes", all(v == unit for v in vols), f"each {unit}")
    cert = d.certificate()
    out.check("tiling", cert.verdict, f"sum {_txt(cert.volume_sum)} = {_txt(cert.container_volume)}")
    if cert.disjoint_ok is not None:
        out.check("disjoint", cert.disjoint_ok, "")
    star = n > 5
    wit = d.congruence_witnesses(star=star)
    expected = len(mats) - 1 if star else len(mats) * (len(mats) - 1) // 2
    out.check("congruence_witnesses", len(wit) == expected, f"{len(wit)} {'star' if star else 'pairwise'} witnesses")
    out.results = {"n": n, "count": len(mats), "volume_each": unit}
    if n <= 5:
        out.results["simplices"] = [
            {"ordering": m.ordering().label(), "rows": ["".join(map(str, r)) for r in m.rows]} for m in mats
        ]
    if n == 4:
        out.figures.append(("cube4_simplices", list(d.pieces), "24 ordering simplices"))
        for k, p in enumerate(d.pieces):
            out.figures.append((f"cube4_simplex_{k + 1:02d}", [p], mats[k].ordering().label()))
    return out


def cmd_pyramids(args) -> Outcome:
    out = Outcome()
    n = args.n
    pyrs = cd.pyramidal_decomposition(n)
    out.check("count", len(pyrs) == n, f"{len(pyrs)} pyramids")
    vol = Fraction(1, n)
    out.check("refinement_sizes", all(len(p.orderings) == factorial(n - 1) for p in pyrs), f"{factorial(n - 1)} each")
    out.check("volumes", all(p.volume() == vol for p in pyrs), f"each {vol}")
    out.check("refinement_inside", all(p.refinement_inside() for p in pyrs), "")
    used = [o for p in pyrs for o in p.orderings]
    out.check("partition", len(used) == len(set(used)) == factorial(n), f"{len(used)} simplices")
    out.results = {"n": n, "pyramids": [{"label": p.label, "volume": p.volume(), "simplices": len(p.orderings)} for p in pyrs]}
    if n == 4:
        table = cd.quartering_table()
        out.check("quartering_table", all(sorted(row) == [0, 0, 3, 3] for row in table), str(table))
        out.results["quartering_table"] = table
        for p in pyrs:
            out.figures.append((f"pyramid_{p.label}", p.simplices(), p.label))
    return out


def cmd_quarter(args) -> Outcome:
    out = Outcome()
    e = as_quad(args.edge)
    pieces = cd.quarter_hypercube(e)
    vols = [piece_volume(p) for p in pieces]
    out.check("count", len(pieces) == 4, "4 pieces")
    out.check("volumes", all(v == e**4 / 4 for v in vols), f"each {_txt(e**4 / 4)}")
    cert = certify_tiling(cd.cube4(e), pieces, check_disjoint=True)
    out.check("tiling", cert.verdict, f"sum {_txt(cert.volume_sum)}")
    out.check("disjoint", cert.disjoint_ok, "")
    witnesses = {}
    for i, j in combinations(range(4), 2):
        w = congruent(pieces[i], pieces[j])
        sp = w.as_signed_permutation() if w is not None else None
        witnesses[f"{i + 1}-{j + 1}"] = None if sp is None else {"perm": list(sp[0]), "signs": list(sp[1])}
    out.check("congruence_witnesses", all(v is not None for v in witnesses.values()), "signed permutations")
    six = cd.refine_to_six("DeltaDelta")
    p4 = cd.refine_to_six("P4")
    out.check("shared_with_P4", len(six.shared) == 3, ", ".join(o.label() for o in six.shared))
    c6 = certify_tiling(cd.quarter_hypercube(e)[0], six.simplices(e), check_disjoint=True)
    out.check("six_simplex_refinement", c6.verdict and c6.disjoint_ok, "DeltaDelta")
    pyr4 = next(p for p in cd.pyramidal_decomposition(4) if p.label == "P4")
    out.check("P4_refinement", set(p4.orderings) == set(pyr4.orderings), "P4")
    out.results = {
        "edge": e,
        "labels": list(cd.QUARTER_LABELS),
        "volumes": vols,
        "total": cert.volume_sum,
        "witnesses": witnesses,
        "shared": [o.label() for o in six.shared],
    }
    out.figures.append(("quarter_assembly", pieces, "four Delta x Delta"))
    for k, p in enumerate(pieces):
        out.figures.append((f"quarter_piece_{k + 1}", [p], cd.QUARTER_LABELS[k]))
    return out


def cmd_multinomial(args) -> Outcome:
    out = Outcome()
    k, n = args.k, args.n
    classes = se.multinomial_classes(k, n)
    terms = se.multinomial_expand(k, n)
    out.check("term_count", len(terms) == k**n, f"{len(terms)} lattice points")
    out.check("coefficient_sum", sum(c.coefficient for c in classes) == k**n, f"sum {k**n}")
    out.check(
        "class_sizes",
        all(len(c.addresses) == c.coefficient for c in classes),
        "class size equals multinomial coefficient",
    )
    out.check(
        "permutation_classes",
        all(sorted(a) == sorted(c.addresses[0]) for c in classes for a in c.addresses),
        "addresses in a class are permutations",
    )
    out.results = {"k": k, "n": n, "classes": len(classes)}
    if len(terms) <= 1000:
        out.results["table"] = [
            {"label": c.label(), "coefficient": c.coefficient, "level": c.level, "addresses": [list(a) for a in c.addresses]}
            for c in classes
        ]
    return out


def cmd_heron_expand(args) -> Outcome:
    out = Outcome()
    a, b, c = sqrt_rational(args.a2), sqrt_rational(args.b2), as_quad(args.c)
    res, cert = se.certify_heron_expansion(a, b, c)
    levels = se.group_by_level(se.heron_signed_expansion(a, b, c))
    out.check("term_count", cert.term_count == 81, f"{cert.term_count} signed boxes")
    out.check("net", res.net == se.HERON_NET, res.net.to_text())
    out.check("pairs_cancel", cert.pairs_cancel_ok, f"{len(res.pairs)} pairs")
    out.check("level_local", cert.level_local_ok, "")
    out.check("accounting", cert.accounting_ok, "")
    out.check("max_class_size", res.max_class_size() <= 12, str(res.max_class_size()))
    out.check("value", cert.net_matches_product, _txt(cert.value))
    out.results = {
        "a2": args.a2,
        "b2": args.b2,
        "c": args.c,
        "net": res.net.as_string_map(),
        "value": cert.value,
        "levels": {str(k): [t.label() for t in v] for k, v in levels.items()},
    }
    return out


def cmd_pythag(args) -> Outcome:
    out = Outcome()
    t1, t2 = pd.legs(*args.legs1), pd.legs(*args.legs2)
    for name, t in (("legs1", t1), ("legs2", t2)):
        d = pd.dissect_square(t)
        out.check(f"{name}/dissection", d.verdict, f"{len(d.pieces)} pieces, area {_txt(t.hyp2)}")
    src = pd.product_dissection(t1, t2)
    out.check("piece_count", len(src.pieces) == len(src.first.pieces) * len(src.second.pieces), f"{len(src.pieces)} pieces")
    census = src.census()
    out.check("census", sum(census.values()) == len(src.pieces), ", ".join(f"{k}:{v}" for k, v in census.items()))
    cert = src.certificate(check_disjoint=True)
    out.check("source_tiling", cert.verdict, f"volume {_txt(cert.container_volume)}")
    out.check("source_disjoint", cert.disjoint_ok, "")
    bc = src.box_certificate()
    out.check("box_frame_tiling", bc is not None and bc.verdict, "R_zzww")
    re = pd.reassemble_of(src, check_disjoint=True)
    for name, c in zip(re.target_names, re.certificates):
        out.check(f"target/{name}", c.verdict and bool(c.disjoint_ok), _txt(c.container_volume))
    out.check("translations_only", re.all_translations(), "")
    out.check("pieces_accounted", re.pieces_accounted(), "")
    x2, y2, u2, v2 = t1.x**2, t1.y**2, t2.x**2, t2.y**2
    out.check("identity", t1.hyp2 * t2.hyp2 == x2 * u2 + x2 * v2 + y2 * u2 + y2 * v2, "z^2w^2 = x^2u^2+x^2v^2+y^2u^2+y^2v^2")
    out.results = {
        "legs1": list(args.legs1),
        "legs2": list(args.legs2),
        "pieces": len(src.pieces),
        "census": census,
        "source_volume": cert.container_volume,
        "targets": dict(zip(re.target_names, re.target_volumes())),
    }
    out.figures.append(("pythag_source", list(src.pieces), "hypotenuse squares product"))
    for label, p in zip(src.labels, src.pieces):
        out.figures.append((f"pythag_piece_{label}", [p], label))
    frags = [f for fl in re.fragments for _, f in fl]
    out.figures.append(("pythag_targets", frags, "four leg-square products"))
    return out


def cmd_nicomachus(args) -> Outcome:
    out = Outcome()
    r = cd.nicomachus_check(args.n)
    out.check("nicomachus", r.equal, f"{r.sum_of_cubes} = {r.triangular_squared}")
    out.results = {"n": r.n, "sum_of_cubes": r.sum_of_cubes, "triangular_squared": r.triangular_squared}
    return out


COMMANDS: dict[str, Callable[[Any], Outcome]] = {
    "heron": cmd_heron,
    "cube": cmd_cube,
    "pyramids": cmd_pyramids,
    "quarter": cmd_quarter,
    "multinomial": cmd_multinomial,
    "heron-expand": cmd_heron_expand,
    "pythag": cmd_pythag,
    "nicomachus": cmd_nicomachus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a JSON report")
    common.add_argument("--svg-dir", metavar="DIR", help="write SVG wireframes")
    common.add_argument("--fig-dir", metavar="DIR", help="write PNG wireframes (matplotlib)")
    common.add_argument("--projection", type=_projection, default=DEFAULT_PROJECTION, help="row-major 4x2 rationals")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="heron4d", description="Exact certificates for 4-D dissections behind Heron's formula.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("heron", parents=[common], help="certify the full Heron chain")
    s.add_argument("--p", type=_rational, required=True)
    s.add_argument("--r", type=_rational, required=True)
    s.add_argument("--h", type=_rational, required=True)

    for name, low, text in (("cube", 1, "n! right simplices of the n-cube"), ("pyramids", 2, "pyramidal sets P_n..P_1")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("--n", type=int, required=True, help=f"dimension, {low}..{cd.MAX_N}")

    s = sub.add_parser("quarter", parents=[common], help="four triangle x triangle pieces of the 4-cube")
    s.add_argument("--edge", type=_rational, default=Fraction(1))

    s = sub.add_parser("multinomial", parents=[common], help="lattice classes of (x1+...+xk)^n")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("heron-expand", parents=[common], help="81 signed boxes and their cancellation")
    s.add_argument("--a2", type=_rational, required=True)
    s.add_argument("--b2", type=_rational, required=True)
    s.add_argument("--c", type=_rational, required=True)

    s = sub.add_parser("pythag", parents=[common], help="25-piece product of two leg-pair dissections")
    s.add_argument("--legs1", type=_leg_pair, required=True, metavar="X,Y")
    s.add_argument("--legs2", type=_leg_pair, required=True, metavar="U,V")

    s = sub.add_parser("nicomachus", parents=[common], help="sum of cubes against the squared triangular number")
    s.add_argument("--n", type=int, required=True)
    return parser


def _parameters(args) -> dict[str, Any]:
    skip = {"command", "json", "svg_dir", "fig_dir", "verbose", "projection"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out["projection"] = [list(row) for row in args.projection]
    return out


def _write_figures(outcome: Outcome, args) -> list[str]:
    written = []
    if args.svg_dir:
        from .svg import emit_svg

        for name, pieces, title in outcome.figures:
            written.append(emit_svg(pieces, args.projection, os.path.join(args.svg_dir, f"{name}.svg"), title))
    if args.fig_dir:
        from .figures import render_png

        for name, pieces, title in outcome.figures:
            if name.startswith(("cube4_simplex_", "pythag_piece_")):
                continue
            written.append(render_png(pieces, args.projection, os.path.join(args.fig_dir, f"{name}.png"), title))
    return written


def main(argv: Optional[Sequence[str]] = None, tamper: Iterable[str] = ()) -> int:
    """Run one subcommand; ``tamper`` forces the named checks to fail (for tests)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        outcome = COMMANDS[args.command](args)
    except (DomainError, GeometryError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    forced = set(tamper)
    for c in outcome.checks:
        if c.name in forced:
            c.ok = False
    figures = _write_figures(outcome, args)
    for c in outcome.checks:
        print(c.line())
    if args.verbose:
        for name in figures:
            log.info("figure\t%s", name)
    if args.json:
        doc = ReportDocument.build(["heron4d", *argv], _parameters(args), outcome.checks, outcome.results, figures)
        doc.write(args.json)
    failed = [c.name for c in outcome.checks if not c.ok]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
