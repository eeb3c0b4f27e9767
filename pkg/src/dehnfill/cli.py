"""Command-line front end. Every subcommand prints (or writes) one JSON report.

Exit status: 0 pass, 1 fail, 2 undecided, 64 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__, cartan, coxeter, family, gluing, reflect, vinberg
from .exactnum import (
    TowerElement,
    UndecidedError,
    display,
    enclose,
    evaluate,
    parse_rational,
    to_text,
)

EXIT = {"pass": 0, "fail": 1, "undecided": 2}
EX_USAGE = 64


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    t: str | None = None
    p: int | None = None
    compare: str | None = None
    stage: str | None = None
    k6_inner: str | None = None
    k6_outer: str | None = None
    matrix_file: str | None = None


@dataclass
class Check:
    name: str
    verdict: str
    claim: str
    witnesses: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "claim": self.claim, "witnesses": self.witnesses}


class Report:
    def __init__(self, config: RunConfig):
        self.config = config
        self.checks: list[Check] = []

    def add(self, name: str, ok, claim: str, witnesses=None, seconds: float = 0.0) -> Check:
        verdict = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        c = Check(name, verdict, claim, witnesses or {}, seconds)
        self.checks.append(c)
        return c

    def timed(self, name: str, claim: str, fn):
        """Run fn() -> (ok, witnesses); undecided on UndecidedError."""
        start = time.perf_counter()
        try:
            ok, wit = fn()
        except UndecidedError as exc:
            ok, wit = "undecided", {"reason": str(exc)}
        return self.add(name, ok, claim, wit, time.perf_counter() - start)

    @property
    def verdict(self) -> str:
        verdicts = {c.verdict for c in self.checks}
        if "fail" in verdicts:
            return "fail"
        if "undecided" in verdicts:
            return "undecided"
        return "pass"

    def to_json(self) -> dict:
        return {
            "tool": "dehnfill",
            "version": __version__,
            "config": {k: v for k, v in asdict(self.config).items() if v is not None},
            "checks": [c.to_json() for c in self.checks],
            "verdict": self.verdict,
        }

    def timings(self) -> dict:
        return {c.name: round(c.seconds, 6) for c in self.checks}

    def dump(self, with_timings: bool = True) -> str:
        doc = self.to_json()
        if with_timings:
            doc["timings"] = self.timings()
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def exact_and_display(x) -> dict:
    return {"exact": to_text(x), "display_only": display(x)}


def parse_t(text: str):
    if text.strip().lower() in ("t3", "t_3"):
        return family.t_three()
    try:
        t = parse_rational(text)
    except ValueError as exc:
        raise UsageError(f"--t: {exc}") from None
    try:
        family.point(t)
    except family.DomainError as exc:
        raise UsageError(f"--t: {exc}") from None
    return t


# -- stages ---------------------------------------------------------------------


def run_family(rep: Report) -> None:
    t3 = family.t_three()
    f = family.coefficients().f

    def t3_check():
        val = evaluate(f, t3)
        iv = enclose(t3, Fraction(1, 10 ** 4))
        inside = Fraction(421, 10000) < iv.lo and iv.hi < Fraction(423, 10000)
        return val == Fraction(1, 4) and inside, {
            "t3": exact_and_display(t3),
            "f(t3)": to_text(val),
            "enclosure_width_1e-4": iv.to_json(),
        }

    rep.timed("t3_exact", "f(t3) = 1/4 exactly; t3 lies in (0.0421, 0.0423)", t3_check)
    for name, claim, fn in (
        ("rank_lemma", "C_t has rank 5 and negative type on [t3, 1]", family.verify_rank_lemma),
        ("monotone_f", "f' matches its factored form and f increases from 1/4 to 1", family.verify_monotone_f),
        ("positive_coefficients", "f, h, g_p, gbar_p are positive on [t3, 1]", family.verify_positive_coefficients),
    ):
        rep.timed(name, claim, lambda fn=fn: _cert(fn()))
    rep.timed(
        "rotation_symmetry",
        "the order-5 shift maps C_t to a diagonally equivalent matrix",
        lambda: _cert(family.verify_symmetry(None)),
    )


def _cert(c):
    if c.verdict == "undecided":
        raise UndecidedError(json.dumps(c.witnesses, sort_keys=True, default=str))
    return c.passed, c.witnesses


def run_poset(rep: Report, t, compare: str | None) -> None:
    def build():
        A = family.cartan_at(t)
        P = vinberg.face_poset(A, 4)
        wit = {"t": to_text(t), "f_vector": list(P.f_vector()), "poset": P.to_json()}
        ok = True
        if compare:
            iso, bij = vinberg.poset_isomorphic(P, vinberg.reference_poset(compare))
            wit["compare"] = compare
            wit["isomorphic"] = iso
            if bij:
                wit["facet_bijection"] = {A.labels[a]: vinberg.REFERENCE_LABELS[b] for a, b in sorted(bij.items())}
            ok = iso
        return ok, wit

    rep.timed("face_poset", f"face poset of C_t{' matches the ' + compare + ' 4-simplex' if compare else ''}", build)


def run_signature(rep: Report) -> None:
    def sig():
        S = cartan.symmetrize(family.cartan_at(1))
        s = cartan.signature(S.S)
        return s == (4, 1, 5), {"signature": list(s), "delta": [to_text(x) for x in S.delta]}

    rep.timed("signature_at_1", "the symmetrized C_1 has inertia (4, 1, 5)", sig)


def run_coxeter(rep: Report, p: int) -> None:
    def relhyp():
        W = coxeter.w_p(p)
        T = coxeter.t_collection(p)
        res = coxeter.caprace_check(W, T)
        empty = coxeter.caprace_check(W, [])
        size_ok = len(T) == (20 if p == 3 else 10)
        return res.ok and size_ok and empty.condition == 1, {
            "p": p,
            "collection_size": len(T),
            "collection": [sorted(W.generators[i] for i in t) for t in sorted(T, key=sorted)],
            "result": res.to_json(),
            "empty_collection": empty.to_json(),
        }

    rep.timed(f"relative_hyperbolicity_p{p}", f"W_{p} is relatively hyperbolic w.r.t. the collection T_{p}", relhyp)


def run_orbifold(rep: Report, p: int | None = None) -> None:
    def chi():
        B = vinberg.reference_poset("bitruncated")
        R = vinberg.reference_poset("rectified")
        ps = [p] if p else list(range(3, 13))
        bit = {str(q): coxeter.orbifold_euler(B, coxeter.w_p(q)) for q in ps}
        rect = coxeter.orbifold_euler(R, coxeter.coxeter_from_cartan(family.cartan_at(1)))
        ok = rect == Fraction(1, 6) and all(v == Fraction(1, 6) for v in bit.values())
        return ok, {"rectified_at_1": to_text(rect), "bitruncated": {k: to_text(v) for k, v in bit.items()}}

    rep.timed("orbifold_euler", "orbifold Euler characteristic 1/6, independent of p", chi)


def run_reflect(rep: Report, t, p: int | None = None) -> None:
    A = family.cartan_at(t)
    holder = {}

    def relations():
        sys_ = reflect.realize(A)
        holder["sys"] = sys_
        r = reflect.verify_relations(sys_)
        return r.passed, r.to_json()

    rep.timed("reflection_relations", "reflections satisfy the relations read off C_t", relations)
    if "sys" not in holder:
        return

    def meridian():
        m = reflect.meridian_holonomy(holder["sys"], 0, 1)
        wit = m.to_json()
        wit["cos_6alpha_display_only"] = display(m.cos6alpha)
        ok = m.charpoly_matches
        exact_p3 = isinstance(t, TowerElement) or evaluate(family.coefficients().f, t) == Fraction(1, 4)
        if exact_p3:
            ok = ok and m.is_identity
        return ok, wit

    claim = "meridian (s_1' s_2')^3 is the identity" if isinstance(t, TowerElement) else \
        "meridian (s_1' s_2')^3 is a rotation by 6 alpha"
    rep.timed("meridian_holonomy", claim, meridian)


def load_k6(path: str | None):
    if path is None:
        return gluing.default_k6()
    try:
        return gluing.parse_k6_file(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except gluing.ColoringError as exc:
        raise UsageError(f"{path}: {exc}") from None


def run_complex(rep: Report, stage: str, inner, outer, p: int = 3) -> None:
    def k6():
        cyc = {f"{i},{j}": gluing.pair_union_cycles(inner, i, j) for i in range(1, 6) for j in range(i + 1, 6)}
        return all(v == [6] for v in cyc.values()), {"edges": [list(e) for e in inner.edges], "cycles": cyc}

    rep.timed("k6_perfect", "every two label classes of K6 form one 6-cycle", k6)
    if stage == "block":
        def block():
            B = gluing.build_block(inner)
            comps = gluing.boundary_components(B)
            labels = [sorted({s for _, s in c}) for c in comps]
            links = gluing.vertex_link_check(B, allow_boundary=True)
            ok = B.n_cells == 6 and len(B.rules) == 15 and len(comps) == 5 and links.passed
            return ok, {
                "cells": B.n_cells,
                "glued_pairs": len(B.rules),
                "boundary_facets": len(B.unglued()),
                "boundary_components": len(comps),
                "component_sizes": [len(c) for c in comps],
                "component_primed_labels": [[f"{s + 1}'" for s in lab] for lab in labels],
                "euler": gluing.euler_characteristic(B),
                "orientable": B.is_orientable(),
                "links": links.to_json(),
            }

        rep.timed("block", "the block has 6 cells and 5 boundary components", block)
        return
    Xp = gluing.build_xprime(outer, inner)

    def xprime():
        chi = gluing.euler_characteristic(Xp)
        sig = gluing.sigma_analysis(Xp)
        ok = (
            Xp.n_cells == 36 and Xp.is_closed() and not Xp.is_orientable() and chi == 6
            and len(sig) == 10 and all(s.classification == "Klein bottle" for s in sig)
            and gluing.covering_consistency(Xp, Fraction(1, 6), 36)
        )
        return ok, {
            "cells": Xp.n_cells,
            "closed": Xp.is_closed(),
            "orientable": Xp.is_orientable(),
            "euler": chi,
            "face_classes_by_dim": Xp.counts_by_dim(),
            "sigma": [s.to_json() for s in sig],
        }

    rep.timed("xprime", "X' is closed, non-orientable, chi = 6, with 10 Klein bottles", xprime)
    if stage == "xprime":
        return
    X = gluing.orientation_double_cover(Xp)

    def x():
        chi = gluing.euler_characteristic(X)
        ok = (
            X.n_cells == 72 and X.is_connected() and X.is_orientable() and chi == 12
            and gluing.covering_consistency(X, Fraction(1, 6), 72)
        )
        return ok, {
            "cells": X.n_cells,
            "connected": X.is_connected(),
            "orientable": X.is_orientable(),
            "euler": chi,
            "face_classes_by_dim": X.counts_by_dim(),
            "covering": {"degree": 72, "chi_orb": "1/6", "consistent": gluing.covering_consistency(X, Fraction(1, 6), 72)},
            "notes": X.notes,
        }

    rep.timed("x", "X has 72 cells, is orientable and chi(X) = 12 = 72/6", x)

    def surfaces():
        sig = gluing.sigma_analysis(X)
        tp = gluing.tprime_analysis(X)
        ok = len(sig) == 10 and len(tp) == 10 and all(s.classification == "torus" for s in sig + tp)
        return ok, {"sigma": [s.to_json() for s in sig], "tprime": [s.to_json() for s in tp]}

    rep.timed("tori", "10 filling-ridge tori and 10 unprimed-ridge tori in X", surfaces)

    def ridges():
        angles = gluing.angle_map(family.cartan_at(family.t_three()))
        recs = gluing.ridge_report(X, angles)
        expected = {"filling": 6, "unprimed": 6, "mixed": 4}
        summary = {}
        ok = True
        for r in recs:
            s = summary.setdefault(r.kind, {"classes": 0, "incidences": set()})
            s["classes"] += 1
            s["incidences"].add(r.incidence)
            ok = ok and r.incidence == expected[r.kind]
            if r.kind != "filling":
                ok = ok and r.angle_sum_over_pi == 2
        # filling ridges: dihedral angle pi/p, cone angle 6 pi/p
        cone = 6 * Fraction(1, p)
        out = {
            k: {"classes": v["classes"], "incidence": sorted(v["incidences"])} for k, v in summary.items()
        }
        out["filling"]["cone_angle_over_pi"] = to_text(cone)
        out["unprimed"]["angle_sum_over_pi"] = "2"
        out["mixed"]["angle_sum_over_pi"] = "2"
        if p == 3:
            ok = ok and cone == 2
        return ok, out

    rep.timed("ridge_angles", "ridge incidences 6 / 6 / 4, angle sums 2 pi off the filling locus", ridges)

    def links():
        r = gluing.vertex_link_check(X)
        return r.passed and r.with_boundary == 0, r.to_json()

    rep.timed("vertex_links", "every vertex link of X is a closed 3-pseudomanifold", links)


def run_report_all(rep: Report, p: int) -> None:
    pt = family.solve_t_for_p(p)
    t = pt.representative()
    rep.add("parameter", True, f"the t with f(t) = cos^2(pi/{p})", {
        "point": pt.to_json(),
        "representative": to_text(t),
        "representative_display_only": display(t),
        "angles": family.angle_dictionary(p=p).to_json(),
    })
    run_family(rep)
    run_poset(rep, t, "bitruncated")
    rep.checks[-1].name = "face_poset_at_t_p"
    rep.checks[-1].witnesses.pop("poset", None)
    run_poset(rep, Fraction(1), "rectified")
    rep.checks[-1].name = "face_poset_at_1"
    rep.checks[-1].witnesses.pop("poset", None)
    run_signature(rep)
    run_coxeter(rep, p)
    run_orbifold(rep)
    run_reflect(rep, t, p)
    run_complex(rep, "x", gluing.default_k6(), gluing.default_k6(), p)


# -- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dehnfill", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--no-timings", action="store_true", help="omit the timings block")
    sub = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    fam = sub.add_parser("family").add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = fam.add_parser("verify")
    v.add_argument("--out")

    car = sub.add_parser("cartan").add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = car.add_parser("classify")
    c.add_argument("file")
    c.add_argument("--out")

    pos = sub.add_parser("poset").add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = pos.add_parser("build")
    b.add_argument("--t", required=True)
    b.add_argument("--compare", choices=["rectified", "bitruncated", "truncated"])
    b.add_argument("--out")

    cox = sub.add_parser("coxeter").add_subparsers(dest="action", required=True, parser_class=_Parser)
    r = cox.add_parser("relhyp")
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--out")

    ref = sub.add_parser("reflect").add_subparsers(dest="action", required=True, parser_class=_Parser)
    rv = ref.add_parser("verify")
    rv.add_argument("--t", required=True)
    rv.add_argument("--out")

    cpx = sub.add_parser("complex").add_subparsers(dest="action", required=True, parser_class=_Parser)
    cb = cpx.add_parser("build")
    cb.add_argument("--stage", choices=["block", "xprime", "x"], required=True)
    cb.add_argument("--k6")
    cb.add_argument("--k6-outer")
    cb.add_argument("--out")

    rp = sub.add_parser("report").add_subparsers(dest="action", required=True, parser_class=_Parser)
    ra = rp.add_parser("all")
    ra.add_argument("--p", type=int, required=True)
    ra.add_argument("--out", required=True)
    return ap


def execute(args) -> Report:
    g = args.group
    if g == "family":
        rep = Report(RunConfig("family verify"))
        run_family(rep)
    elif g == "cartan":
        rep = Report(RunConfig("cartan classify", matrix_file=args.file))
        try:
            A = cartan.parse_matrix_file(Path(args.file).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
        except cartan.MatrixParseError as exc:
            raise UsageError(f"{args.file}: {exc}") from None

        def classify():
            if not A.is_pointwise:
                return True, {"components": [list(map(A.labels.__getitem__, c)) for c in cartan.components(A)],
                              "rank": cartan.rank(A), "note": "type needs a point"}
            comps = cartan.component_types(A)
            wit = {
                "components": [{"indices": [A.labels[i] for i in c], **v.to_json()} for c, v in comps],
                "rank": cartan.rank(A),
            }
            if len(comps) == 1:
                wit["type"] = comps[0][1].kind.value
            return True, wit

        rep.timed("classify", "Cartan type of each component", classify)
    elif g == "poset":
        t = parse_t(args.t)
        rep = Report(RunConfig("poset build", t=args.t, compare=args.compare))
        run_poset(rep, t, args.compare)
    elif g == "coxeter":
        if args.p < 3:
            raise UsageError("--p must be at least 3")
        rep = Report(RunConfig("coxeter relhyp", p=args.p))
        run_coxeter(rep, args.p)
    elif g == "reflect":
        t = parse_t(args.t)
        rep = Report(RunConfig("reflect verify", t=args.t))
        run_reflect(rep, t)
    elif g == "complex":
        inner = load_k6(args.k6)
        outer = load_k6(args.k6_outer) if args.k6_outer else inner
        rep = Report(RunConfig("complex build", stage=args.stage, k6_inner=args.k6, k6_outer=args.k6_outer))
        run_complex(rep, args.stage, inner, outer)
    elif g == "report":
        if args.p < 3:
            raise UsageError("--p must be at least 3")
        rep = Report(RunConfig("report all", p=args.p))
        run_report_all(rep, args.p)
    else:  # pragma: no cover - argparse enforces the choices
        raise UsageError(f"unknown command {g}")
    return rep


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        rep = execute(args)
    except UsageError as exc:
        print(f"dehnfill: error: {exc}", file=sys.stderr)
        return EX_USAGE
    text = rep.dump(with_timings=not args.no_timings)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
        print(f"{rep.verdict}: report written to {out}")
    else:
        sys.stdout.write(text)
    return EXIT[rep.verdict]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
