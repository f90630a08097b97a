"""Command-line front end.

Exit codes: 0 when the computation finished (negative verdicts included),
1 for input errors, 2 when a bound was exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import __version__
from .abelian import FgAbGroup, MatrixTooLarge, _subscript
from .dmod import derived_colim, derived_lim, nerve_homology
from .fincat import BoundExceeded, Functor, pushout, under_category
from .formats import InputError, Loader, corpus_files, dumps
from .mv import (
    CERTIFIED,
    counterexample_repro,
    covering_check,
    local_covering_check,
    mv_predict,
    mv_verify,
    mv_verify_lim,
    theorem1_hypotheses,
)

EXIT_OK, EXIT_INPUT, EXIT_BOUND = 0, 1, 2


def _header(args, command: str) -> dict:
    return {
        "tool": {"name": "dcolim", "version": __version__},
        "command": command,
        "max_degree": args.max_degree,
        "bounds": {
            "word_bound": args.word_bound,
            "size_bound": args.size_bound,
            "max_matrix_dim": os.environ.get("DCOLIM_MAX_MATRIX_DIM"),
        },
    }


def _graded(gs: Sequence[FgAbGroup]) -> list[str]:
    return [str(G) for G in gs]


def _graded_text(gs: Sequence[FgAbGroup]) -> str:
    return "(" + ", ".join(str(G) for G in gs) + ")"


# --- commands --------------------------------------------------------------------

def cmd_validate(args, L: Loader):
    data = L._obj(args.path, None, "input")[0]
    if "categories" in data:
        sq, legs = L.square(args.path, require_corner=False)
        kind, summary = "square", {"corner": sq is not None}
        if sq is not None:
            summary["C"] = [len(sq.C.objects), len(sq.C.morphisms)]
    elif "on_objects" in data:
        F = L.functor(args.path)
        kind, summary = "functor", {"domain": [len(F.domain.objects), len(F.domain.morphisms)],
                                    "codomain": [len(F.codomain.objects), len(F.codomain.morphisms)]}
    elif "groups" in data or "const" in data:
        M = L.diagram(args.path)
        kind, summary = "diagram", {"variance": M.variance, "objects": len(M.base.objects)}
    else:
        C = L.category(args.path)
        kind, summary = "category", {"objects": len(C.objects), "morphisms": len(C.morphisms),
                                     "groupoid": C.is_groupoid()}
    rep = {"kind": kind, "valid": True, **summary}
    text = f"{args.path}: valid {kind}"
    return rep, text


def cmd_homology(args, L: Loader):
    C = L.category(args.category)
    hs = nerve_homology(C, args.max_degree)
    rep = {"category": C.name, "nerve_homology": _graded(hs)}
    text = f"H_n(N {C.name or 'C'}; ℤ), n = 0..{args.max_degree}: {_graded_text(hs)}"
    return rep, text


def cmd_dcolim(args, L: Loader):
    C = L.category(args.category)
    M = L.diagram(args.diagram, category=C)
    hs = derived_colim(M, args.max_degree)
    rep = {"category": C.name, "variance": M.variance, "derived_colim": _graded(hs)}
    return rep, f"colim_n, n = 0..{args.max_degree}: {_graded_text(hs)}"


def cmd_dlim(args, L: Loader):
    C = L.category(args.category)
    M = L.diagram(args.diagram, category=C, variance=None if not args.diagram.startswith("const") else "right")
    hs = derived_lim(M, args.max_degree)
    rep = {"category": C.name, "variance": M.variance, "derived_lim": _graded(hs)}
    return rep, f"lim^n, n = 0..{args.max_degree}: {_graded_text(hs)}"


def cmd_under(args, L: Loader):
    data = L._obj(args.source, None, "input")[0]
    if "on_objects" in data:
        F = L.functor(args.source)
    else:
        C = L.category(args.source)
        F = Functor.identity(C)
    if args.object not in F.codomain.obj_index:
        raise InputError(f"unknown object {args.object!r}")
    U = under_category(args.object, F)
    cat = U.category
    rep = {"object": args.object, "category": cat.to_dict(),
           "objects": {k: {"object": d, "arrow": f} for k, (d, f) in U.object_data.items()}}
    lines = [f"{args.object}/F: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms"]
    for k, (d, f) in U.object_data.items():
        lines.append(f"  {k}: {f}: {args.object} → F({d})")
    return rep, "\n".join(lines)


def cmd_pushout(args, L: Loader):
    F1 = L.functor(args.f1, name="F1")
    F2 = L.functor(args.f2, name="F2")
    res = pushout(F1, F2, word_bound=args.word_bound, size_bound=args.size_bound)
    C = res.category
    rep = {"category": C.to_dict(), "certificate": res.certificate,
           "I1": res.I1.to_dict("C1", "C"), "I2": res.I2.to_dict("C2", "C")}
    text = (f"pushout: {len(C.objects)} objects, {len(C.morphisms)} morphisms\n"
            f"certificate: stabilized at word length {res.certificate['word_length']}, "
            f"{res.certificate['words_enumerated']} words enumerated")
    return rep, text


def _local_text(v) -> list[str]:
    lines = [f"{v.functor}: {v.status}"]
    for r in v.records:
        cert = r.certificate or "homology-only"
        red = ", ".join(f"H{_subscript(n)} = {G}" for n, G in enumerate(r.reduced_homology, start=1))
        lines.append(f"  {r.object}/{v.functor}: {r.objects} objects, {r.components} components; {cert}; {red}; π₁ {r.pi1}")
    w = v.witness
    if w:
        lines.append(f"  witness: H{_subscript(w[1])}(N({w[0]}/{v.functor})) = {w[2]}")
    return lines


def cmd_local_cover(args, L: Loader):
    F = L.functor(args.functor)
    v = local_covering_check(F, args.max_degree)
    return v.to_dict(), "\n".join(_local_text(v))


def cmd_covering(args, L: Loader):
    F = L.functor(args.functor)
    v = covering_check(F, args.max_degree)
    lines = _local_text(v.local)
    if v.covering is None:
        lines.append("covering: not applicable (local covering check failed)")
    else:
        lines.append(f"covering: {'yes' if v.covering else 'no'}")
        for f in v.failures:
            lines.append(f"  arrow {f['arrow']}: π₀ map {f['source_components']} → {f['target_components']} "
                         f"components is not bijective")
    return v.to_dict(), "\n".join(lines)


def _hyp_text(h) -> list[str]:
    inj = ", ".join(f"{k} {'yes' if v else 'no'}" for k, v in h.injective.items())
    verdict = f"hold ({h.strength})" if h.holds else f"FAILED ({', '.join(h.failing)})"
    lines = [f"hypotheses: {verdict}", f"  injective on objects: {inj}"]
    for k, v in h.local.items():
        line = f"  {k} local covering: {v.status}"
        w = v.witness
        if w:
            line += f", witness H{_subscript(w[1])}(N({w[0]}/{k})) = {w[2]}"
        elif v.status == CERTIFIED:
            kinds = sorted({r.certificate for r in v.records if r.certificate})
            line += f" ({', '.join(kinds) or 'no objects'})"
        lines.append(line)
    return lines


def _mv_text(rep) -> list[str]:
    names = {"C0": "C₀", "C1": "C₁", "C2": "C₂", "C": "C"}
    kind = "colim_n" if rep.side == "colim" else "lim^n"
    lines = [f"{kind} through degree {rep.degree}:"]
    for k in ("C0", "C1", "C2", "C"):
        lines.append(f"  {names[k]}: {_graded_text(rep.groups[k])}")
    if rep.quasi_isomorphism:
        lines.append("cone quasi-isomorphism: yes")
    else:
        bad = ", ".join(f"H{_subscript(n)} = {G}" for n, G in sorted(rep.cone_homology.items()))
        lines.append(f"cone quasi-isomorphism: FAILED ({bad}); connecting maps only where forced")
    if rep.exact:
        lines.append("exactness: exact at every node")
    else:
        for n in rep.failures:
            lines.append(f"exactness: FAILED at node {n.label}, defect {n.defect}")
        for n in rep.undetermined:
            lines.append(f"exactness: undetermined at node {n.label}")
    return lines


def cmd_hypotheses(args, L: Loader):
    sq, legs = L.square(args.square, require_corner=True, word_bound=args.word_bound, size_bound=args.size_bound)
    h = theorem1_hypotheses(sq, args.max_degree)
    return h.to_dict(), "\n".join(_hyp_text(h))


def cmd_mv_verify(args, L: Loader):
    sq, legs = L.square(args.square, require_corner=True, word_bound=args.word_bound, size_bound=args.size_bound)
    if args.side == "colim":
        M = L.diagram(args.diagram, category=sq.C)
        rep = mv_verify(sq, M, args.max_degree)
    else:
        M = L.diagram(args.diagram, category=sq.C, variance="right" if args.diagram.startswith("const") else None)
        rep = mv_verify_lim(sq, M, args.max_degree)
    h = theorem1_hypotheses(sq, args.max_degree)
    out = {"report": rep.to_dict(), "hypotheses": h.to_dict()}
    if "certificate" in legs:
        out["pushout_certificate"] = legs["certificate"]
    return out, "\n".join(_mv_text(rep) + _hyp_text(h))


def cmd_mv_predict(args, L: Loader):
    _, legs = L.square(args.square, require_corner=False)
    F1, F2 = legs["F1"], legs["F2"]
    variance = "left" if args.side == "colim" else "right"
    M1 = L.diagram(args.module1, category=F1.codomain, variance=variance if args.module1.startswith("const") else None)
    M2 = L.diagram(args.module2, category=F2.codomain, variance=variance if args.module2.startswith("const") else None)
    hs = mv_predict(F1, F2, M1, M2, args.max_degree, side=args.side)
    kind = "colim_n" if args.side == "colim" else "lim^n"
    rep = {"side": args.side, "prediction": _graded(hs)}
    return rep, f"predicted {kind} of the pushout, n = 0..{args.max_degree}: {_graded_text(hs)}"


def cmd_counterexample(args, L: Loader):
    r = counterexample_repro(args.variant, args.max_degree)
    lines = [f"counter-example square, C₀ = {args.variant}",
             f"pushout C: {r.pushout_size[0]} objects, {r.pushout_size[1]} morphisms"]
    lines += _mv_text(r.colim)
    lines += _hyp_text(r.hypotheses)
    lim_fail = [f"{n.label} (defect {n.defect})" for n in r.lim.failures]
    lines.append("limit sequence: " + ("exact" if r.lim.exact else "FAILED at " + ", ".join(lim_fail)))
    missed = [k for k, ok in r.expectations.items() if not ok]
    lines.append("expectations: all met" if not missed else "expectations NOT met: " + "; ".join(missed))
    return r.to_dict(), "\n".join(lines)


def cmd_corpus(args, L: Loader):
    names = corpus_files()
    return {"corpus": names}, "\n".join("@" + n for n in names)


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=3, help="degree budget N (default 3)")
    common.add_argument("--word-bound", type=int, default=8, help="pushout word length bound (default 8)")
    common.add_argument("--size-bound", type=int, default=10000, help="pushout size bound (default 10000)")
    common.add_argument("--format", choices=["text", "json"], default="text")

    p = argparse.ArgumentParser(prog="dcolim", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"dcolim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "validate a category, functor, diagram or square file").add_argument("path")
    add("homology", cmd_homology, "integral homology of the nerve of a category").add_argument("category")
    for name, func, what in (("dcolim", cmd_dcolim, "derived colimits"), ("dlim", cmd_dlim, "derived limits")):
        sp = add(name, func, what + " of a diagram")
        sp.add_argument("category")
        sp.add_argument("diagram", help="diagram file, or const / const:Z / const:Z/k")
    sp = add("under", cmd_under, "under category c/F (or c/C for a category file)")
    sp.add_argument("source")
    sp.add_argument("object")
    sp = add("pushout", cmd_pushout, "pushout of two functors with a common domain")
    sp.add_argument("f1")
    sp.add_argument("f2")
    add("local-cover", cmd_local_cover, "local covering check").add_argument("functor")
    add("covering", cmd_covering, "covering check (π₀ level)").add_argument("functor")
    add("hypotheses", cmd_hypotheses, "check the Mayer–Vietoris hypotheses of a square").add_argument("square")
    sp = add("mv-verify", cmd_mv_verify, "assemble and verify the Mayer–Vietoris sequence of a square")
    sp.add_argument("square")
    sp.add_argument("diagram", nargs="?", default="const")
    sp.add_argument("--side", choices=["colim", "lim"], default="colim")
    sp = add("mv-predict", cmd_mv_predict, "homotopy pushout prediction from the legs of a square")
    sp.add_argument("square")
    sp.add_argument("--module1", default="const", help="diagram over C1 (default const)")
    sp.add_argument("--module2", default="const", help="diagram over C2 (default const)")
    sp.add_argument("--side", choices=["colim", "lim"], default="colim")
    sp = add("counterexample", cmd_counterexample, "reproduce the counter-example square")
    sp.add_argument("--variant", choices=["Z/2", "Z/3", "chain"], default="Z/2")
    add("corpus", cmd_corpus, "list the bundled example files")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    L = Loader()
    try:
        rep, text = args.func(args, L)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BoundExceeded as e:
        if args.format == "json":
            out = _header(args, args.command)
            out["bound_exceeded"] = {"message": str(e), "word_length": e.word_length,
                                     "words": e.words, "classes": e.classes}
            print(dumps(out))
        print(f"bound exceeded: {e}", file=sys.stderr)
        return EXIT_BOUND
    except MatrixTooLarge as e:
        print(f"bound exceeded: {e}", file=sys.stderr)
        return EXIT_BOUND
    if args.format == "json":
        out = _header(args, args.command)
        out["result"] = rep
        print(dumps(out))
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
