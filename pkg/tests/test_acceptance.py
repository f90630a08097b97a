"""The nine acceptance criteria; each records a PASS/FAIL line printed at the end of the run."""

import json
import random

import pytest

from randcat import (
    random_category,
    random_functor_into,
    random_group_functor,
    random_left_module,
    random_right_module,
    random_square,
    rngs,
)

from dcolim.abelian import IntMatrix, MatrixTooLarge, smith_normal_form
from dcolim.chains import cone
from dcolim.cli import main
from dcolim.dmod import (
    bar_complex,
    cobar_complex,
    const_diagram,
    derived_colim,
    derived_lim,
    left_kan,
    nerve_complex,
    nerve_homology,
    restrict,
    tensor_over_category,
    under_complex,
)
from dcolim.fincat import BoundExceeded, Functor, cat_isomorphic, induced_under_functor, pushout, under_category
from dcolim.formats import Loader, corpus_dir, corpus_files, load_json
from dcolim.mv import (
    counterexample_repro,
    counterexample_square,
    homotopy_pushout_complex,
    mv_predict,
    mv_verify,
    theorem1_hypotheses,
)

Z, ZERO, Z2, Z2Z2 = (1, ()), (0, ()), (0, (2,)), (0, (2, 2))
POINT = [Z, ZERO, ZERO, ZERO]


def inv(groups):
    return [g.invariants for g in groups]


def fmt(groups):
    return "(" + ", ".join(str(g) for g in groups) + ")"


def corpus_categories():
    L = Loader()
    out = []
    for name in corpus_files():
        data = load_json(corpus_dir() / f"{name}.json")
        if "objects" in data and "compose" in data:
            out.append(L.category("@" + name))
    return out


def test_criterion_1_counterexample(criterion, capsys):
    rep = counterexample_repro("Z/2", 3)
    colim = rep.colim
    pieces = all(inv(colim.groups[k]) == POINT for k in ("C1", "C2", "C"))
    criterion(1, "C1, C2, C have point homology", pieces)
    c0 = colim.groups["C0"][1].invariants == Z2
    criterion(1, "colim₁ over C₀ is ℤ/2", c0, str(colim.groups["C0"][1]))
    node = colim.node("C0", 1)
    fails = (not colim.exact and [n.label for n in colim.failures] == [node.label]
             and node.defect.invariants == Z2)
    criterion(1, "only failing node is colim₁^{C₀} with defect ℤ/2", fails,
              ", ".join(f"{n.label}: {n.defect}" for n in colim.failures))
    w = rep.hypotheses.local["I0"].witness
    hyp = rep.hypotheses.failing == ["I0"] and w is not None and (w[0], w[1], w[2].invariants) == ("0", 1, Z2)
    criterion(1, "I₀ fails with H₁(N(0/I₀)) = ℤ/2", hyp)
    main(["counterexample"])
    text = capsys.readouterr().out
    cli = "exactness: FAILED at node colim₁^{C₀}, defect ℤ/2" in text
    criterion(1, "CLI report", cli)
    assert pieces and c0 and fails and hyp and cli


def test_criterion_2_positive_instances(criterion):
    L = Loader()
    span_sq, _ = L.square("@span_square")
    h = theorem1_hypotheses(span_sq, 3)
    hyp = h.holds and h.strength == "structural"
    criterion(2, "span hypotheses structural", hyp, h.strength)
    rep = mv_verify(span_sq, const_diagram(span_sq.C), 3)
    exact = rep.exact and not rep.undetermined and all(n.status == "exact" for n in rep.nodes)
    criterion(2, "span sequence exact through degree 3", exact)
    sq, _ = L.square("@trivial_z2_square")
    rep2 = mv_verify(sq, const_diagram(sq.C), 3)
    groups = inv(rep2.groups["C"]) == [Z, Z2, ZERO, Z2]
    criterion(2, "trivial→ℤ/2 square reproduces (ℤ, ℤ/2, 0, ℤ/2) exactly", groups and rep2.exact,
              fmt(rep2.groups["C"]))
    assert hyp and exact and groups and rep2.exact


def test_criterion_3_two_paths(criterion):
    cats = corpus_categories()
    for r in rngs(301, 70):
        cats.append(random_category(r, max_objects=5, max_morphisms=20))
    distinct = {json.dumps(C.to_dict(), sort_keys=True): C for C in cats}
    mismatches = []
    for C in distinct.values():
        assert len(C.objects) <= 5 and len(C.morphisms) <= 20
        a = inv(nerve_homology(C, 3))
        b = inv(derived_colim(const_diagram(C), 3))
        if a != b:
            mismatches.append((C, a, b))
    ok = len(distinct) >= 50 and not mismatches
    criterion(3, "nerve vs bar on distinct categories", ok, f"{len(distinct)} categories, {len(mismatches)} mismatches")
    assert ok


def test_criterion_4_lemma_one(criterion):
    count, bad = 0, []
    for r in rngs(401, 120):
        if r.random() < 0.2:
            F = random_group_functor(r)
            C = F.codomain
        else:
            C = random_category(r, max_objects=4, max_morphisms=12)
            F = random_functor_into(r, C)
        L = random_right_module(r, F.domain)
        M = random_left_module(r, C)
        a = tensor_over_category(left_kan(L, F), M)
        b = tensor_over_category(L, restrict(M, F))
        count += 1
        if a.invariants != b.invariants:
            bad.append((C, F, a, b))
    ok = count >= 100 and not bad
    criterion(4, "F_!L ⊗ M ≅ L ⊗ F*M", ok, f"{count} instances, {len(bad)} mismatches")
    assert ok


def test_criterion_5_lemma_two(criterion):
    count, skipped, bad = 0, 0, []
    for r in rngs(501, 70):
        C = random_category(r, max_objects=3, max_morphisms=8)
        F = random_functor_into(r, C)
        M = random_left_module(r, C)
        try:
            a = inv(under_complex(F, M, 3))
        except MatrixTooLarge:
            skipped += 1
            continue
        b = inv(derived_colim(restrict(M, F), 3))
        count += 1
        if a != b:
            bad.append((C, F, a, b))
    ok = count >= 50 and not bad
    criterion(5, "H(ℤN(-/F) ⊗_C M) = colim(D, F*M) in degrees ≤ 3", ok,
              f"{count} instances, {len(bad)} mismatches, {skipped} over the matrix guard")
    assert ok


def under_pushout_matches(sq):
    for c in sq.C.objects:
        U0 = under_category(c, sq.I0)
        U1, U2 = under_category(c, sq.I1), under_category(c, sq.I2)
        G1 = induced_under_functor(c, sq.F1, sq.I1, source=U0, target=U1)
        G2 = induced_under_functor(c, sq.F2, sq.I2, source=U0, target=U2)
        P = pushout(G1, G2, size_bound=2000).category
        if cat_isomorphic(under_category(c, Functor.identity(sq.C)).category, P, limit=400) is None:
            return False
    return True


def test_criterion_6_under_category_pushouts(criterion):
    L = Loader()
    squares = [counterexample_square("Z/2"), counterexample_square("Z/3"), counterexample_square("chain"),
               L.square("@span_square")[0], L.square("@trivial_z2_square")[0]]
    for r in rngs(601, 30):
        sq = random_square(r, max_morphisms=5)
        if sq is not None:
            squares.append(sq)
    checked, bad, out_of_bounds = 0, 0, 0
    for sq in squares:
        try:
            good = under_pushout_matches(sq)
        except BoundExceeded:
            out_of_bounds += 1
            continue
        checked += 1
        bad += not good
    ok = checked >= 10 and bad == 0
    criterion(6, "c/C ≅ c/I₁ ⊔ c/I₂ over c/I₀", ok,
              f"{checked} squares, {bad} failures, {out_of_bounds} beyond bounds")
    assert ok


def dihedral_prediction():
    _, legs = Loader().square("@dihedral_square")
    F1, F2 = legs["F1"], legs["F2"]
    return mv_predict(F1, F2, const_diagram(F1.codomain), const_diagram(F2.codomain), 3)


def test_criterion_7_circle_prediction(criterion):
    _, legs = Loader().square("@circle_square")
    F1, F2 = legs["F1"], legs["F2"]
    pred = mv_predict(F1, F2, const_diagram(F1.codomain), const_diagram(F2.codomain), 3)
    ok = inv(pred) == [Z, Z, ZERO, ZERO]
    criterion(7, "groupoid circle", ok, fmt(pred))
    assert ok


@pytest.mark.xfail(strict=True, reason="the stated dihedral value (ℤ, 0, ℤ/2⊕ℤ/2, 0) is the integral "
                   "cohomology of ℤ/2*ℤ/2; its homology is (ℤ, ℤ/2⊕ℤ/2, 0, ℤ/2⊕ℤ/2). See the decisions ledger.")
def test_criterion_7_dihedral_prediction(criterion):
    pred = dihedral_prediction()
    ok = inv(pred) == [Z, ZERO, Z2Z2, ZERO]
    criterion(7, "infinite dihedral, stated (ℤ, 0, ℤ/2 ⊕ ℤ/2, 0)", ok, f"computed {fmt(pred)}")
    assert ok


def dd_zero(cx):
    for n in cx.degrees():
        d1, d0 = cx.outgoing(n), cx.incoming(n)
        if d0 is not None and d1 is not None and not (d1 @ d0).is_zero():
            return False
    return True


def test_criterion_8_exact_arithmetic(criterion):
    rng = random.Random(801)
    snf_ok = True
    for _ in range(1000):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        A = IntMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        res = smith_normal_form(A)
        diag = [d for d in res.diagonal if d]
        snf_ok &= (res.U @ A @ res.V == res.S and abs(res.U.det()) == 1 and abs(res.V.det()) == 1
                   and all(res.S[i, j] == 0 for i in range(m) for j in range(n) if i != j)
                   and res.diagonal[: len(diag)] == diag and all(d > 0 for d in diag)
                   and all(b % a == 0 for a, b in zip(diag, diag[1:])))
    criterion(8, "SNF on 1000 random matrices", snf_ok)

    complexes = 0
    dd_ok = True
    for r in rngs(802, 25):
        C = random_category(r, max_objects=3, max_morphisms=8)
        M, L = random_left_module(r, C), random_right_module(r, C)
        for cx in (bar_complex(M, 3).model, bar_complex(M, 3, normalized=False).model,
                   cobar_complex(L, 3).model, nerve_complex(C, 3)):
            complexes += 1
            dd_ok &= dd_zero(cx)
    for sq in (counterexample_square(), Loader().square("@span_square")[0]):
        HP = homotopy_pushout_complex(sq.F1, sq.F2, const_diagram(sq.C1), const_diagram(sq.C2), 4)
        complexes += 2
        dd_ok &= dd_zero(HP.complex) and dd_zero(cone(HP.alpha).complex)
    criterion(8, "d∘d = 0", dd_ok, f"{complexes} complexes")

    comparisons, norm_ok = 0, True
    for r in rngs(803, 20):
        C = random_category(r, max_objects=3, max_morphisms=6)
        M, L = random_left_module(r, C), random_right_module(r, C)
        norm_ok &= inv(derived_colim(M, 2)) == inv(derived_colim(M, 2, normalized=False))
        norm_ok &= inv(derived_lim(L, 2)) == inv(derived_lim(L, 2, normalized=False))
        comparisons += 2
    criterion(8, "normalized vs unnormalized", norm_ok, f"{comparisons} comparisons")
    assert snf_ok and dd_ok and norm_ok


def test_criterion_9_pushout_engine(criterion):
    L = Loader()
    F1, F2 = L.functor("@cex_z2_F1"), L.functor("@cex_z2_F2")
    res = pushout(F1, F2)
    target = L.category("@cex_z2_C")
    rebuilt = (len(res.category.morphisms) == 7 and cat_isomorphic(res.category, target) is not None
               and (res.I1 @ F1).equals(res.I2 @ F2))
    criterion(9, "stand-in category rebuilt from its legs", rebuilt, f"{len(res.category.morphisms)} morphisms")
    G1, G2 = L.functor("@circle_F1"), L.functor("@circle_F2")
    try:
        pushout(G1, G2)
        bounded = False
        detail = "returned a category"
    except BoundExceeded as e:
        bounded = True
        detail = f"word length {e.word_length}"
    criterion(9, "groupoid circle gives BoundExceeded", bounded, detail)
    assert rebuilt and bounded
