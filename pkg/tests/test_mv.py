import random

import pytest

from randcat import random_category, random_square, rngs

from dcolim.abelian import AbHom, FgAbGroup, IntMatrix, SparseMatrix
from dcolim.chains import ChainMap, join_maps
from dcolim.constructions import (
    adjoin_initial,
    chain,
    adjoin_terminal,
    cyclic_group,
    cyclic_hom,
    discrete,
    join,
    point,
    span,
)
from dcolim.dmod import (
    DiagramError,
    bar_complex,
    const_diagram,
    derived_colim,
    derived_lim,
    induced_map,
    restrict,
)
from dcolim.fincat import FinCategory, Functor, PushoutSquare, pushout
from dcolim.formats import Loader
from dcolim.mv import (
    _lift,
    counterexample_repro,
    counterexample_square,
    covering_check,
    homotopy_pullback_complex,
    homotopy_pushout_complex,
    local_covering_check,
    mv_predict,
    mv_verify,
    mv_verify_lim,
    theorem1_hypotheses,
)

Z = (1, ())
ZERO = (0, ())
Z2 = (0, (2,))
POINT = [Z, ZERO, ZERO, ZERO]


def inv(groups):
    return [g.invariants for g in groups]


def corpus_square(name):
    return Loader().square("@" + name)


def identity_square(C):
    i = Functor.identity(C)
    return PushoutSquare(i, i, i, i)


def point_square():
    return identity_square(point())


def circle_legs():
    _, legs = corpus_square("circle_square")
    return legs["F1"], legs["F2"]


def has_initial_or_terminal(C):
    n = len(C.objects)
    for o in C.objects:
        if all(len(C.hom(o, x)) == 1 for x in C.objects) or all(len(C.hom(x, o)) == 1 for x in C.objects):
            return n > 0
    return False


# local coverings

def test_identity_is_certified_local_covering():
    v = local_covering_check(Functor.identity(span()))
    assert v.status == "certified"
    assert all(r.certificate == "initial-object-per-component" for r in v.records)


def test_faithful_groupoid_functors_certified():
    for F in (cyclic_hom(2, 4, 2), cyclic_hom(3, 6, 2), Functor.identity(cyclic_group(3))):
        v = local_covering_check(F)
        assert v.status == "certified" and v.groupoid_rule


def test_non_faithful_group_map_fails():
    # Z/4 -> Z/2: the under category is a translation groupoid with Z/2 stabilizers
    v = local_covering_check(cyclic_hom(4, 2, 1))
    assert v.status == "failed"
    assert v.witness[1] == 1 and v.witness[2].invariants == Z2


def test_stand_in_I0_fails_at_zero():
    v = local_covering_check(counterexample_square().I0)
    assert v.status == "failed"
    obj, n, G = v.witness
    assert (obj, n, G.invariants) == ("0", 1, Z2)
    assert [r.pi1 for r in v.records if r.object == "0"] == ["nontrivial-abelianization"]


def test_covering_examples():
    assert covering_check(Functor.identity(span())).covering is True
    F = Functor(point(), cyclic_group(2), {"*": "*"}, {"id_*": "id_*"})
    assert covering_check(F).covering is True
    I1 = counterexample_square().I1
    v = covering_check(I1)
    assert v.local.status != "failed"
    assert v.covering is False
    C = I1.codomain
    assert any(C.source(f["arrow"]) == "0" and C.target(f["arrow"]) == "1" for f in v.failures)


def test_covering_undecided_when_local_fails():
    assert covering_check(counterexample_square().I0).covering is None


def test_hypotheses_examples():
    sq, _ = corpus_square("span_square")
    h = theorem1_hypotheses(sq)
    assert h.holds and h.strength == "structural"
    h = theorem1_hypotheses(counterexample_square())
    assert not h.holds and h.failing == ["I0"]
    h = theorem1_hypotheses(identity_square(span()))
    assert h.holds


def test_hypotheses_need_an_injective_leg():
    C = discrete(["a", "b"])
    F = Functor(C, point(), {"a": "*", "b": "*"}, {"id_a": "id_*", "id_b": "id_*"})
    res = pushout(F, F)
    h = theorem1_hypotheses(res.square(F, F))
    assert "injective-on-objects" in h.failing


# homotopy pushout

def test_homotopy_pushout_point():
    i = Functor.identity(point())
    M = const_diagram(point())
    HP = homotopy_pushout_complex(i, i, M, M, 2)
    assert inv(HP.homology(1)) == [Z, ZERO]


def test_homotopy_pushout_circle():
    F1, F2 = circle_legs()
    HP = homotopy_pushout_complex(F1, F2, const_diagram(F1.codomain), const_diagram(F2.codomain), 3)
    assert inv(HP.homology(2)) == [Z, Z, ZERO]


def test_homotopy_pushout_stand_in():
    sq = counterexample_square()
    HP = homotopy_pushout_complex(sq.F1, sq.F2, const_diagram(sq.C1), const_diagram(sq.C2), 4)
    assert inv(HP.homology(3)) == [Z, ZERO, Z2, ZERO]


def test_homotopy_pushout_leg_mismatch():
    sq = counterexample_square()
    with pytest.raises(DiagramError):
        homotopy_pushout_complex(sq.F1, sq.F2, const_diagram(sq.C1), const_diagram(sq.C2, FgAbGroup.cyclic(2)), 2)


def test_homotopy_pullback_circle():
    F1, F2 = circle_legs()
    R = "right"
    HQ = homotopy_pullback_complex(F1, F2, const_diagram(F1.codomain, variance=R),
                                   const_diagram(F2.codomain, variance=R), 3)
    assert inv(HQ.homology(2)) == [Z, Z, ZERO]


# mv_verify

def test_mv_span_square():
    sq, _ = corpus_square("span_square")
    rep = mv_verify(sq, const_diagram(sq.C), 3)
    assert rep.exact and rep.quasi_isomorphism
    for k in ("C0", "C1", "C2", "C"):
        assert inv(rep.groups[k]) == POINT
    assert all(d.is_zero() for n, d in rep.boundary.items() if d is not None)


def test_mv_stand_in_square():
    sq = counterexample_square()
    rep = mv_verify(sq, const_diagram(sq.C), 3)
    assert not rep.quasi_isomorphism
    assert rep.cone_homology
    assert all(G.invariants == Z2 for G in rep.cone_homology.values())
    assert not rep.exact
    node = rep.node("C0", 1)
    assert node.status == "not exact" and node.defect.invariants == Z2
    assert [n.label for n in rep.failures] == ["colim₁^{C₀}"]
    # the map colim_1 of C0 -> colim_1 of C1 is Z/2 -> 0
    assert rep.alpha[1].source.invariants == Z2 and rep.alpha[1].target.is_trivial()


def test_mv_trivial_to_z2_square():
    sq, _ = corpus_square("trivial_z2_square")
    rep = mv_verify(sq, const_diagram(sq.C), 3)
    assert rep.exact and rep.quasi_isomorphism
    assert inv(rep.groups["C"]) == [Z, Z2, ZERO, Z2]


def test_mv_circle_like_finite_square_has_nonzero_boundary():
    # two cones on a pair of points glued along the pair: the nerve is a circle
    C0 = discrete(["x", "y"])
    C1 = join(C0, point("t"))
    C2 = join(C0, point("s"))
    res = pushout(_incl(C0, C1), _incl(C0, C2))
    sq = res.square(_incl(C0, C1), _incl(C0, C2))
    rep = mv_verify(sq, const_diagram(sq.C), 2)
    assert rep.exact and rep.quasi_isomorphism
    assert inv(rep.groups["C"]) == [Z, Z, ZERO]
    d = rep.boundary[1]
    assert not d.is_zero() and d.is_injective()


def _incl(D, C):
    objs = {o: next(x for x in C.objects if x == o or x.endswith("." + o)) for o in D.objects}
    mors = {}
    for m in D.morphisms:
        a, b = D.source(m), D.target(m)
        mors[m] = C.identity(objs[a]) if D.is_identity(m) else C.hom(objs[a], objs[b])[0]
    return Functor(D, C, objs, mors)


def test_mv_torsion_diagram():
    sq, _ = corpus_square("trivial_z2_square")
    M = const_diagram(sq.C, FgAbGroup.cyclic(2))
    rep = mv_verify(sq, M, 2)
    assert rep.exact
    assert inv(rep.groups["C"]) == [Z2, Z2, Z2]


# mv_verify_lim

def test_mv_lim_point_square():
    sq = point_square()
    rep = mv_verify_lim(sq, const_diagram(point(), variance="right"), 2)
    assert rep.exact


def test_mv_lim_stand_in_square():
    sq = counterexample_square()
    rep = mv_verify_lim(sq, const_diagram(sq.C, variance="right"), 3)
    assert not rep.exact
    labels = [n.label for n in rep.failures]
    assert labels == ["lim²_{C₀}"]
    assert rep.failures[0].defect.invariants == Z2


def test_mv_lim_trivial_to_z2_square():
    sq, _ = corpus_square("trivial_z2_square")
    rep = mv_verify_lim(sq, const_diagram(sq.C, variance="right"), 3)
    assert rep.exact
    assert rep.groups["C"][0].invariants == Z and rep.groups["C"][2].invariants == Z2


def test_mv_lim_needs_right_module():
    sq = point_square()
    with pytest.raises(DiagramError):
        mv_verify_lim(sq, const_diagram(point()), 2)


# prediction

def test_predict_circle():
    F1, F2 = circle_legs()
    pred = mv_predict(F1, F2, const_diagram(F1.codomain), const_diagram(F2.codomain), 3)
    assert inv(pred) == [Z, Z, ZERO, ZERO]


def test_predict_points():
    i = Functor.identity(point())
    M = const_diagram(point())
    assert inv(mv_predict(i, i, M, M, 3)) == POINT


def test_predict_dihedral_matches_free_product_homology():
    # H_n(Z/2 * Z/2) = H_n(Z/2) ⊕ H_n(Z/2) for n >= 1
    _, legs = corpus_square("dihedral_square")
    F1, F2 = legs["F1"], legs["F2"]
    pred = mv_predict(F1, F2, const_diagram(F1.codomain), const_diagram(F2.codomain), 3)
    z2 = inv(derived_colim(const_diagram(cyclic_group(2)), 3))
    expected = [Z] + [(0, tuple(sorted(t * 2))) for _, t in z2[1:]]
    assert inv(pred) == expected == [Z, (0, (2, 2)), ZERO, (0, (2, 2))]


def test_predict_dihedral_lim_side():
    _, legs = corpus_square("dihedral_square")
    F1, F2 = legs["F1"], legs["F2"]
    R = "right"
    pred = mv_predict(F1, F2, const_diagram(F1.codomain, variance=R), const_diagram(F2.codomain, variance=R), 3,
                      side="lim")
    assert inv(pred) == [Z, ZERO, (0, (2, 2)), ZERO]


def test_predict_bad_side():
    i = Functor.identity(point())
    M = const_diagram(point())
    with pytest.raises(ValueError):
        mv_predict(i, i, M, M, 1, side="both")


# counter-example

def test_counterexample_z2():
    rep = counterexample_repro("Z/2", 3)
    assert rep.as_expected, rep.expectations
    assert rep.pushout_size == (3, 7)


def test_counterexample_z3():
    rep = counterexample_repro("Z/3", 3)
    assert rep.as_expected, rep.expectations
    assert rep.colim.node("C0", 1).defect.invariants == (0, (3,))


def test_counterexample_chain():
    rep = counterexample_repro("chain", 3)
    assert rep.as_expected, rep.expectations
    assert rep.colim.exact and rep.hypotheses.holds


def test_counterexample_unknown_variant():
    with pytest.raises(ValueError):
        counterexample_square("Z/5")


# invariants over random squares

def random_squares(seed, count, **kw):
    out = []
    for r in rngs(seed, count):
        sq = random_square(r, max_morphisms=4, **kw)
        if sq is not None:
            out.append(sq)
    return out


def test_beta_alpha_zero():
    for sq in random_squares(51, 25):
        M = const_diagram(sq.C)
        rep = mv_verify(sq, M, 2)
        for a, b in zip(rep.alpha, rep.beta):
            assert (b @ a).is_zero()
        L = const_diagram(sq.C, variance="right")
        rep = mv_verify_lim(sq, L, 2)
        for a, b in zip(rep.alpha, rep.beta):
            assert (b @ a).is_zero()


def test_structural_hypotheses_imply_exactness():
    seen = 0
    for sq in random_squares(52, 40):
        h = theorem1_hypotheses(sq, 3)
        if h.strength != "structural":
            continue
        seen += 1
        assert mv_verify(sq, const_diagram(sq.C), 3).exact
        assert mv_verify_lim(sq, const_diagram(sq.C, variance="right"), 2).exact
    assert seen >= 10


def test_predict_agrees_with_corner():
    seen = 0
    for sq in random_squares(53, 30):
        M = const_diagram(sq.C)
        rep = mv_verify(sq, M, 2)
        if not rep.quasi_isomorphism:
            continue
        seen += 1
        pred = mv_predict(sq.F1, sq.F2, const_diagram(sq.C1), const_diagram(sq.C2), 2)
        assert inv(pred) == inv(derived_colim(M, 2))
        L = const_diagram(sq.C, variance="right")
        pred = mv_predict(sq.F1, sq.F2, const_diagram(sq.C1, variance="right"),
                          const_diagram(sq.C2, variance="right"), 2, side="lim")
        assert inv(pred) == inv(derived_lim(L, 2))
    assert seen >= 10


def reversed_category(C):
    ms = list(reversed(C.morphisms))
    return FinCategory(list(reversed(C.objects)), [(m, C.source(m), C.target(m)) for m in ms],
                       {o: C.identity(o) for o in C.objects},
                       {(g, f): C.compose(g, f) for g in ms for f in ms if C.source(g) == C.target(f)},
                       name=C.name)


def relabel_square(sq):
    new = {id(C): reversed_category(C) for C in (sq.C0, sq.C1, sq.C2, sq.C)}

    def move(F):
        return Functor(new[id(F.domain)], new[id(F.codomain)], {o: F.obj(o) for o in F.domain.objects},
                       {m: F.mor(m) for m in F.domain.morphisms})

    return PushoutSquare(move(sq.F1), move(sq.F2), move(sq.I1), move(sq.I2))


def boundary_signature(d):
    if d is None:
        return None
    return d.kernel().invariants, d.image().invariants, d.cokernel().invariants


def test_boundary_independent_of_basis_order():
    C0 = discrete(["x", "y"])
    C1, C2 = join(C0, point("t")), join(C0, point("s"))
    F1, F2 = _incl(C0, C1), _incl(C0, C2)
    squares = [pushout(F1, F2).square(F1, F2)] + random_squares(54, 15)
    for sq in squares:
        a = mv_verify(sq, const_diagram(sq.C), 2)
        b = mv_verify(relabel_square(sq), const_diagram(relabel_square(sq).C), 2)
        assert a.exact == b.exact
        for n in a.boundary:
            assert boundary_signature(a.boundary[n]) == boundary_signature(b.boundary[n])


def test_boundary_independent_of_cycle_representatives():
    # shifting the cycles by boundaries before lifting must not change the connecting map
    C0 = discrete(["x", "y"])
    C1, C2 = join(C0, chain(2)), join(C0, point("s"))
    F1, F2 = _incl(C0, C1), _incl(C0, C2)
    sq = pushout(F1, F2).square(F1, F2)
    M = const_diagram(sq.C)
    rep = mv_verify(sq, M, 2)
    d1 = rep.boundary[1]
    assert not d1.is_zero()

    top = 4
    HP = homotopy_pushout_complex(sq.F1, sq.F2, restrict(M, sq.I1), restrict(M, sq.I2), top)
    bC = bar_complex(M, top)
    g1 = induced_map(sq.I1, M, top, source=HP.bars["C1"], target=bC).chain_map
    g2 = induced_map(sq.I2, M, top, source=HP.bars["C2"], target=bC).chain_map
    beta = join_maps([g1, g2], HP.legs, signs=[1, -1])
    P, X = HP.complex, bC.model
    a_dims = HP.bars["C0"].model
    psi = ChainMap(P, X, {n: SparseMatrix.blocks([X.dim(n)], [a_dims.dim(n - 1), HP.legs.dim(n)], {(0, 1): beta.at(n)})
                          for n in range(P.low, min(P.top, X.top) + 1)})
    Hc = X.homology(1)
    bd = X.incoming(1).to_dense()
    assert bd.ncols > 0
    rng = random.Random(5)
    shift = bd @ IntMatrix([[rng.randint(-3, 3) for _ in range(Hc.cycles.ncols)] for _ in range(bd.ncols)],
                           Hc.cycles.ncols)
    Y = _lift(psi, Hc.cycles + shift, 1, P, X)
    coords = a_dims.homology(0).coordinates(Y.select(rows=range(a_dims.dim(0))))
    assert AbHom(d1.source, d1.target, coords).equals(d1)


def test_family_property_non_exact():
    """C1, C2 and C contractible by initial/terminal objects, C0 not acyclic: never exact."""
    seen = 0
    for r in rngs(55, 40):
        C0 = random_category(r, max_objects=2, max_morphisms=5)
        reduced = derived_colim(const_diagram(C0), 2)
        if reduced[0].invariants == Z and all(g.is_trivial() for g in reduced[1:]):
            continue
        C1, C2 = adjoin_initial(C0, "u0"), adjoin_terminal(C0, "u1")
        F1, F2 = _same_names(C0, C1), _same_names(C0, C2)
        try:
            sq = pushout(F1, F2, size_bound=300).square(F1, F2)
        except Exception:
            continue
        if not all(has_initial_or_terminal(X) for X in (sq.C1, sq.C2, sq.C)):
            continue
        seen += 1
        assert not mv_verify(sq, const_diagram(sq.C), 2).exact
    assert seen >= 5


def _same_names(D, C):
    return Functor(D, C, {o: o for o in D.objects}, {m: m for m in D.morphisms})
