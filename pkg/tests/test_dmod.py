import pytest

from randcat import random_category, random_functor_into, random_left_module, random_right_module, rngs

from dcolim.abelian import FgAbGroup, IntMatrix
from dcolim.constructions import (
    adjoin_initial,
    adjoin_terminal,
    chain,
    constant_functor,
    cyclic_group,
    discrete,
    inclusion,
    point,
    span,
)
from dcolim.dmod import (
    Diagram,
    DiagramError,
    bar_complex,
    cobar_complex,
    colimit,
    const_diagram,
    derived_colim,
    derived_lim,
    induced_map,
    left_kan,
    limit,
    nerve_homology,
    reduce_mod,
    representable,
    restrict,
    restriction_map,
    tensor_over_category,
)
from dcolim.fincat import FinCategory, Functor
from dcolim.mv import counterexample_square

Z = (1, ())
ZERO = (0, ())
Z2 = (0, (2,))


def inv(groups):
    return [g.invariants for g in groups]


def test_const_diagram_examples():
    assert const_diagram(point()).groups["*"].invariants == Z
    zero = const_diagram(span(), FgAbGroup.trivial())
    assert all(g.is_trivial() for g in zero.groups.values())
    C = counterexample_square().C
    M = const_diagram(C)
    assert len(M.groups) == 3
    assert all(M.maps[m].matrix == IntMatrix.identity(1) for m in C.morphisms)


def test_restrict_examples():
    M = representable(span(), "c")
    R = restrict(M, Functor.identity(span()))
    assert all(R.groups[o].invariants == M.groups[o].invariants for o in span().objects)
    sq = counterexample_square()
    R0 = restrict(const_diagram(sq.C), sq.I0)
    assert R0.base is sq.C0 and R0.groups["*"].invariants == Z
    assert R0.maps["g"].matrix == IntMatrix.identity(1)


def test_diagram_functoriality_checked():
    C = cyclic_group(2)
    with pytest.raises(DiagramError):
        # g acting by 2 on Z is not an involution
        Diagram(C, {"*": FgAbGroup.free(1)}, {"g": [[2]]})
    with pytest.raises(DiagramError):
        Diagram(C, {"*": FgAbGroup.cyclic(2)}, {"g": [[1]]}, variance="both")


def test_diagram_round_trip():
    M = reduce_mod(representable(span(), "c"), 3)
    back = Diagram.from_dict(M.to_dict(), span())
    assert back.to_dict() == M.to_dict()


def test_bar_point():
    assert inv(derived_colim(const_diagram(point()), 3)) == [Z, ZERO, ZERO, ZERO]


def test_bar_z2_hand_complex():
    b = bar_complex(const_diagram(cyclic_group(2)), 4)
    assert list(b.model.dims[:4]) == [1, 1, 1, 1]
    entries = [b.model.diffs[n].to_dense().tolist() for n in (1, 2, 3)]
    assert [abs(e[0][0]) for e in entries] == [0, 2, 0]
    assert [b.homology(n).invariants for n in range(3)] == [Z, Z2, ZERO]


def test_stand_in_pieces_contractible():
    sq = counterexample_square()
    for C in (sq.C1, sq.C2, sq.C):
        assert inv(derived_colim(const_diagram(C), 3)) == [Z, ZERO, ZERO, ZERO]
    assert inv(derived_colim(const_diagram(sq.C0), 3)) == [Z, Z2, ZERO, Z2]


def test_colim0_of_connected_is_z():
    for C in (span(), chain(4), cyclic_group(5), adjoin_initial(cyclic_group(2))):
        assert derived_colim(const_diagram(C), 0)[0].invariants == Z


def test_derived_lim_examples():
    assert inv(derived_lim(const_diagram(point(), variance="right"), 1)) == [Z, ZERO]
    assert derived_lim(const_diagram(discrete(["a", "b"]), variance="right"), 0)[0].invariants == (2, ())
    assert inv(derived_lim(const_diagram(cyclic_group(2), variance="right"), 2)) == [Z, ZERO, Z2]


def test_derived_lim_torsion_values():
    # H^*(Z/2; Z/2) = Z/2 in every degree
    L = const_diagram(cyclic_group(2), FgAbGroup.cyclic(2), "right")
    assert inv(derived_lim(L, 3)) == [Z2] * 4
    M = const_diagram(cyclic_group(2), FgAbGroup.cyclic(2))
    assert inv(derived_colim(M, 3)) == [Z2] * 4


def test_variance_checked():
    with pytest.raises(DiagramError):
        bar_complex(const_diagram(point(), variance="right"), 2)
    with pytest.raises(DiagramError):
        cobar_complex(const_diagram(point()), 2)


def test_empty_category():
    E = FinCategory([], [], {}, {})
    assert inv(derived_colim(const_diagram(E), 2)) == [ZERO] * 3
    assert inv(nerve_homology(E, 2)) == [ZERO] * 3


def test_induced_map_identity():
    M = const_diagram(cyclic_group(2))
    f = induced_map(Functor.identity(cyclic_group(2)), M, 3)
    for n in range(3):
        assert f.on_homology(n).is_isomorphism()


def test_induced_map_from_empty():
    C = span()
    E = FinCategory([], [], {}, {})
    F = Functor(E, C, {}, {})
    f = induced_map(F, const_diagram(C), 2)
    assert f.on_homology(0).is_zero()


def test_induced_map_stand_in_leg():
    sq = counterexample_square()
    f = induced_map(sq.F1, const_diagram(sq.C1), 3)
    h = f.on_homology(1)
    assert h.source.invariants == Z2 and h.target.is_trivial()


def test_restriction_map_identity():
    L = const_diagram(cyclic_group(2), variance="right")
    f = restriction_map(Functor.identity(cyclic_group(2)), L, 3)
    for n in range(3):
        assert f.on_homology(n).is_isomorphism()


def test_tensor_examples():
    P = point()
    assert tensor_over_category(const_diagram(P, variance="right"), const_diagram(P, FgAbGroup.cyclic(2))).invariants == Z2
    for r in rngs(5, 15):
        C = random_category(r)
        M = random_left_module(r, C)
        assert tensor_over_category(const_diagram(C, variance="right"), M).invariants == colimit(M).invariants


def test_left_kan_examples():
    C = span()
    L = reduce_mod(representable(C, "a", variance="right"), 2)
    K = left_kan(L, Functor.identity(C))
    for o in C.objects:
        assert K.groups[o].invariants == L.groups[o].invariants
    E = FinCategory([], [], {}, {})
    K0 = left_kan(const_diagram(E, variance="right"), Functor(E, C, {}, {}))
    assert all(g.is_trivial() for g in K0.groups.values())
    for c0 in C.objects:
        K1 = left_kan(const_diagram(point(), variance="right"), constant_functor(point(), C, c0))
        for c in C.objects:
            assert K1.groups[c].invariants == (len(C.hom(c, c0)), ())


def test_left_kan_needs_right_module():
    with pytest.raises(DiagramError):
        left_kan(const_diagram(point()), Functor.identity(point()))


def test_nerve_examples():
    assert inv(nerve_homology(point(), 3)) == [Z, ZERO, ZERO, ZERO]
    assert inv(nerve_homology(cyclic_group(2), 3)) == [Z, Z2, ZERO, Z2]
    assert inv(nerve_homology(counterexample_square().C, 2)) == [Z, ZERO, ZERO]


# invariants

def test_normalized_matches_unnormalized():
    for r in rngs(31, 20):
        C = random_category(r, max_objects=3, max_morphisms=6)
        M = random_left_module(r, C)
        assert inv(derived_colim(M, 2)) == inv(derived_colim(M, 2, normalized=False))
        L = random_right_module(r, C)
        assert inv(derived_lim(L, 2)) == inv(derived_lim(L, 2, normalized=False))


def test_degree_zero_is_colimit_and_limit():
    for r in rngs(32, 30):
        C = random_category(r)
        M = random_left_module(r, C)
        assert derived_colim(M, 0)[0].invariants == colimit(M).invariants
        L = random_right_module(r, C)
        assert derived_lim(L, 0)[0].invariants == limit(L).invariants


def test_free_model_matches_lattice_homology():
    for r in rngs(33, 20):
        C = random_category(r, max_objects=3, max_morphisms=8)
        M = reduce_mod(random_left_module(r, C), r.choice([2, 3, 4]))
        b = bar_complex(M, 3)
        for n in range(3):
            assert b.homology(n).invariants == b.presented.lattice_homology(n).invariants
        L = reduce_mod(random_right_module(r, C), r.choice([2, 3]))
        cb = cobar_complex(L, 4)
        for n in range(3):
            assert cb.homology(n).invariants == cb.presented.lattice_homology(n).invariants


def test_projective_modules_are_acyclic():
    for r in rngs(34, 20):
        C = random_category(r)
        c = r.choice(C.objects)
        assert inv(derived_colim(representable(C, c), 2)) == [Z, ZERO, ZERO]


def test_initial_or_terminal_object_gives_point_homology():
    for r in rngs(35, 20):
        C0 = random_category(r, max_objects=3, max_morphisms=8)
        for C, obj in ((adjoin_initial(C0, "u0"), "u0"), (adjoin_terminal(C0, "u1"), "u1")):
            assert inv(derived_colim(const_diagram(C), 2)) == [Z, ZERO, ZERO]
            f = induced_map(inclusion(point(obj), C), const_diagram(C), 3)
            for n in range(3):
                assert f.on_homology(n).is_isomorphism()


def test_random_functor_restriction_is_diagram():
    for r in rngs(36, 20):
        C = random_category(r)
        F = random_functor_into(r, C)
        M = random_left_module(r, C)
        restrict(M, F).check()
