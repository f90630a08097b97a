import pytest

from dcolim.abelian import CompositionNonzero, FgAbGroup, IntMatrix, SparseMatrix
from dcolim.chains import ChainComplex, ChainMap, PresentedComplex, cone, direct_sum, induced_on_homology


def sp(rows):
    return IntMatrix(rows).to_sparse()


def z2_bar():
    # normalized bar complex of const Z over Z/2 in degrees 0..4
    return ChainComplex([1] * 5, {1: sp([[0]]), 2: sp([[2]]), 3: sp([[0]]), 4: sp([[2]])})


def test_homology_of_z2_bar():
    C = z2_bar()
    assert [C.homology_invariants(n) for n in range(4)] == [(1, ()), (0, (2,)), (0, ()), (0, (2,))]


def test_dd_zero_enforced():
    with pytest.raises(CompositionNonzero):
        ChainComplex([1, 1, 1], {1: sp([[1]]), 2: sp([[1]])})


def test_shape_checked():
    with pytest.raises(ValueError):
        ChainComplex([1, 2], {1: sp([[1]])})


def test_identity_and_zero_maps_on_homology():
    C = z2_bar()
    ident = ChainMap(C, C, {n: SparseMatrix.identity(1) for n in range(5)})
    zero = ChainMap(C, C, {n: SparseMatrix(1, 1) for n in range(5)})
    for n in range(4):
        assert induced_on_homology(ident, n).is_isomorphism()
        assert induced_on_homology(zero, n).is_zero()


def test_non_commuting_map_rejected():
    C = z2_bar()
    with pytest.raises(CompositionNonzero):
        ChainMap(C, C, {0: SparseMatrix.identity(1), 1: SparseMatrix(1, 1), 2: SparseMatrix.identity(1),
                        3: SparseMatrix.identity(1), 4: SparseMatrix.identity(1)})


def test_cone_of_identity_is_acyclic():
    C = z2_bar()
    ident = ChainMap(C, C, {n: SparseMatrix.identity(1) for n in range(5)})
    K = cone(ident).complex
    assert K.is_acyclic([n for n in K.valid_degrees() if n <= 3])


def test_cone_of_zero_map_splits():
    C = z2_bar()
    zero = ChainMap(C, C, {n: SparseMatrix(1, 1) for n in range(5)})
    K = cone(zero).complex
    # H_n(Cone) = H_n(C) ⊕ H_{n-1}(C)
    for n in range(1, 4):
        expected = FgAbGroup.direct_sum([C.homology_group(n), C.homology_group(n - 1)])
        assert K.homology_invariants(n) == expected.invariants


def test_direct_sum_homology():
    C = z2_bar()
    S = direct_sum([C, C])
    assert S.homology_invariants(1) == (0, (2, 2))
    assert S.homology_invariants(0) == (2, ())


def test_cochain_complex():
    # Z --x2--> Z --> 0 as a cochain complex: H^0 = 0, H^1 = Z/2
    C = ChainComplex([1, 1, 0], {0: sp([[2]]), 1: SparseMatrix(0, 1)}, cohomological=True)
    assert C.homology_invariants(0) == (0, ())
    assert C.homology_invariants(1) == (0, (2,))


def test_homology_cycles_represent_classes():
    C = z2_bar()
    h = C.homology(1)
    assert h.group.invariants == (0, (2,))
    assert h.coordinates(h.cycles).ncols == h.cycles.ncols


def presented_example():
    # 0 -> Z --x2--> Z/4, with the Z in degree 1
    z4 = FgAbGroup.cyclic(4)
    return PresentedComplex({0: [z4], 1: [FgAbGroup.free(1)], 2: []}, {1: sp([[2]]), 2: SparseMatrix(1, 0)})


def test_presented_lattice_homology():
    P = presented_example()
    assert P.lattice_homology(0).invariants == (0, (2,))
    assert P.lattice_homology(1).invariants == (1, ())


def test_free_model_matches_lattice_homology():
    P = presented_example()
    F = P.free_model()
    assert F.homology_invariants(0) == (0, (2,))
    assert F.homology_invariants(1) == (1, ())


def test_presented_cochain_free_model_low_degree():
    # cochain complex Z/2 --0--> Z/2 --1--> Z/2 --> 0: H^0 = Z/2 needs the degree -1 slot
    z2 = FgAbGroup.cyclic(2)
    P = PresentedComplex({0: [z2], 1: [z2], 2: [z2], 3: []},
                         {0: sp([[0]]), 1: sp([[1]]), 2: SparseMatrix(0, 1)}, cohomological=True)
    F = P.free_model()
    assert F.low == -1
    assert F.homology_invariants(0) == P.lattice_homology(0).invariants == (0, (2,))
    assert F.homology_invariants(1) == P.lattice_homology(1).invariants == (0, ())
