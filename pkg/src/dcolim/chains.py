"""Chain complexes of free abelian groups, chain maps, cones and homology.

A complex carries its differentials as sparse matrices indexed by the
degree they leave: ``diffs[n]`` maps degree ``n`` to ``n - 1`` for a
homological complex and to ``n + 1`` for a cohomological one. Degrees run
from ``low`` to ``top``. Groups below ``low`` are zero; differentials out of
``top`` are unknown, so (co)homology is only available where both
neighbouring differentials are known.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .abelian import (
    AbHom,
    CompositionNonzero,
    FgAbGroup,
    IntMatrix,
    ShapeError,
    Solver,
    SparseMatrix,
    exactness_defect,
    image_basis,
    invariant_factors,
    kernel_basis,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "Cone",
    "Homology",
    "PresentedComplex",
    "TruncationError",
    "cone",
    "direct_sum",
    "induced_on_homology",
    "join_maps",
    "stack_maps",
]


class TruncationError(ValueError):
    """Raised when asking for (co)homology outside the computed range."""


@dataclass
class Homology:
    """A (co)homology group together with the cycles that generate it."""

    degree: int
    group: FgAbGroup
    cycles: IntMatrix

    @cached_property
    def _solver(self) -> Solver:
        return Solver(self.cycles)

    def coordinates(self, chains: IntMatrix) -> IntMatrix:
        """Coordinates of cycles (columns of ``chains``) in the generating cycles."""
        out = self._solver.solve(chains)
        if out is None:
            raise ValueError("vectors are not cycles of this complex")
        return out


class ChainComplex:
    def __init__(
        self,
        dims: Sequence[int],
        diffs: dict[int, SparseMatrix],
        cohomological: bool = False,
        labels: dict[int, list] | None = None,
        check: bool = True,
        low: int = 0,
    ):
        self.dims = tuple(dims)
        self.low = low
        self.diffs = dict(diffs)
        self.cohomological = cohomological
        self.labels = labels or {}
        self._rank_cache: dict[int, list[int]] = {}
        self._homology_cache: dict[int, Homology] = {}
        for n, d in self.diffs.items():
            if d.shape != (self.dim(n + self.step), self.dim(n)):
                raise ShapeError(f"differential leaving degree {n} has shape {d.shape}, "
                                 f"expected {(self.dim(n + self.step), self.dim(n))}")
        if check:
            self.check()

    @property
    def step(self) -> int:
        return 1 if self.cohomological else -1

    @property
    def top(self) -> int:
        return self.low + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.low, self.top + 1)

    def dim(self, n: int) -> int:
        k = n - self.low
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def outgoing(self, n: int) -> SparseMatrix | None:
        target = n + self.step
        if n < self.low or target < self.low:
            return SparseMatrix(self.dim(target), self.dim(n))
        return self.diffs.get(n)

    def incoming(self, n: int) -> SparseMatrix | None:
        return self.outgoing(n - self.step)

    def valid_degrees(self) -> list[int]:
        return [n for n in self.degrees()
                if self.outgoing(n) is not None and self.incoming(n) is not None]

    def check(self) -> None:
        """Assert ``d ∘ d = 0`` wherever both differentials are known."""
        for n in self.degrees():
            d1 = self.outgoing(n)
            d0 = self.incoming(n)
            if d0 is None or d1 is None:
                continue
            if not (d1 @ d0).is_zero():
                raise CompositionNonzero(f"d∘d ≠ 0 through degree {n}")

    def _factors(self, n: int) -> list[int]:
        # invariant factors of the differential leaving degree n
        if n not in self._rank_cache:
            d = self.outgoing(n)
            self._rank_cache[n] = invariant_factors(d) if d is not None and d.nnz() else []
        return self._rank_cache[n]

    def _require(self, n: int) -> None:
        if self.outgoing(n) is None or self.incoming(n) is None:
            raise TruncationError(f"(co)homology in degree {n} is beyond the truncation")

    def homology_invariants(self, n: int) -> tuple[int, tuple[int, ...]]:
        """Normal form of the (co)homology in degree ``n`` (rank, torsion)."""
        self._require(n)
        out_rank = len(self._factors(n))
        in_factors = self._factors(n - self.step)
        rank = self.dim(n) - out_rank - len(in_factors)
        return rank, tuple(t for t in in_factors if t > 1)

    def homology_group(self, n: int) -> FgAbGroup:
        r, t = self.homology_invariants(n)
        return FgAbGroup.from_invariants(r, t)

    def is_acyclic(self, degrees) -> bool:
        return all(self.homology_invariants(n) == (0, ()) for n in degrees)

    def homology(self, n: int) -> Homology:
        """(Co)homology with explicit generating cycles (dense computation)."""
        if n in self._homology_cache:
            return self._homology_cache[n]
        self._require(n)
        Z = kernel_basis(self.outgoing(n).to_dense())
        B = self.incoming(n).to_dense()
        if Z.ncols:
            rel = Solver(Z).solve(B)
            if rel is None:
                raise CompositionNonzero(f"boundaries in degree {n} are not cycles")
            rel = image_basis(rel)
        else:
            rel = IntMatrix.zeros(0, B.ncols)
        h = Homology(n, FgAbGroup(rel), Z)
        self._homology_cache[n] = h
        return h

    def shifted(self, k: int) -> ChainComplex:
        """The same groups placed ``k`` degrees higher."""
        return ChainComplex(self.dims, {n + k: d for n, d in self.diffs.items()},
                            self.cohomological, check=False, low=self.low + k)

    def truncated(self, top: int) -> ChainComplex:
        dims = self.dims[: top - self.low + 1]
        diffs = {n: d for n, d in self.diffs.items() if n <= top and n + self.step <= top}
        return ChainComplex(dims, diffs, self.cohomological, check=False, low=self.low)

    def __repr__(self) -> str:
        kind = "cochain" if self.cohomological else "chain"
        return f"ChainComplex({kind}, low={self.low}, dims={list(self.dims)})"


class ChainMap:
    """Degree-preserving map of complexes, one sparse matrix per degree."""

    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict[int, SparseMatrix], check: bool = True):
        if source.cohomological != target.cohomological:
            raise ShapeError("cannot map between chain and cochain complexes")
        self.source = source
        self.target = target
        self.maps = dict(maps)
        for n, f in self.maps.items():
            if f.shape != (target.dim(n), source.dim(n)):
                raise ShapeError(f"chain map in degree {n} has shape {f.shape}")
        if check:
            self.check()

    def at(self, n: int) -> SparseMatrix | None:
        if n in self.maps:
            return self.maps[n]
        if self.source.dim(n) == 0 or self.target.dim(n) == 0:
            return SparseMatrix(self.target.dim(n), self.source.dim(n))
        return None

    def commutes_at(self, n: int) -> bool | None:
        """Check ``d' f_n = f_{n+step} d`` on the differential leaving ``n``."""
        m = n + self.source.step
        d_src = self.source.outgoing(n)
        d_tgt = self.target.outgoing(n)
        fn, fm = self.at(n), self.at(m)
        if d_src is None or d_tgt is None or fn is None or fm is None:
            return None
        return (d_tgt @ fn) == (fm @ d_src)

    def check(self) -> None:
        for n in self.maps:
            if self.commutes_at(n) is False:
                raise CompositionNonzero(f"chain map does not commute with the differential at degree {n}")

    def induced(self, n: int) -> AbHom:
        return induced_on_homology(self, n)

    def __matmul__(self, other: ChainMap) -> ChainMap:
        common = set(self.maps) & set(other.maps)
        return ChainMap(other.source, self.target, {n: self.maps[n] @ other.maps[n] for n in common}, check=False)

    def __sub__(self, other: ChainMap) -> ChainMap:
        common = set(self.maps) & set(other.maps)
        return ChainMap(self.source, self.target, {n: self.maps[n] - other.maps[n] for n in common}, check=False)


def induced_on_homology(f: ChainMap, n: int) -> AbHom:
    """The homomorphism ``H_n(f)`` between generating-cycle presentations."""
    for m in (n, n - f.source.step):
        if f.commutes_at(m) is False:
            raise CompositionNonzero(f"chain map does not commute at degree {m}")
    if f.at(n) is None:
        raise TruncationError(f"chain map unknown in degree {n}")
    hs = f.source.homology(n)
    ht = f.target.homology(n)
    images = f.at(n).to_dense() @ hs.cycles
    return AbHom(hs.group, ht.group, ht.coordinates(images), check=False)


def direct_sum(complexes: Sequence[ChainComplex]) -> ChainComplex:
    coh = complexes[0].cohomological
    s = complexes[0].step
    low = min(c.low for c in complexes)
    top = min(c.top for c in complexes)
    dims = [sum(c.dim(n) for c in complexes) for n in range(low, top + 1)]
    diffs = {}
    for n in range(low, top + 1):
        if not (low <= n + s <= top):
            continue
        parts = [c.outgoing(n) for c in complexes]
        if any(p is None for p in parts):
            continue
        diffs[n] = SparseMatrix.blocks(
            [c.dim(n + s) for c in complexes],
            [c.dim(n) for c in complexes],
            {(i, i): p for i, p in enumerate(parts)},
        )
    return ChainComplex(dims, diffs, coh, check=False, low=low)


def stack_maps(maps: Sequence[ChainMap], target: ChainComplex) -> ChainMap:
    """``x ↦ (f1 x, f2 x, ...)`` into a direct sum."""
    src = maps[0].source
    out = {}
    for n in range(max(src.low, target.low), min(src.top, target.top) + 1):
        parts = [f.at(n) for f in maps]
        if any(p is None for p in parts):
            continue
        out[n] = SparseMatrix.blocks([f.target.dim(n) for f in maps], [src.dim(n)],
                                     {(i, 0): p for i, p in enumerate(parts)})
    return ChainMap(src, target, out, check=False)


def join_maps(maps: Sequence[ChainMap], source: ChainComplex, signs: Sequence[int] | None = None) -> ChainMap:
    """``(x1, x2, ...) ↦ s1 f1 x1 + s2 f2 x2 + ...`` out of a direct sum."""
    tgt = maps[0].target
    signs = signs or [1] * len(maps)
    out = {}
    for n in range(max(source.low, tgt.low), min(source.top, tgt.top) + 1):
        parts = [f.at(n) for f in maps]
        if any(p is None for p in parts):
            continue
        out[n] = SparseMatrix.blocks(
            [tgt.dim(n)], [f.source.dim(n) for f in maps],
            {(0, i): (p if sg > 0 else -p) for i, (p, sg) in enumerate(zip(parts, signs))},
        )
    return ChainMap(source, tgt, out, check=False)


@dataclass
class Cone:
    """Mapping cone ``Cone(f)_n = A_{n+step} ⊕ B_n`` with ``d(a, b) = (-d a, d b - f a)``.

    For chain complexes ``step = -1``; for cochain complexes ``step = +1``.
    """

    complex: ChainComplex
    f: ChainMap
    offsets: dict[int, int] = field(default_factory=dict)

    def split(self, n: int, vector: Sequence[int]) -> tuple[list[int], list[int]]:
        k = self.offsets[n]
        return list(vector[:k]), list(vector[k:])

    def inclusion(self) -> ChainMap:
        """``B → Cone(f)``, ``b ↦ (0, b)``."""
        B, C = self.f.target, self.complex
        maps = {}
        for n in range(max(B.low, C.low), min(B.top, C.top) + 1):
            maps[n] = SparseMatrix.blocks([self.offsets[n], B.dim(n)], [B.dim(n)],
                                          {(1, 0): SparseMatrix.identity(B.dim(n))})
        return ChainMap(B, C, maps, check=False)


def cone(f: ChainMap) -> Cone:
    A, B = f.source, f.target
    s = A.step
    low = min(B.low, A.low - s)
    top = min(B.top, A.top - s)
    dims = [A.dim(n + s) + B.dim(n) for n in range(low, top + 1)]
    diffs = {}
    for n in range(low, top + 1):
        m = n + s
        if not (low <= m <= top):
            continue
        dA = A.outgoing(n + s)
        dB = B.outgoing(n)
        fa = f.at(n + s)
        if dA is None or dB is None or fa is None:
            continue
        diffs[n] = SparseMatrix.blocks(
            [A.dim(m + s), B.dim(m)],
            [A.dim(n + s), B.dim(n)],
            {(0, 0): -dA, (1, 0): -fa, (1, 1): dB},
        )
    cx = ChainComplex(dims, diffs, A.cohomological, low=low)
    return Cone(cx, f, {n: A.dim(n + s) for n in range(low, top + 1)})


@dataclass
class _Block:
    gen_offset: int
    ngens: int
    rel_offset: int
    nrels: int
    solver: Solver


class PresentedComplex:
    """Complex in degrees ``0..top`` whose groups are sums of presented groups.

    ``blocks[n]`` lists the summands in degree ``n`` (each with an injective
    relation matrix) and ``diffs[n]`` is a lift of the differential leaving
    degree ``n`` to generators. ``d ∘ d`` need only vanish modulo relations.
    """

    def __init__(self, blocks: dict[int, list[FgAbGroup]], diffs: dict[int, SparseMatrix], cohomological: bool = False):
        self.blocks = blocks
        self.diffs = diffs
        self.cohomological = cohomological
        self.top = max(blocks)
        self._layout: dict[int, list[_Block]] = {}
        for n, groups in blocks.items():
            layout, g0, r0 = [], 0, 0
            for G in groups:
                R = G.relations
                solver = Solver(R)
                if R.ncols and solver.rank != R.ncols:
                    raise ValueError("summand relations must be injective")
                layout.append(_Block(g0, G.ngens, r0, R.ncols, solver))
                g0 += G.ngens
                r0 += R.ncols
            self._layout[n] = layout

    @property
    def step(self) -> int:
        return 1 if self.cohomological else -1

    def gens(self, n: int) -> int:
        return sum(b.ngens for b in self._layout.get(n, []))

    def rels(self, n: int) -> int:
        return sum(b.nrels for b in self._layout.get(n, []))

    def relation_matrix(self, n: int) -> SparseMatrix:
        R = SparseMatrix(self.gens(n), self.rels(n))
        for blk, G in zip(self._layout.get(n, []), self.blocks.get(n, [])):
            for j, col in enumerate(G.relations.columns()):
                for i, a in enumerate(col):
                    if a:
                        R.cols[blk.rel_offset + j][blk.gen_offset + i] = a
        return R

    def group(self, n: int) -> FgAbGroup:
        return FgAbGroup.direct_sum(self.blocks.get(n, []))

    def differential(self, n: int) -> AbHom | None:
        d = self._diff(n)
        if d is None:
            return None
        return AbHom(self.group(n), self.group(n + self.step), d.to_dense(), check=False)

    def _diff(self, n: int) -> SparseMatrix | None:
        if n < 0 or n + self.step < 0:
            return SparseMatrix(self.gens(n + self.step), self.gens(n))
        return self.diffs.get(n)

    def _block_solve(self, n: int, M: SparseMatrix) -> SparseMatrix:
        """Solve ``R_n X = M`` summand by summand."""
        out = SparseMatrix(self.rels(n), M.ncols)
        layout = self._layout.get(n, [])
        owner = {}
        for k, blk in enumerate(layout):
            for i in range(blk.gen_offset, blk.gen_offset + blk.ngens):
                owner[i] = k
        for j, col in enumerate(M.cols):
            touched = sorted({owner[i] for i in col})
            for k in touched:
                blk = layout[k]
                vec = [col.get(blk.gen_offset + i, 0) for i in range(blk.ngens)]
                x = blk.solver.solve_vector(vec)
                if x is None:
                    raise CompositionNonzero(f"lift does not land in the relations in degree {n}")
                for t, v in enumerate(x):
                    if v:
                        out.cols[j][blk.rel_offset + t] = v
        return out

    def lattice_homology(self, n: int) -> FgAbGroup:
        """(Co)homology computed directly on presentations."""
        src = n - self.step
        d_in = self.differential(src) if src >= 0 else AbHom.zero(FgAbGroup.trivial(), self.group(n))
        d_out = self.differential(n)
        if d_in is None or d_out is None:
            raise TruncationError(f"degree {n} is beyond the truncation")
        result = exactness_defect(d_in, d_out)
        if not result.composition_zero:
            raise CompositionNonzero(f"d∘d ≠ 0 at degree {n}")
        return result.defect

    def is_free(self) -> bool:
        return all(self.rels(n) == 0 for n in self.blocks)

    def model_range(self) -> range:
        """Degrees of :meth:`free_model`."""
        if self.is_free():
            return range(0, self.top + 1)
        if self.cohomological:
            return range(-1, self.top)
        return range(0, self.top + 1)

    def free_model(self) -> ChainComplex:
        """Free complex quasi-isomorphic to this one.

        Degree ``n`` is ``G_n ⊕ Rel_{n+step}`` with differential
        ``(x, y) ↦ (D x - R y, H x - E y)`` where ``D R = R E`` and
        ``D D = R H``; the relation matrices being injective makes ``E`` and
        ``H`` unique, which forces ``d ∘ d = 0``. A cochain model starts in
        degree -1, where it holds the relations of degree 0.
        """
        s = self.step
        degrees = self.model_range()
        low, top = degrees.start, degrees.stop - 1
        if self.is_free():
            dims = [self.gens(n) for n in degrees]
            diffs = {n: d for n, d in self.diffs.items() if 0 <= n + s <= top}
            return ChainComplex(dims, diffs, self.cohomological)

        def R(n):
            return self.relation_matrix(n)

        def E(m):
            # Rel_m -> Rel_{m+s}
            return self._block_solve(m + s, self._diff(m) @ R(m))

        def H(n):
            # G_n -> Rel_{n+2s}
            return self._block_solve(n + 2 * s, self._diff(n + s) @ self._diff(n))

        dims = [self.gens(n) + self.rels(n + s) for n in degrees]
        diffs = {}
        for n in degrees:
            m = n + s
            if not (low <= m <= top):
                continue
            D = self._diff(n)
            if D is None:
                continue
            parts = {(0, 0): D, (0, 1): -R(m), (1, 1): -E(m), (1, 0): H(n)}
            diffs[n] = SparseMatrix.blocks(
                [self.gens(m), self.rels(m + s)], [self.gens(n), self.rels(m)], parts
            )
        return ChainComplex(dims, diffs, self.cohomological, low=low)

    def free_model_map(self, target: PresentedComplex, gen_maps: dict[int, SparseMatrix],
                       source_model: ChainComplex, target_model: ChainComplex,
                       rel_maps: dict[int, SparseMatrix] | None = None) -> ChainMap:
        """Chain map between free models induced by a map strict on generators.

        ``rel_maps`` sends relations to relations; when omitted it is solved
        for from ``gen_maps`` (possible since the relation matrices are injective).
        """
        s = self.step
        both_free = self.is_free() and target.is_free()
        out = {}
        lo = max(source_model.low, target_model.low)
        hi = min(source_model.top, target_model.top)
        for n in range(lo, hi + 1):
            g = gen_maps.get(n, SparseMatrix(target.gens(n), self.gens(n)))
            if g.shape != (target.gens(n), self.gens(n)):
                raise ShapeError(f"generator map in degree {n} has shape {g.shape}")
            if both_free:
                out[n] = g
                continue
            m = n + s
            if rel_maps is not None and m in rel_maps:
                r = rel_maps[m]
            else:
                gm = gen_maps.get(m, SparseMatrix(target.gens(m), self.gens(m)))
                r = target._block_solve(m, gm @ self.relation_matrix(m))
            out[n] = SparseMatrix.blocks([target.gens(n), target.rels(m)], [self.gens(n), self.rels(m)],
                                         {(0, 0): g, (1, 1): r})
        return ChainMap(source_model, target_model, out)
