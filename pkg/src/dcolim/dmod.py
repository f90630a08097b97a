"""Diagrams of finitely generated abelian groups over finite categories.

Derived colimits are computed as the homology of the simplicial
replacement (bar complex) and derived limits as the cohomology of the
cosimplicial replacement (cobar complex). Values with torsion are handled
by presenting every group with an injective relation matrix and passing to
the free model of the resulting complex of presented groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .abelian import AbHom, FgAbGroup, IntMatrix, ShapeError, SparseMatrix, _dense_guard, exactness_defect
from .chains import ChainComplex, ChainMap, PresentedComplex
from .fincat import FinCategory, Functor, under_category, under_functor

__all__ = [
    "Diagram",
    "DiagramError",
    "Chain",
    "BarComplex",
    "const_diagram",
    "representable",
    "restrict",
    "reduce_mod",
    "direct_sum_diagram",
    "chains",
    "bar_complex",
    "cobar_complex",
    "derived_colim",
    "derived_lim",
    "colimit",
    "limit",
    "induced_map",
    "restriction_map",
    "tensor_over_category",
    "left_kan",
    "nerve_complex",
    "nerve_homology",
    "under_complex",
]

LEFT, RIGHT = "left", "right"


class DiagramError(ValueError):
    pass


class Diagram:
    """Functor from ``base`` to abelian groups.

    ``variance`` is ``"left"`` for a covariant functor and ``"right"`` for a
    contravariant one; for a right module ``maps[f]`` goes from the value at
    the target of ``f`` to the value at its source.
    """

    def __init__(self, base: FinCategory, groups: Mapping[str, FgAbGroup],
                 maps: Mapping[str, AbHom | IntMatrix | Sequence[Sequence[int]]],
                 variance: str = LEFT, check: bool = True):
        if variance not in (LEFT, RIGHT):
            raise DiagramError(f"variance must be 'left' or 'right', got {variance!r}")
        self.base = base
        self.variance = variance
        missing = [o for o in base.objects if o not in groups]
        if missing:
            raise DiagramError(f"no group given for objects {missing}")
        self.groups = {o: groups[o] for o in base.objects}
        self.maps: dict[str, AbHom] = {}
        for m in base.morphisms:
            a, b = base.source(m), base.target(m)
            if variance == RIGHT:
                a, b = b, a
            src, tgt = self.groups[a], self.groups[b]
            value = maps.get(m)
            if value is None:
                if base.is_identity(m):
                    value = IntMatrix.identity(src.ngens)
                else:
                    raise DiagramError(f"no map given for morphism {m}")
            if isinstance(value, AbHom):
                value = value.matrix
            if not isinstance(value, IntMatrix):
                value = IntMatrix(value, src.ngens)
            if value.shape != (tgt.ngens, src.ngens):
                raise DiagramError(f"map for {m} has shape {value.shape}, expected {(tgt.ngens, src.ngens)}")
            hom = AbHom(src, tgt, value, check=False)
            if check and not hom.is_well_defined():
                raise DiagramError(f"map for {m} does not respect the relations")
            self.maps[m] = hom
        if check:
            self.check()

    @property
    def covariant(self) -> bool:
        return self.variance == LEFT

    def group(self, o: str) -> FgAbGroup:
        return self.groups[o]

    def map(self, m: str) -> AbHom:
        return self.maps[m]

    def check(self) -> None:
        C = self.base
        for o in C.objects:
            if not self.maps[C.identity(o)].equals(AbHom.identity(self.groups[o])):
                raise DiagramError(f"identity of {o} is not sent to the identity")
        for g in C.morphisms:
            for f in C.morphisms:
                if C.source(g) != C.target(f):
                    continue
                gf = self.maps[C.compose(g, f)]
                expected = self.maps[g] @ self.maps[f] if self.covariant else self.maps[f] @ self.maps[g]
                if not gf.equals(expected):
                    raise DiagramError(f"composition {g}∘{f} is not respected")

    def opposite(self, base_op: FinCategory) -> Diagram:
        """The same data viewed over the opposite category (with flipped variance)."""
        return Diagram(base_op, self.groups, self.maps, RIGHT if self.covariant else LEFT, check=False)

    def is_free(self) -> bool:
        return all(G.relations.ncols == 0 for G in self.groups.values())

    def to_dict(self) -> dict:
        groups = {}
        for o, G in self.groups.items():
            groups[o] = {"relations": G.relations.tolist()} if G.relations.ncols else {"rank": G.ngens, "torsion": []}
            if G.relations.ncols:
                groups[o]["generators"] = G.ngens
        return {"variance": self.variance, "groups": groups,
                "maps": {m: h.matrix.tolist() for m, h in self.maps.items()}}

    @classmethod
    def from_dict(cls, data: Mapping, base: FinCategory) -> Diagram:
        groups = {}
        for o, spec in data["groups"].items():
            if "relations" in spec:
                rel = spec["relations"]
                ngens = spec.get("generators", len(rel))
                ncols = len(rel[0]) if rel else 0
                groups[o] = FgAbGroup(IntMatrix(rel, ncols) if rel else IntMatrix.zeros(ngens, 0))
            else:
                groups[o] = FgAbGroup.from_invariants(int(spec.get("rank", 0)), [int(t) for t in spec.get("torsion", [])])
        maps = {}
        for m, mat in data.get("maps", {}).items():
            if m not in base.mor_index:
                raise DiagramError(f"map given for unknown morphism {m}")
            maps[m] = mat
        # matrices for maps between zero-generator groups may be written as []
        for m in base.morphisms:
            if m in maps and not maps[m]:
                a, b = base.source(m), base.target(m)
                if data.get("variance", LEFT) == RIGHT:
                    a, b = b, a
                maps[m] = IntMatrix.zeros(groups[b].ngens, groups[a].ngens)
        return cls(base, groups, maps, data.get("variance", LEFT))

    def __repr__(self) -> str:
        return f"<Diagram {self.variance} over {self.base.name or 'C'}>"


def const_diagram(C: FinCategory, G: FgAbGroup | None = None, variance: str = LEFT) -> Diagram:
    G = G if G is not None else FgAbGroup.free(1)
    eye = IntMatrix.identity(G.ngens)
    return Diagram(C, {o: G for o in C.objects}, {m: eye for m in C.morphisms}, variance, check=False)


def representable(C: FinCategory, c: str, variance: str = LEFT) -> Diagram:
    """``ℤC(c, -)`` (left) or ``ℤC(-, c)`` (right); bases are the hom-sets in table order."""
    homs = {x: (C.hom(c, x) if variance == LEFT else C.hom(x, c)) for x in C.objects}
    groups = {x: FgAbGroup.free(len(h)) for x, h in homs.items()}
    maps = {}
    for m in C.morphisms:
        a, b = C.source(m), C.target(m)
        if variance == LEFT:
            src, tgt = homs[a], homs[b]
            pos = {u: i for i, u in enumerate(tgt)}
            cols = [[0] * len(tgt) for _ in src]
            for j, u in enumerate(src):
                cols[j][pos[C.compose(m, u)]] = 1
        else:
            src, tgt = homs[b], homs[a]
            pos = {u: i for i, u in enumerate(tgt)}
            cols = [[0] * len(tgt) for _ in src]
            for j, u in enumerate(src):
                cols[j][pos[C.compose(u, m)]] = 1
        maps[m] = IntMatrix.from_columns(cols, len(tgt))
    return Diagram(C, groups, maps, variance, check=False)


def restrict(M: Diagram, F: Functor) -> Diagram:
    """``F*M = M ∘ F``."""
    if not M.base.same_as(F.codomain):
        raise DiagramError("diagram base differs from the functor's codomain")
    D = F.domain
    groups = {d: M.groups[F.obj(d)] for d in D.objects}
    maps = {g: M.maps[F.mor(g)] for g in D.morphisms}
    return Diagram(D, groups, maps, M.variance, check=False)


def reduce_mod(M: Diagram, k: int) -> Diagram:
    """``M ⊗ ℤ/k``."""
    groups = {}
    for o, G in M.groups.items():
        groups[o] = FgAbGroup(G.relations.hstack(IntMatrix.identity(G.ngens).scale(k)))
    return Diagram(M.base, groups, {m: h.matrix for m, h in M.maps.items()}, M.variance, check=False)


def direct_sum_diagram(parts: Sequence[Diagram]) -> Diagram:
    base = parts[0].base
    groups = {o: FgAbGroup.direct_sum([P.groups[o] for P in parts]) for o in base.objects}
    maps = {m: IntMatrix.block_diag([P.maps[m].matrix for P in parts]) for m in base.morphisms}
    return Diagram(base, groups, maps, parts[0].variance, check=False)


# --- chains of composable morphisms ----------------------------------------

@dataclass(frozen=True)
class Chain:
    """A chain ``c0 -f1-> c1 -> ... -fn-> cn`` stored by indices."""

    start: int
    arrows: tuple[int, ...]

    def label(self, C: FinCategory) -> str:
        if not self.arrows:
            return C.objects[self.start]
        return "(" + ", ".join(C.morphisms[a] for a in self.arrows) + ")"


def chains(C: FinCategory, n: int, normalized: bool = True) -> list[Chain]:
    """All n-chains, ordered lexicographically by object/morphism identifiers."""
    if n == 0:
        return [Chain(i, ()) for i in sorted(range(len(C.objects)), key=lambda i: C.objects[i])]
    ids = set(C.ident)
    allowed = [m for m in range(len(C.morphisms)) if not (normalized and m in ids)]
    out_from: dict[int, list[int]] = {}
    for m in allowed:
        out_from.setdefault(C.src[m], []).append(m)
    for lst in out_from.values():
        lst.sort(key=lambda m: C.morphisms[m])
    seqs = [(m,) for m in sorted(allowed, key=lambda m: C.morphisms[m])]
    for _ in range(n - 1):
        seqs = [s + (m,) for s in seqs for m in out_from.get(C.dst[s[-1]], [])]
    return [Chain(C.src[s[0]], s) for s in seqs]


def _faces(C: FinCategory, ch: Chain, normalized: bool) -> list[tuple[int, Chain | None]]:
    """Faces ``d_0 .. d_n`` of a chain; ``None`` marks a degenerate face in normalized mode."""
    a = ch.arrows
    n = len(a)
    out: list[tuple[int, Chain | None]] = []
    if n == 0:
        return out
    out.append((0, Chain(C.dst[a[0]], a[1:])))
    for i in range(1, n):
        h = C.table[a[i]][a[i - 1]]
        if normalized and C.ident[C.src[h]] == h:
            out.append((i, None))
        else:
            out.append((i, Chain(ch.start, a[: i - 1] + (h,) + a[i + 1:])))
    out.append((n, Chain(ch.start, a[:-1])))
    return out


def _presented(G: FgAbGroup) -> FgAbGroup:
    if G.relations.ncols == 0:
        return G
    return FgAbGroup(G.injective_relations)


@dataclass
class BarComplex:
    """(Co)bar complex of a diagram with its chain bases and free model.

    ``model`` computes colimₙ (resp. limⁿ) for ``n`` in ``model.valid_degrees()``.
    """

    diagram: Diagram
    normalized: bool
    cohomological: bool
    chains: dict[int, list[Chain]]
    offsets: dict[int, list[int]]
    presented: PresentedComplex
    model: ChainComplex

    def index(self, n: int) -> dict[Chain, int]:
        return {ch: k for k, ch in enumerate(self.chains[n])}

    def homology(self, n: int) -> FgAbGroup:
        return self.model.homology_group(n)

    def generator_map(self, other: BarComplex, chain_map) -> dict[int, SparseMatrix]:
        """Generator-level map sending the block of a chain ``σ`` identically to the
        block of ``chain_map(σ)`` (``None`` means zero)."""
        out = {}
        for n in self.chains:
            if n not in other.chains:
                continue
            idx = other.index(n)
            M = SparseMatrix(other.presented.gens(n), self.presented.gens(n))
            for k, ch in enumerate(self.chains[n]):
                img = chain_map(ch)
                if img is None:
                    continue
                src0 = self.offsets[n][k]
                tgt0 = other.offsets[n][idx[img]]
                size = self.offsets[n][k + 1] - src0
                for t in range(size):
                    M.cols[src0 + t][tgt0 + t] = 1
            out[n] = M
        return out


def _block_columns(h: AbHom) -> list[list[int]]:
    return h.matrix.columns()


def bar_complex(M: Diagram, top: int, normalized: bool = True) -> BarComplex:
    """Simplicial replacement of a left module through degree ``top``.

    Degree ``n`` is the sum over n-chains of the value at the chain's start;
    ``d = Σ (-1)^i d_i`` with ``d_0`` pushing along the first arrow.
    """
    if not M.covariant:
        raise DiagramError("bar_complex needs a left (covariant) module")
    C = M.base
    groups = {o: _presented(G) for o, G in M.groups.items()}
    ch = {n: chains(C, n, normalized) for n in range(top + 1)}
    offsets = {}
    for n, lst in ch.items():
        off = [0]
        for c in lst:
            off.append(off[-1] + groups[C.objects[c.start]].ngens)
        offsets[n] = off
    diffs = {}
    mats = {m: _block_columns(M.maps[m]) for m in C.morphisms}
    for n in range(1, top + 1):
        idx = {c: k for k, c in enumerate(ch[n - 1])}
        D = SparseMatrix(offsets[n - 1][-1], offsets[n][-1])
        for k, c in enumerate(ch[n]):
            base = offsets[n][k]
            ngen = offsets[n][k + 1] - base
            for i, face in _faces(C, c, normalized):
                if face is None:
                    continue
                sign = -1 if i % 2 else 1
                t0 = offsets[n - 1][idx[face]]
                if i == 0:
                    cols = mats[C.morphisms[c.arrows[0]]]
                    for j in range(ngen):
                        for r, v in enumerate(cols[j]):
                            if v:
                                D.add_entry(t0 + r, base + j, sign * v)
                else:
                    for j in range(ngen):
                        D.add_entry(t0 + j, base + j, sign)
        diffs[n] = D
    blocks = {n: [groups[C.objects[c.start]] for c in lst] for n, lst in ch.items()}
    P = PresentedComplex(blocks, diffs)
    return BarComplex(M, normalized, False, ch, offsets, P, P.free_model())


def cobar_complex(L: Diagram, top: int, normalized: bool = True) -> BarComplex:
    """Cosimplicial replacement of a right module through degree ``top``.

    Degree ``n`` is the product over n-chains ``c0 → ... → cn`` of ``L(c0)``;
    ``(δφ)(c0 → ... → c_{n+1}) = L(f1) φ(d_0) + Σ_{0<i≤n+1} (-1)^i φ(d_i)``.
    """
    if L.covariant:
        raise DiagramError("cobar_complex needs a right (contravariant) module")
    C = L.base
    groups = {o: _presented(G) for o, G in L.groups.items()}
    ch = {n: chains(C, n, normalized) for n in range(top + 1)}
    offsets = {}
    for n, lst in ch.items():
        off = [0]
        for c in lst:
            off.append(off[-1] + groups[C.objects[c.start]].ngens)
        offsets[n] = off
    mats = {m: _block_columns(L.maps[m]) for m in C.morphisms}
    diffs = {}
    for n in range(top):
        idx = {c: k for k, c in enumerate(ch[n])}
        D = SparseMatrix(offsets[n + 1][-1], offsets[n][-1])
        for k, tau in enumerate(ch[n + 1]):
            row0 = offsets[n + 1][k]
            for i, face in _faces(C, tau, normalized):
                if face is None:
                    continue
                sign = -1 if i % 2 else 1
                s0 = offsets[n][idx[face]]
                ngen = offsets[n][idx[face] + 1] - s0
                if i == 0:
                    cols = mats[C.morphisms[tau.arrows[0]]]
                    for j in range(ngen):
                        for r, v in enumerate(cols[j]):
                            if v:
                                D.add_entry(row0 + r, s0 + j, sign * v)
                else:
                    for j in range(ngen):
                        D.add_entry(row0 + j, s0 + j, sign)
        diffs[n] = D
    blocks = {n: [groups[C.objects[c.start]] for c in lst] for n, lst in ch.items()}
    P = PresentedComplex(blocks, diffs, cohomological=True)
    return BarComplex(L, normalized, True, ch, offsets, P, P.free_model())


def _as_left(M: Diagram) -> Diagram:
    if M.covariant:
        return M
    from .fincat import opposite
    return M.opposite(opposite(M.base))


def _as_right(L: Diagram) -> Diagram:
    if not L.covariant:
        return L
    from .fincat import opposite
    return L.opposite(opposite(L.base))


def colim_top(N: int) -> int:
    """Bar degree needed for colimₙ through ``N``."""
    return N + 1


def lim_top(N: int, L: Diagram) -> int:
    """Cobar degree needed for limⁿ through ``N``."""
    return N + 1 if L.is_free() else N + 2


def derived_colim(M: Diagram, N: int, normalized: bool = True) -> list[FgAbGroup]:
    """``[colim₀ M, ..., colim_N M]``; a right module is read over the opposite category."""
    B = bar_complex(_as_left(M), colim_top(N), normalized)
    return [B.homology(n) for n in range(N + 1)]


def derived_lim(L: Diagram, N: int, normalized: bool = True) -> list[FgAbGroup]:
    """``[lim⁰ L, ..., lim^N L]``; a left module is read over the opposite category."""
    L = _as_right(L)
    B = cobar_complex(L, lim_top(N, L), normalized)
    return [B.homology(n) for n in range(N + 1)]


def colimit(M: Diagram) -> FgAbGroup:
    """Ordinary colimit as a coequalizer: ``⊕ M(c)`` modulo ``M(f)x - x``."""
    M = _as_left(M)
    C = M.base
    off, pos = 0, {}
    for o in C.objects:
        pos[o] = off
        off += M.groups[o].ngens
    rels = []
    for o in C.objects:
        for col in M.groups[o].relations.columns():
            v = [0] * off
            v[pos[o]:pos[o] + len(col)] = col
            rels.append(v)
    for m in C.non_identities():
        a, b = C.source(m), C.target(m)
        cols = M.maps[m].matrix.columns()
        for j in range(M.groups[a].ngens):
            v = [0] * off
            for r, x in enumerate(cols[j]):
                v[pos[b] + r] += x
            v[pos[a] + j] -= 1
            rels.append(v)
    return FgAbGroup(IntMatrix.from_columns(rels, off) if rels else IntMatrix.zeros(off, 0))


def limit(L: Diagram) -> FgAbGroup:
    """Ordinary limit as an equalizer: compatible families in ``∏ L(c)``."""
    L = _as_right(L)
    C = L.base
    src = FgAbGroup.direct_sum([L.groups[o] for o in C.objects])
    pos, off = {}, 0
    for o in C.objects:
        pos[o] = off
        off += L.groups[o].ngens
    mors = C.non_identities()
    tgt = FgAbGroup.direct_sum([L.groups[C.source(m)] for m in mors])
    rows = []
    for m in mors:
        a, b = C.source(m), C.target(m)
        mat = L.maps[m].matrix
        for r in range(L.groups[a].ngens):
            row = [0] * off
            for j in range(L.groups[b].ngens):
                row[pos[b] + j] += mat[r, j]
            row[pos[a] + r] -= 1
            rows.append(row)
    return AbHom(src, tgt, IntMatrix(rows, off), check=False).kernel()


# --- induced maps ------------------------------------------------------------

def _image_chain(F: Functor, ch: Chain, normalized: bool) -> Chain | None:
    C = F.codomain
    arrows = tuple(F.mor_idx[a] for a in ch.arrows)
    if normalized and any(C.ident[C.src[a]] == a for a in arrows):
        return None
    return Chain(F.obj_idx[ch.start], arrows)


@dataclass
class InducedMap:
    chain_map: ChainMap
    source: BarComplex
    target: BarComplex

    def on_homology(self, n: int) -> AbHom:
        return self.chain_map.induced(n)


def induced_map(F: Functor, M: Diagram, top: int, normalized: bool = True,
                source: BarComplex | None = None, target: BarComplex | None = None) -> InducedMap:
    """``F_*: bar(D, F*M) → bar(C, M)``, ``(d0 → ... → dn; m) ↦ (F d0 → ... → F dn; m)``."""
    src = source or bar_complex(restrict(M, F), top, normalized)
    tgt = target or bar_complex(M, top, normalized)
    gm = src.generator_map(tgt, lambda ch: _image_chain(F, ch, normalized))
    cm = src.presented.free_model_map(tgt.presented, gm, src.model, tgt.model)
    return InducedMap(cm, src, tgt)


def restriction_map(F: Functor, L: Diagram, top: int, normalized: bool = True,
                    source: BarComplex | None = None, target: BarComplex | None = None) -> InducedMap:
    """``F*: cobar(C, L) → cobar(D, F*L)``, ``(F*φ)(σ) = φ(F σ)``."""
    src = source or cobar_complex(L, top, normalized)
    tgt = target or cobar_complex(restrict(L, F), top, normalized)
    gm = {}
    for n in tgt.chains:
        if n not in src.chains:
            continue
        idx = src.index(n)
        Mx = SparseMatrix(tgt.presented.gens(n), src.presented.gens(n))
        for k, ch in enumerate(tgt.chains[n]):
            img = _image_chain(F, ch, normalized)
            if img is None:
                continue
            r0 = tgt.offsets[n][k]
            c0 = src.offsets[n][idx[img]]
            for t in range(tgt.offsets[n][k + 1] - r0):
                Mx.cols[c0 + t][r0 + t] = 1
        gm[n] = Mx
    cm = src.presented.free_model_map(tgt.presented, gm, src.model, tgt.model)
    return InducedMap(cm, src, tgt)


# --- tensor products over a category -----------------------------------------

@dataclass
class TensorPresentation:
    group: FgAbGroup
    offsets: dict[str, int]


def _tensor_presentation(L: Diagram, M: Diagram) -> TensorPresentation:
    if L.covariant or not M.covariant:
        raise DiagramError("tensor product needs a right module and a left module")
    if not L.base.same_as(M.base):
        raise DiagramError("tensor factors live over different categories")
    C = L.base
    offsets, off = {}, 0
    for o in C.objects:
        offsets[o] = off
        off += L.groups[o].ngens * M.groups[o].ngens
    rels: list[dict[int, int]] = []

    def gen(o, i, j):
        return offsets[o] + i * M.groups[o].ngens + j

    def add(v):
        v = {k: x for k, x in v.items() if x}
        if v:
            rels.append(v)

    for o in C.objects:
        A, B = L.groups[o], M.groups[o]
        for col in A.relations.columns():
            for j in range(B.ngens):
                add({gen(o, i, j): x for i, x in enumerate(col) if x})
        for col in B.relations.columns():
            for i in range(A.ngens):
                add({gen(o, i, j): x for j, x in enumerate(col) if x})
    for f in C.non_identities():
        a, b = C.source(f), C.target(f)
        Lf = L.maps[f].matrix.columns()   # L(b) -> L(a)
        Mf = M.maps[f].matrix.columns()   # M(a) -> M(b)
        for i in range(L.groups[b].ngens):
            for j in range(M.groups[a].ngens):
                v: dict[int, int] = {}
                for r, x in enumerate(Lf[i]):
                    if x:
                        v[gen(a, r, j)] = v.get(gen(a, r, j), 0) + x
                for r, x in enumerate(Mf[j]):
                    if x:
                        v[gen(b, i, r)] = v.get(gen(b, i, r), 0) - x
                add(v)
    _dense_guard(off, len(rels))
    cols = []
    for v in rels:
        col = [0] * off
        for k, x in v.items():
            col[k] = x
        cols.append(col)
    G = FgAbGroup(IntMatrix.from_columns(cols, off) if cols else IntMatrix.zeros(off, 0))
    return TensorPresentation(G, offsets)


def tensor_over_category(L: Diagram, M: Diagram) -> FgAbGroup:
    """``L ⊗_C M``: the coequalizer of the two actions of the morphisms of C."""
    return _tensor_presentation(L, M).group


def _tensor_map(eta: Mapping[str, AbHom], L: Diagram, L2: Diagram, M: Diagram,
                P: TensorPresentation, P2: TensorPresentation) -> AbHom:
    """``η ⊗ M: L ⊗ M → L2 ⊗ M`` for a natural transformation ``η: L → L2``."""
    C = L.base
    cols = []
    for o in C.objects:
        E = eta[o].matrix.columns()
        nm = M.groups[o].ngens
        for i in range(L.groups[o].ngens):
            for j in range(nm):
                v = [0] * P2.group.ngens
                for r, x in enumerate(E[i]):
                    if x:
                        v[P2.offsets[o] + r * nm + j] += x
                cols.append(v)
    return AbHom(P.group, P2.group, IntMatrix.from_columns(cols, P2.group.ngens), check=False)


def left_kan(L: Diagram, F: Functor) -> Diagram:
    """``F_!L``: the right C-module ``c ↦ L ⊗_D ℤC(c, F-)``."""
    if L.covariant:
        raise DiagramError("left_kan expects a right module")
    D, C = F.domain, F.codomain

    def homs(c):
        # left D-module d ↦ ℤC(c, F d)
        hs = {d: C.hom(c, F.obj(d)) for d in D.objects}
        maps = {}
        for g in D.morphisms:
            a, b = D.source(g), D.target(g)
            pos = {u: i for i, u in enumerate(hs[b])}
            Fg = F.mor(g)
            cols = [[0] * len(hs[b]) for _ in hs[a]]
            for j, u in enumerate(hs[a]):
                cols[j][pos[C.compose(Fg, u)]] = 1
            maps[g] = IntMatrix.from_columns(cols, len(hs[b]))
        return hs, Diagram(D, {d: FgAbGroup.free(len(h)) for d, h in hs.items()}, maps, LEFT, check=False)

    data = {c: homs(c) for c in C.objects}
    pres = {c: _tensor_presentation(L, data[c][1]) for c in C.objects}
    groups = {c: pres[c].group for c in C.objects}
    maps = {}
    for h in C.morphisms:
        # h: c -> c' induces ℤC(c', F-) -> ℤC(c, F-) by precomposition, hence F_!L(c') -> F_!L(c)
        c, c2 = C.source(h), C.target(h)
        hs_c, _ = data[c]
        hs_c2, _ = data[c2]
        P, P2 = pres[c2], pres[c]
        cols = []
        for o in D.objects:
            pos = {u: i for i, u in enumerate(hs_c[o])}
            nm2, nm = len(hs_c2[o]), len(hs_c[o])
            for i in range(L.groups[o].ngens):
                for j in range(nm2):
                    v = [0] * P2.group.ngens
                    v[P2.offsets[o] + i * nm + pos[C.compose(hs_c2[o][j], h)]] = 1
                    cols.append(v)
        maps[h] = IntMatrix.from_columns(cols, P2.group.ngens)
    return Diagram(C, groups, maps, RIGHT, check=False)


# --- nerve -------------------------------------------------------------------

def nerve_complex(C: FinCategory, top: int) -> ChainComplex:
    """Normalized simplicial chains of the nerve, built from composable strings."""
    # simplices as tuples of morphism identifiers; vertices as 1-tuples of objects
    ids = {C.identity(o) for o in C.objects}
    simplices: list[list[tuple]] = [[(o,) for o in C.objects]]
    nonid = [m for m in C.morphisms if m not in ids]
    if top >= 1:
        simplices.append([(m,) for m in nonid])
    for n in range(2, top + 1):
        simplices.append([s + (m,) for s in simplices[-1] for m in nonid if C.source(m) == C.target(s[-1])])
    index = [{s: k for k, s in enumerate(level)} for level in simplices]

    def face(s: tuple, i: int, n: int):
        if n == 1:
            return (C.target(s[0]),) if i == 0 else (C.source(s[0]),)
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        h = C.compose(s[i], s[i - 1])
        return None if h in ids else s[: i - 1] + (h,) + s[i + 1:]

    diffs = {}
    for n in range(1, top + 1):
        D = SparseMatrix(len(simplices[n - 1]), len(simplices[n]))
        for k, s in enumerate(simplices[n]):
            for i in range(n + 1):
                f = face(s, i, n)
                if f is not None:
                    D.add_entry(index[n - 1][f], k, (-1) ** i)
        diffs[n] = D
    return ChainComplex([len(level) for level in simplices], diffs)


def nerve_homology(C: FinCategory, N: int) -> list[FgAbGroup]:
    """Integral homology of the nerve of C in degrees ``0..N``."""
    cx = nerve_complex(C, N + 1)
    return [cx.homology_group(n) for n in range(N + 1)]


# --- the complex ℤN(-/F) ⊗_C M ------------------------------------------------

def under_complex(F: Functor, M: Diagram, N: int) -> list[FgAbGroup]:
    """Homology of ``ℤN(-/F) ⊗_C M`` in degrees ``0..N``, built without absorbing the coend.

    For each object c the nerve of the under category c/F is enumerated,
    the arrows of C act through the functors c'/F → c/F, and each degree is
    a tensor product over C computed as a coequalizer. Homology is taken on
    the resulting presentations.
    """
    if not M.covariant:
        raise DiagramError("under_complex needs a left module")
    C = F.codomain
    unders = {c: under_category(c, F) for c in C.objects}
    simp = {c: [chains(unders[c].category, n) for n in range(N + 2)] for c in C.objects}
    acts = {h: under_functor(h, F, unders[C.target(h)], unders[C.source(h)])[0] for h in C.morphisms}

    def level(n):
        # right C-module c ↦ ℤ{non-degenerate n-simplices of N(c/F)}
        groups, maps = {}, {}
        idx = {c: {s: k for k, s in enumerate(simp[c][n])} for c in C.objects}
        for c in C.objects:
            groups[c] = FgAbGroup.free(len(simp[c][n]))
        for h in C.morphisms:
            G = acts[h]  # c'/F → c/F for h: c → c'
            a, b = C.source(h), C.target(h)
            cols = []
            for s in simp[b][n]:
                img = Chain(G.obj_idx[s.start], tuple(G.mor_idx[x] for x in s.arrows))
                v = [0] * len(simp[a][n])
                v[idx[a][img]] = 1
                cols.append(v)
            maps[h] = IntMatrix.from_columns(cols, len(simp[a][n]))
        return Diagram(C, groups, maps, RIGHT, check=False), idx

    levels = [level(n) for n in range(N + 2)]
    pres = [_tensor_presentation(S, M) for S, _ in levels]
    diffs = []
    for n in range(1, N + 2):
        S, _ = levels[n]
        S2, idx2 = levels[n - 1]
        eta = {}
        for c in C.objects:
            U = unders[c].category
            cols = []
            for s in simp[c][n]:
                v = [0] * len(simp[c][n - 1])
                for i, face in _faces(U, s, True):
                    if face is not None:
                        v[idx2[c][face]] += (-1) ** i
                cols.append(v)
            eta[c] = AbHom(S.groups[c], S2.groups[c], IntMatrix.from_columns(cols, len(simp[c][n - 1])), check=False)
        diffs.append(_tensor_map(eta, S, S2, M, pres[n], pres[n - 1]))
    out = []
    for n in range(N + 1):
        d_out = diffs[n - 1] if n else AbHom.zero(pres[0].group, FgAbGroup.trivial())
        d_in = diffs[n]
        res = exactness_defect(d_in, d_out)
        if not res.composition_zero:
            raise ShapeError(f"d∘d ≠ 0 in the under-category complex at degree {n}")
        out.append(res.defect)
    return out
