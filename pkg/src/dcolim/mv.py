"""Mayer–Vietoris sequences of pushout squares of categories.

Given a commutative square ``C0 → C1, C0 → C2, C1 → C, C2 → C`` and a
diagram M on C, the sequence

    … → colimₙ^{C0} →α colimₙ^{C1} ⊕ colimₙ^{C2} →β colimₙ^{C} →∂ colimₙ₋₁^{C0} → …

exists when the double mapping cone P of the bar complexes of the legs maps
quasi-isomorphically onto the bar complex of C. This module builds P and the
comparison map, decides the quasi-isomorphism degree by degree, constructs ∂
by lifting cycles, and reports exactness node by node. It also checks the
local covering hypothesis on under categories.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .abelian import AbHom, FgAbGroup, IntMatrix, Solver, SparseMatrix, exactness_defect, _subscript, _superscript
from .chains import ChainComplex, ChainMap, Homology, cone, direct_sum, join_maps, stack_maps
from .constructions import adjoin_initial, adjoin_terminal, cyclic_group, inclusion, poset
from .dmod import (
    BarComplex,
    Diagram,
    DiagramError,
    bar_complex,
    cobar_complex,
    const_diagram,
    induced_map,
    nerve_homology,
    restrict,
    restriction_map,
)
from .fincat import (
    FinCategory,
    Functor,
    PushoutSquare,
    injective_on_objects,
    pi0,
    pushout,
    under_category,
    under_functor,
)

__all__ = [
    "UnderRecord",
    "LocalCoveringVerdict",
    "CoveringVerdict",
    "HypothesisReport",
    "Node",
    "MVReport",
    "local_covering_check",
    "covering_check",
    "theorem1_hypotheses",
    "HomotopyPushout",
    "homotopy_pushout_complex",
    "mv_verify",
    "mv_verify_lim",
    "mv_predict",
    "counterexample_repro",
]

CERTIFIED = "certified"
HOMOLOGY_CONSISTENT = "homology-consistent"
FAILED = "failed"


# --- local coverings -----------------------------------------------------------

def _components(C: FinCategory) -> list[list[str]]:
    return pi0(C)


def _has_initial(C: FinCategory, objs: Sequence[str]) -> bool:
    return any(all(len(C.hom(x, y)) == 1 for y in objs) for x in objs)


def _has_terminal(C: FinCategory, objs: Sequence[str]) -> bool:
    return any(all(len(C.hom(y, x)) == 1 for y in objs) for x in objs)


def _trivial_automorphisms_groupoid(C: FinCategory) -> bool:
    return C.is_groupoid() and all(len(C.hom(x, x)) == 1 for x in C.objects)


@dataclass
class UnderRecord:
    """What is known about one under category ``c/F``."""

    object: str
    objects: int
    morphisms: int
    components: int
    certificate: str | None
    reduced_homology: list[FgAbGroup]
    pi1: str

    @property
    def failure(self) -> tuple[int, FgAbGroup] | None:
        for n, G in enumerate(self.reduced_homology, start=1):
            if not G.is_trivial():
                return n, G
        return None

    def to_dict(self) -> dict:
        return {
            "object": self.object,
            "objects": self.objects,
            "morphisms": self.morphisms,
            "components": self.components,
            "certificate": self.certificate or "homology-only",
            "reduced_homology": {str(n): str(G) for n, G in enumerate(self.reduced_homology, start=1)},
            "pi1": self.pi1,
        }


@dataclass
class LocalCoveringVerdict:
    functor: str
    degree: int
    records: list[UnderRecord]
    groupoid_rule: bool

    @property
    def status(self) -> str:
        if any(r.failure for r in self.records):
            return FAILED
        if all(r.certificate for r in self.records):
            return CERTIFIED
        return HOMOLOGY_CONSISTENT

    @property
    def witness(self) -> tuple[str, int, FgAbGroup] | None:
        for r in self.records:
            if r.failure:
                n, G = r.failure
                return r.object, n, G
        return None

    def to_dict(self) -> dict:
        out = {
            "functor": self.functor,
            "status": self.status,
            "degree": self.degree,
            "groupoid_rule": self.groupoid_rule,
            "objects": [r.to_dict() for r in self.records],
        }
        w = self.witness
        if w:
            out["witness"] = {"object": w[0], "degree": w[1], "group": str(w[2])}
        return out


def local_covering_check(F: Functor, N: int = 3) -> LocalCoveringVerdict:
    """Check that every under category ``c/F`` is homotopically discrete.

    Structural certificates come first (an initial object in every
    component, or a terminal one; a groupoid without nontrivial automorphisms; F a faithful
    functor between groupoids). Independently, the reduced nerve homology of
    every ``c/F`` is computed in degrees ``1..N``; a nonzero group is a
    definite failure. π₁ is probed only through its abelianization ``H₁``.
    """
    groupoid_rule = F.domain.is_groupoid() and F.codomain.is_groupoid() and F.is_faithful()
    records = []
    for c in F.codomain.objects:
        U = under_category(c, F).category
        comps = _components(U)
        if groupoid_rule:
            cert = "faithful-groupoid-functor"
        elif all(_has_initial(U, comp) for comp in comps):
            cert = "initial-object-per-component"
        elif all(_has_terminal(U, comp) for comp in comps):
            cert = "terminal-object-per-component"
        elif _trivial_automorphisms_groupoid(U):
            cert = "groupoid-with-trivial-automorphisms"
        else:
            cert = None
        hom = nerve_homology(U, N)[1:] if U.objects else [FgAbGroup.trivial() for _ in range(N)]
        if hom and not hom[0].is_trivial():
            pi1 = "nontrivial-abelianization"
        elif cert:
            pi1 = "trivial"
        else:
            pi1 = "inconclusive"
        records.append(UnderRecord(c, len(U.objects), len(U.morphisms), len(comps), cert, hom, pi1))
    return LocalCoveringVerdict(F.name or "F", N, records, groupoid_rule)


@dataclass
class CoveringVerdict:
    functor: str
    local: LocalCoveringVerdict
    covering: bool | None
    failures: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "functor": self.functor,
            "local_covering": self.local.status,
            "covering": self.covering,
            "failures": self.failures,
            "local": self.local.to_dict(),
        }


def covering_check(F: Functor, N: int = 3) -> CoveringVerdict:
    """Local covering whose arrow-induced functors ``c/F → c'/F`` are bijective on π₀.

    ``covering`` is ``None`` when the local covering check already failed.
    """
    local = local_covering_check(F, N)
    if local.status == FAILED:
        return CoveringVerdict(F.name or "F", local, None)
    C = F.codomain
    unders = {c: under_category(c, F) for c in C.objects}
    comps = {c: pi0(U.category) for c, U in unders.items()}
    comp_of = {c: {o: k for k, comp in enumerate(cs) for o in comp} for c, cs in comps.items()}
    failures = []
    for h in C.non_identities():
        a, b = C.source(h), C.target(h)
        G, _, _ = under_functor(h, F, unders[b], unders[a])
        image = {}
        for o in unders[b].category.objects:
            image.setdefault(comp_of[b][o], set()).add(comp_of[a][G.obj(o)])
        hits = [next(iter(v)) for v in image.values()]
        injective = len(set(hits)) == len(hits)
        surjective = set(hits) == set(range(len(comps[a])))
        if not (injective and surjective):
            failures.append({
                "arrow": h,
                "source_components": len(comps[b]),
                "target_components": len(comps[a]),
                "injective": injective,
                "surjective": surjective,
            })
    return CoveringVerdict(F.name or "F", local, not failures, failures)


@dataclass
class HypothesisReport:
    injective: dict[str, bool]
    local: dict[str, LocalCoveringVerdict]

    @property
    def holds(self) -> bool:
        return any(self.injective.values()) and all(v.status != FAILED for v in self.local.values())

    @property
    def strength(self) -> str:
        if not self.holds:
            return FAILED
        if all(v.status == CERTIFIED for v in self.local.values()):
            return "structural"
        return "homology-only"

    @property
    def failing(self) -> list[str]:
        out = []
        if not any(self.injective.values()):
            out.append("injective-on-objects")
        out.extend(k for k, v in self.local.items() if v.status == FAILED)
        return out

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "strength": self.strength,
            "failing": self.failing,
            "injective_on_objects": dict(self.injective),
            "local_coverings": {k: v.to_dict() for k, v in self.local.items()},
        }


def theorem1_hypotheses(square: PushoutSquare, N: int = 3) -> HypothesisReport:
    """One of F1, F2 injective on objects and I1, I2, I0 local coverings."""
    inj = {"F1": injective_on_objects(square.F1), "F2": injective_on_objects(square.F2)}
    funcs = {"I1": square.I1, "I2": square.I2, "I0": square.I0}
    local = {}
    for k, F in funcs.items():
        v = local_covering_check(F, N)
        v.functor = k
        local[k] = v
    return HypothesisReport(inj, local)


# --- the homotopy pushout --------------------------------------------------------

def _sum_label(side: str, n: int) -> str:
    return f"{_node_label(side, 'C1', n)} ⊕ {_node_label(side, 'C2', n)}"


_CAT_TEXT = {"C0": "C₀", "C1": "C₁", "C2": "C₂", "C": "C"}


def _node_label(side: str, cat: str, n: int) -> str:
    if cat == "C1+C2":
        return _sum_label(side, n)
    if side == "colim":
        return f"colim{_subscript(n)}^{{{_CAT_TEXT[cat]}}}"
    return f"lim{_superscript(n)}_{{{_CAT_TEXT[cat]}}}"


@dataclass
class HomotopyPushout:
    """``P = Cone(α)`` for ``α = (F1_*, F2_*)`` on bar complexes (or its dual for limits)."""

    side: str
    complex: ChainComplex
    bars: dict[str, BarComplex]
    alpha: ChainMap
    legs: ChainComplex

    def homology(self, N: int) -> list[FgAbGroup]:
        return [self.complex.homology_group(n) for n in range(N + 1)]


def _check_legs(F1: Functor, F2: Functor, M1: Diagram, M2: Diagram) -> Diagram:
    if not F1.domain.same_as(F2.domain):
        raise DiagramError("the two legs have different domains")
    A, B = restrict(M1, F1), restrict(M2, F2)
    for o in A.base.objects:
        if A.groups[o].relations != B.groups[o].relations:
            raise DiagramError(f"restrictions of the leg diagrams differ at object {o}")
    for m in A.base.morphisms:
        if A.maps[m].matrix != B.maps[m].matrix:
            raise DiagramError(f"restrictions of the leg diagrams differ at morphism {m}")
    return A


def homotopy_pushout_complex(F1: Functor, F2: Functor, M1: Diagram, M2: Diagram, top: int) -> HomotopyPushout:
    """Double mapping cone of ``bar(C0) → bar(C1) ⊕ bar(C2)`` with bar complexes through ``top``.

    ``P_n = bar(C0)_{n-1} ⊕ bar(C1)_n ⊕ bar(C2)_n`` and
    ``d(a, u, v) = (-d a, d u - F1_* a, d v - F2_* a)``.
    """
    M0 = _check_legs(F1, F2, M1, M2)
    b0 = bar_complex(M0, top)
    b1 = bar_complex(M1, top)
    b2 = bar_complex(M2, top)
    f1 = induced_map(F1, M1, top, source=b0, target=b1).chain_map
    f2 = induced_map(F2, M2, top, source=b0, target=b2).chain_map
    legs = direct_sum([b1.model, b2.model])
    alpha = stack_maps([f1, f2], legs)
    P = cone(alpha)
    return HomotopyPushout("colim", P.complex, {"C0": b0, "C1": b1, "C2": b2}, alpha, legs)


def _cocone(f: ChainMap) -> ChainComplex:
    """For cochain complexes: ``Q^n = A^n ⊕ B^{n-1}``, ``δ(a, b) = (δa, f a - δb)``."""
    A, B = f.source, f.target
    low = min(A.low, B.low + 1)
    top = min(A.top, B.top + 1)
    dims = [A.dim(n) + B.dim(n - 1) for n in range(low, top + 1)]
    diffs = {}
    for n in range(low, top):
        dA, dB, fn = A.outgoing(n), B.outgoing(n - 1), f.at(n)
        if dA is None or dB is None or fn is None:
            continue
        diffs[n] = SparseMatrix.blocks([A.dim(n + 1), B.dim(n)], [A.dim(n), B.dim(n - 1)],
                                       {(0, 0): dA, (1, 0): fn, (1, 1): -dB})
    return ChainComplex(dims, diffs, True, low=low)


def homotopy_pullback_complex(F1: Functor, F2: Functor, L1: Diagram, L2: Diagram, top: int) -> HomotopyPushout:
    """``Q^n = cobar(C1)^n ⊕ cobar(C2)^n ⊕ cobar(C0)^{n-1}``, ``δ(u, v, w) = (δu, δv, F1*u - F2*v - δw)``."""
    L0 = _check_legs(F1, F2, L1, L2)
    x0 = cobar_complex(L0, top)
    x1 = cobar_complex(L1, top)
    x2 = cobar_complex(L2, top)
    r1 = restriction_map(F1, L1, top, source=x1, target=x0).chain_map
    r2 = restriction_map(F2, L2, top, source=x2, target=x0).chain_map
    legs = direct_sum([x1.model, x2.model])
    gamma = join_maps([r1, r2], legs, signs=[1, -1])
    Q = _cocone(gamma)
    return HomotopyPushout("lim", Q, {"C0": x0, "C1": x1, "C2": x2}, gamma, legs)


# --- reports -------------------------------------------------------------------

@dataclass
class Node:
    """Exactness at one group of the sequence."""

    cat: str          # "C0", "C1+C2" or "C"
    degree: int
    side: str
    status: str       # "exact", "not exact" or "undetermined"
    defect: FgAbGroup | None
    composition_zero: bool | None
    note: str = ""

    @property
    def label(self) -> str:
        return _node_label(self.side, self.cat, self.degree)

    def to_dict(self) -> dict:
        return {
            "node": self.label,
            "group": self.cat,
            "degree": self.degree,
            "status": self.status,
            "defect": None if self.defect is None else str(self.defect),
            "composition_zero": self.composition_zero,
            "note": self.note,
        }


def _hom_dict(f: AbHom | None) -> dict | None:
    if f is None:
        return None
    g = f.in_normal_form()
    return {"source": str(g.source), "target": str(g.target), "matrix": g.matrix.tolist()}


@dataclass
class MVReport:
    side: str
    degree: int
    groups: dict[str, list[FgAbGroup]]
    alpha: list[AbHom]
    beta: list[AbHom]
    boundary: dict[int, AbHom | None]
    quasi_isomorphism: bool
    cone_homology: dict[int, FgAbGroup]
    nodes: list[Node]

    @property
    def exact(self) -> bool:
        return all(n.status == "exact" for n in self.nodes)

    @property
    def failures(self) -> list[Node]:
        return [n for n in self.nodes if n.status == "not exact"]

    @property
    def undetermined(self) -> list[Node]:
        return [n for n in self.nodes if n.status == "undetermined"]

    def node(self, cat: str, degree: int) -> Node | None:
        for n in self.nodes:
            if n.cat == cat and n.degree == degree:
                return n
        return None

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "degree": self.degree,
            "groups": {k: [str(G) for G in v] for k, v in self.groups.items()},
            "alpha": [_hom_dict(f) for f in self.alpha],
            "beta": [_hom_dict(f) for f in self.beta],
            "boundary": {str(n): _hom_dict(f) for n, f in sorted(self.boundary.items())},
            "quasi_isomorphism": self.quasi_isomorphism,
            "cone_homology": {str(n): str(G) for n, G in sorted(self.cone_homology.items())},
            "exact": self.exact,
            "nodes": [n.to_dict() for n in self.nodes],
        }


def _node_from(cat, n, side, f: AbHom | None, g: AbHom | None, mid: FgAbGroup, note="") -> Node:
    """Exactness at ``mid`` for ``f`` into and ``g`` out of it; ``None`` marks an unknown map."""
    if mid.is_trivial():
        return Node(cat, n, side, "exact", FgAbGroup.trivial(), True, note)
    if f is None or g is None:
        return Node(cat, n, side, "undetermined", None, None, note or "connecting map unavailable")
    res = exactness_defect(f, g)
    return Node(cat, n, side, "exact" if res.exact else "not exact", res.defect, res.composition_zero, note)


def _forced(f_src: FgAbGroup, f_tgt: FgAbGroup) -> AbHom | None:
    """The zero map when the source or target of a missing connecting map is trivial."""
    if f_src.is_trivial() or f_tgt.is_trivial():
        return AbHom.zero(f_src, f_tgt)
    return None


def _lift(psi: ChainMap, z_cycles: IntMatrix, n: int, P: ChainComplex, X: ChainComplex) -> IntMatrix | None:
    """Cycles ``y`` of P with ``ψ y ≡ z`` modulo boundaries of X, one column per column of z."""
    ZP = P.homology(n).cycles
    lhs = psi.at(n).to_dense() @ ZP
    bd = X.incoming(n).to_dense()
    sol = Solver(lhs.hstack(bd)).solve(z_cycles)
    if sol is None:
        return None
    return ZP @ sol.select(rows=range(ZP.ncols))


def mv_verify(square: PushoutSquare, M: Diagram, N: int = 3) -> MVReport:
    """Assemble the colimit Mayer–Vietoris sequence through degree N and check exactness."""
    top = N + 2
    HP = homotopy_pushout_complex(square.F1, square.F2, restrict(M, square.I1), restrict(M, square.I2), top)
    bC = bar_complex(M, top)
    P = HP.complex
    b1, b2 = HP.bars["C1"], HP.bars["C2"]
    g1 = induced_map(square.I1, M, top, source=b1, target=bC).chain_map
    g2 = induced_map(square.I2, M, top, source=b2, target=bC).chain_map
    beta_chain = join_maps([g1, g2], HP.legs, signs=[1, -1])
    # ψ(a, u, v) = I1_* u - I2_* v
    psi_maps = {}
    for n in range(P.low, min(P.top, bC.model.top) + 1):
        a = HP.bars["C0"].model.dim(n - 1)
        psi_maps[n] = SparseMatrix.blocks([bC.model.dim(n)], [a, HP.legs.dim(n)], {(0, 1): beta_chain.at(n)})
    psi = ChainMap(P, bC.model, psi_maps)
    K = cone(psi).complex
    cone_h = {n: K.homology_group(n) for n in range(N + 2)}
    qi = all(G.is_trivial() for G in cone_h.values())

    models = {"C0": HP.bars["C0"].model, "C1": b1.model, "C2": b2.model, "C": bC.model}
    H = {k: [m.homology(n) for n in range(N + 1)] for k, m in models.items()}
    groups = {k: [h.group for h in v] for k, v in H.items()}
    F1s = induced_map(square.F1, restrict(M, square.I1), top, source=HP.bars["C0"], target=b1).chain_map
    F2s = induced_map(square.F2, restrict(M, square.I2), top, source=HP.bars["C0"], target=b2).chain_map
    alpha, beta = [], []
    for n in range(N + 1):
        sum_group = FgAbGroup.direct_sum([groups["C1"][n], groups["C2"][n]])
        alpha.append(AbHom.stack([F1s.induced(n), F2s.induced(n)], sum_group))
        beta.append(AbHom.join([g1.induced(n), -g2.induced(n)], sum_group))

    boundary: dict[int, AbHom | None] = {}
    for n in range(1, N + 1):
        src, tgt = groups["C"][n], groups["C0"][n - 1]
        if qi:
            Z = H["C"][n].cycles
            Y = _lift(psi, Z, n, P, bC.model)
            if Y is None:
                raise ArithmeticError(f"cycles of degree {n} do not lift although ψ is a quasi-isomorphism")
            k = HP.bars["C0"].model.dim(n - 1)
            A = Y.select(rows=range(k))
            coords = H["C0"][n - 1].coordinates(A)
            boundary[n] = AbHom(src, tgt, coords)
        else:
            boundary[n] = _forced(src, tgt)
    boundary[0] = None

    nodes = []
    side = "colim"
    for n in range(N + 1):
        if n <= N - 1:
            d_in = boundary.get(n + 1)
            nodes.append(_node_from("C0", n, side, d_in, alpha[n], groups["C0"][n]))
        nodes.append(_node_from("C1+C2", n, side, alpha[n], beta[n], alpha[n].target))
        d_out = boundary[n] if n else AbHom.zero(groups["C"][0], FgAbGroup.trivial())
        nodes.append(_node_from("C", n, side, beta[n], d_out, groups["C"][n]))
    nodes.sort(key=lambda x: (x.degree, ["C0", "C1+C2", "C"].index(x.cat)))
    return MVReport(side, N, groups, alpha, beta, boundary, qi,
                    {n: G for n, G in cone_h.items() if not G.is_trivial()}, nodes)


def mv_verify_lim(square: PushoutSquare, L: Diagram, N: int = 3) -> MVReport:
    """Dual sequence ``… → limⁿ_C → limⁿ_{C1} ⊕ limⁿ_{C2} → limⁿ_{C0} →δ limⁿ⁺¹_C → …``."""
    if L.covariant:
        raise DiagramError("mv_verify_lim needs a right module")
    top = N + 2 if L.is_free() else N + 3
    HQ = homotopy_pullback_complex(square.F1, square.F2, restrict(L, square.I1), restrict(L, square.I2), top)
    xC = cobar_complex(L, top)
    Q = HQ.complex
    x1, x2, x0 = HQ.bars["C1"], HQ.bars["C2"], HQ.bars["C0"]
    r1 = restriction_map(square.I1, L, top, source=xC, target=x1).chain_map
    r2 = restriction_map(square.I2, L, top, source=xC, target=x2).chain_map
    I_chain = stack_maps([r1, r2], HQ.legs)
    X = xC.model
    psi_maps = {}
    for n in range(max(Q.low, X.low), min(Q.top, X.top) + 1):
        psi_maps[n] = SparseMatrix.blocks([HQ.legs.dim(n), x0.model.dim(n - 1)], [X.dim(n)], {(0, 0): I_chain.at(n)})
    psi = ChainMap(X, Q, psi_maps)
    K = cone(psi).complex
    cone_h = {n: K.homology_group(n) for n in range(K.low, N + 1)}
    qi = all(G.is_trivial() for G in cone_h.values())

    models = {"C0": x0.model, "C1": x1.model, "C2": x2.model, "C": X}
    H = {k: [m.homology(n) for n in range(N + 1)] for k, m in models.items()}
    groups = {k: [h.group for h in v] for k, v in H.items()}
    F1s = restriction_map(square.F1, restrict(L, square.I1), top, source=x1, target=x0).chain_map
    F2s = restriction_map(square.F2, restrict(L, square.I2), top, source=x2, target=x0).chain_map
    alpha, beta = [], []  # alpha: lim_C -> sum, beta: sum -> lim_C0
    for n in range(N + 1):
        sum_group = FgAbGroup.direct_sum([groups["C1"][n], groups["C2"][n]])
        alpha.append(AbHom.stack([r1.induced(n), r2.induced(n)], sum_group))
        beta.append(AbHom.join([F1s.induced(n), -F2s.induced(n)], sum_group))

    boundary: dict[int, AbHom | None] = {}
    for n in range(N):
        src, tgt = groups["C0"][n], groups["C"][n + 1]
        if qi:
            W = H["C0"][n].cycles
            k = HQ.legs.dim(n + 1)
            target = IntMatrix.zeros(k, W.ncols).vstack(W)
            ZX = X.homology(n + 1).cycles
            lhs = psi.at(n + 1).to_dense() @ ZX
            sol = Solver(lhs.hstack(Q.incoming(n + 1).to_dense())).solve(target)
            if sol is None:
                raise ArithmeticError(f"cocycles of degree {n} do not lift although ψ is a quasi-isomorphism")
            coords = sol.select(rows=range(ZX.ncols))
            boundary[n] = AbHom(src, tgt, coords)
        else:
            boundary[n] = _forced(src, tgt)

    nodes = []
    side = "lim"
    for n in range(N + 1):
        d_in = boundary.get(n - 1) if n else AbHom.zero(FgAbGroup.trivial(), groups["C"][0])
        nodes.append(_node_from("C", n, side, d_in, alpha[n], groups["C"][n]))
        nodes.append(_node_from("C1+C2", n, side, alpha[n], beta[n], alpha[n].target))
        if n <= N - 1:
            nodes.append(_node_from("C0", n, side, beta[n], boundary.get(n), groups["C0"][n]))
    return MVReport(side, N, groups, alpha, beta, boundary, qi,
                    {n: G for n, G in cone_h.items() if not G.is_trivial()}, nodes)


def mv_predict(F1: Functor, F2: Functor, M1: Diagram, M2: Diagram, N: int = 3,
               side: str = "colim") -> list[FgAbGroup]:
    """Homology of the homotopy pushout built from the legs alone.

    Under the hypotheses of the Mayer–Vietoris theorem this is ``colimₙ^C M``
    (``side="colim"``) or ``limⁿ_C L`` (``side="lim"``) for the pushout C, which
    need not be finite.
    """
    if side == "colim":
        HP = homotopy_pushout_complex(F1, F2, M1, M2, N + 1)
        return HP.homology(N)
    if side == "lim":
        top = N + 1 if (M1.is_free() and M2.is_free()) else N + 2
        HQ = homotopy_pullback_complex(F1, F2, M1, M2, top)
        return HQ.homology(N)
    raise ValueError(f"side must be 'colim' or 'lim', got {side!r}")


# --- the counter-example ---------------------------------------------------------

def counterexample_square(variant: str = "Z/2") -> PushoutSquare:
    """C0, C0 plus a disjoint initial object, C0 plus a disjoint terminal object, and their pushout.

    ``variant`` is ``"Z/2"``, ``"Z/3"`` (one-object groups) or ``"chain"``
    (the contractible poset x0 < x1 < x2).
    """
    if variant in ("Z/2", "Z/3"):
        C0 = cyclic_group(int(variant[-1]), name=f"C0={variant}")
        C1 = adjoin_initial(C0, "0", {"*": "a"}, name="C1")
        C2 = adjoin_terminal(C0, "1", {"*": "b"}, name="C2")
    elif variant == "chain":
        C0 = poset(["x0", "x1", "x2"], [("x0", "x1"), ("x1", "x2")], name="C0=chain")
        C1 = adjoin_initial(C0, "0", name="C1")
        C2 = adjoin_terminal(C0, "1", name="C2")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    F1 = inclusion(C0, C1, name="F1")
    F2 = inclusion(C0, C2, name="F2")
    res = pushout(F1, F2)
    res.category.name = "C"
    return res.square(F1, F2)


@dataclass
class CounterexampleReport:
    variant: str
    degree: int
    square: PushoutSquare
    pushout_size: tuple[int, int]
    hypotheses: HypothesisReport
    colim: MVReport
    lim: MVReport
    expectations: dict[str, bool]

    @property
    def as_expected(self) -> bool:
        return all(self.expectations.values())

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "degree": self.degree,
            "pushout": {"objects": self.pushout_size[0], "morphisms": self.pushout_size[1]},
            "hypotheses": self.hypotheses.to_dict(),
            "colim": self.colim.to_dict(),
            "lim": self.lim.to_dict(),
            "expectations": dict(self.expectations),
            "as_expected": self.as_expected,
        }


def counterexample_repro(variant: str = "Z/2", N: int = 3) -> CounterexampleReport:
    """Run the counter-example square end to end and record what was expected of it."""
    sq = counterexample_square(variant)
    hyp = theorem1_hypotheses(sq, N)
    M = const_diagram(sq.C)
    rep = mv_verify(sq, M, N)
    rep_lim = mv_verify_lim(sq, const_diagram(sq.C, variance="right"), N)
    point = [FgAbGroup.free(1)] + [FgAbGroup.trivial()] * N

    def same(gs, ref):
        return [G.invariants for G in gs] == [G.invariants for G in ref]

    exp = {
        "C1 has point homology": same(rep.groups["C1"], point),
        "C2 has point homology": same(rep.groups["C2"], point),
        "C has point homology": same(rep.groups["C"], point),
    }
    if variant == "chain":
        exp["colim sequence exact"] = rep.exact
        exp["lim sequence exact"] = rep_lim.exact
        exp["hypotheses hold"] = hyp.holds
    else:
        order = int(variant[-1])
        expected = FgAbGroup.cyclic(order)
        node = rep.node("C0", 1)
        w = hyp.local["I0"].witness
        exp[f"colim_1 of C0 is Z/{order}"] = rep.groups["C0"][1].isomorphic(expected)
        exp["colim sequence not exact"] = not rep.exact
        exp[f"defect Z/{order} at colim_1 of C0"] = (
            node is not None and node.status == "not exact" and node.defect.isomorphic(expected)
            and [x.label for x in rep.failures] == [node.label]
        )
        exp["only I0 fails the hypotheses"] = hyp.failing == ["I0"]
        exp[f"I0 witness is H_1 = Z/{order} at object 0"] = (
            w is not None and w[0] == "0" and w[1] == 1 and w[2].isomorphic(expected)
        )
    return CounterexampleReport(variant, N, sq, (len(sq.C.objects), len(sq.C.morphisms)), hyp, rep, rep_lim, exp)
