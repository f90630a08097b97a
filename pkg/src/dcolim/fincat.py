"""Finite categories and functors as explicit composition tables.

Morphisms are string identifiers; ``compose(g, f)`` is ``g ∘ f`` (``f``
first). Internally everything is indexed by position so composition is a
table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "CategoryError",
    "FunctorError",
    "BoundExceeded",
    "FinCategory",
    "Functor",
    "PushoutSquare",
    "UnderCategory",
    "PushoutResult",
    "validate",
    "opposite",
    "under_category",
    "pushout",
    "pi0",
    "cat_isomorphic",
    "injective_on_objects",
]


class CategoryError(ValueError):
    """A category axiom fails; ``axiom`` names it and ``witness`` shows where."""

    def __init__(self, axiom: str, message: str, witness: tuple = ()):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


class FunctorError(ValueError):
    def __init__(self, axiom: str, message: str, witness: tuple = ()):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


class BoundExceeded(RuntimeError):
    """The bounded pushout search did not stabilize.

    This is inconclusive: it does not claim the pushout is infinite.
    """

    def __init__(self, message: str, word_length: int, words: int, classes: int):
        super().__init__(message)
        self.word_length = word_length
        self.words = words
        self.classes = classes


class FinCategory:
    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[tuple[str, str, str]],
        identities: Mapping[str, str],
        compose: Mapping[tuple[str, str], str] | Iterable[tuple[str, str, str]],
        name: str | None = None,
        check: bool = True,
    ):
        self.name = name
        self.objects = tuple(str(o) for o in objects)
        self.morphisms = tuple(str(m[0]) for m in morphisms)
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.mor_index = {m: i for i, m in enumerate(self.morphisms)}
        if len(self.obj_index) != len(self.objects):
            raise CategoryError("identifiers", "duplicate object identifier")
        if len(self.mor_index) != len(self.morphisms):
            raise CategoryError("identifiers", "duplicate morphism identifier")
        self.src: list[int] = []
        self.dst: list[int] = []
        for mid, s, t in morphisms:
            for o in (s, t):
                if str(o) not in self.obj_index:
                    raise CategoryError("identifiers", f"morphism {mid} refers to unknown object {o}", (mid, o))
            self.src.append(self.obj_index[str(s)])
            self.dst.append(self.obj_index[str(t)])
        self.ident: list[int] = []
        for o in self.objects:
            if o not in identities:
                raise CategoryError("identities", f"object {o} has no identity", (o,))
            m = str(identities[o])
            if m not in self.mor_index:
                raise CategoryError("identifiers", f"identity {m} is not a morphism", (o, m))
            self.ident.append(self.mor_index[m])
        n = len(self.morphisms)
        self.table = [[-1] * n for _ in range(n)]  # table[g][f] = g∘f
        items = compose.items() if isinstance(compose, Mapping) else (((g, f), gf) for g, f, gf in compose)
        for (g, f), gf in items:
            for m in (g, f, gf):
                if str(m) not in self.mor_index:
                    raise CategoryError("identifiers", f"composition mentions unknown morphism {m}", (g, f, gf))
            gi, fi = self.mor_index[str(g)], self.mor_index[str(f)]
            prev = self.table[gi][fi]
            val = self.mor_index[str(gf)]
            if prev >= 0 and prev != val:
                raise CategoryError("composition", f"conflicting values for {g}∘{f}", (g, f))
            self.table[gi][fi] = val
        if check:
            self.check()

    # construction from index data, used by internal builders
    @classmethod
    def from_table(cls, objects, morphisms, src, dst, ident, table, name=None, check=True) -> FinCategory:
        mors = [(m, objects[s], objects[t]) for m, s, t in zip(morphisms, src, dst)]
        ids = {objects[o]: morphisms[ident[o]] for o in range(len(objects))}
        comp = {}
        for g in range(len(morphisms)):
            row = table[g]
            for f in range(len(morphisms)):
                if row[f] >= 0:
                    comp[(morphisms[g], morphisms[f])] = morphisms[row[f]]
        return cls(objects, mors, ids, comp, name=name, check=check)

    def check(self) -> None:
        """Exhaustive axiom check; raises :class:`CategoryError` with a witness."""
        n = len(self.morphisms)
        ms = self.morphisms
        for o, i in enumerate(self.ident):
            if self.src[i] != o or self.dst[i] != o:
                raise CategoryError("identities", f"identity {ms[i]} is not an endomorphism of {self.objects[o]}", (ms[i],))
        for g in range(n):
            for f in range(n):
                v = self.table[g][f]
                if self.src[g] == self.dst[f]:
                    if v < 0:
                        raise CategoryError("composition", f"{ms[g]}∘{ms[f]} is missing", (ms[g], ms[f]))
                    if self.src[v] != self.src[f] or self.dst[v] != self.dst[g]:
                        raise CategoryError("composition", f"{ms[g]}∘{ms[f]} has wrong source or target", (ms[g], ms[f]))
                elif v >= 0:
                    raise CategoryError("composition", f"{ms[g]}∘{ms[f]} is defined for a non-composable pair", (ms[g], ms[f]))
        for f in range(n):
            if self.table[self.ident[self.dst[f]]][f] != f:
                raise CategoryError("left identity", f"id∘{ms[f]} ≠ {ms[f]}", (ms[f],))
            if self.table[f][self.ident[self.src[f]]] != f:
                raise CategoryError("right identity", f"{ms[f]}∘id ≠ {ms[f]}", (ms[f],))
        outgoing = self._outgoing_idx()
        for f in range(n):
            for g in outgoing[self.dst[f]]:
                gf = self.table[g][f]
                for h in outgoing[self.dst[g]]:
                    if self.table[h][gf] != self.table[self.table[h][g]][f]:
                        raise CategoryError(
                            "associativity",
                            f"({ms[h]}∘{ms[g]})∘{ms[f]} ≠ {ms[h]}∘({ms[g]}∘{ms[f]})",
                            (ms[h], ms[g], ms[f]),
                        )

    def _outgoing_idx(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.objects]
        for i, s in enumerate(self.src):
            out[s].append(i)
        return out

    # convenience accessors by identifier

    def source(self, m: str) -> str:
        return self.objects[self.src[self.mor_index[m]]]

    def target(self, m: str) -> str:
        return self.objects[self.dst[self.mor_index[m]]]

    def identity(self, o: str) -> str:
        return self.morphisms[self.ident[self.obj_index[o]]]

    def compose(self, g: str, f: str) -> str:
        v = self.table[self.mor_index[g]][self.mor_index[f]]
        if v < 0:
            raise CategoryError("composition", f"{g} and {f} are not composable", (g, f))
        return self.morphisms[v]

    def is_identity(self, m: str) -> bool:
        i = self.mor_index[m]
        return self.ident[self.src[i]] == i

    def hom(self, a: str, b: str) -> list[str]:
        ai, bi = self.obj_index[a], self.obj_index[b]
        return [m for i, m in enumerate(self.morphisms) if self.src[i] == ai and self.dst[i] == bi]

    def non_identities(self) -> list[str]:
        ids = set(self.ident)
        return [m for i, m in enumerate(self.morphisms) if i not in ids]

    def is_groupoid(self) -> bool:
        for f in range(len(self.morphisms)):
            s, t = self.src[f], self.dst[f]
            if not any(self.table[g][f] == self.ident[s] and self.table[f][g] == self.ident[t]
                       for g in range(len(self.morphisms)) if self.src[g] == t and self.dst[g] == s):
                return False
        return True

    def to_dict(self) -> dict:
        ms = self.morphisms
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": m, "src": self.objects[s], "dst": self.objects[t]}
                          for m, s, t in zip(ms, self.src, self.dst)],
            "identities": {o: ms[i] for o, i in zip(self.objects, self.ident)},
            "compose": [[ms[g], ms[f], ms[v]]
                        for g in range(len(ms)) for f in range(len(ms))
                        if (v := self.table[g][f]) >= 0],
        }

    @classmethod
    def from_dict(cls, data: Mapping, name: str | None = None) -> FinCategory:
        return validate(data, name=name)

    def __len__(self) -> int:
        return len(self.morphisms)

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"<FinCategory {label}{len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def same_as(self, other: FinCategory) -> bool:
        """Identical presentations (same identifiers and tables)."""
        return self.to_dict() == other.to_dict()


def validate(data: Mapping, name: str | None = None) -> FinCategory:
    """Build a category from its JSON-style description, checking every axiom."""
    for key in ("objects", "morphisms", "identities", "compose"):
        if key not in data:
            raise CategoryError("format", f"missing key {key!r}")
    morphisms = []
    for m in data["morphisms"]:
        if not isinstance(m, Mapping) or not {"id", "src", "dst"} <= set(m):
            raise CategoryError("format", f"malformed morphism entry {m!r}")
        morphisms.append((m["id"], m["src"], m["dst"]))
    compose = []
    for entry in data["compose"]:
        if len(entry) != 3:
            raise CategoryError("format", f"composition entry {entry!r} is not a [g, f, gf] triple")
        compose.append(tuple(entry))
    return FinCategory(data["objects"], morphisms, data["identities"], compose, name=name or data.get("name"))


class Functor:
    def __init__(self, domain: FinCategory, codomain: FinCategory,
                 on_objects: Mapping[str, str], on_morphisms: Mapping[str, str],
                 name: str | None = None, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.name = name
        self.on_objects = {str(k): str(v) for k, v in on_objects.items()}
        self.on_morphisms = {str(k): str(v) for k, v in on_morphisms.items()}
        for o in domain.objects:
            if o not in self.on_objects:
                raise FunctorError("totality", f"object {o} is not mapped", (o,))
            if self.on_objects[o] not in codomain.obj_index:
                raise FunctorError("identifiers", f"{o} maps to unknown object {self.on_objects[o]}", (o,))
        for m in domain.morphisms:
            if m not in self.on_morphisms and domain.is_identity(m):
                self.on_morphisms[m] = codomain.identity(self.on_objects[domain.source(m)])
            if m not in self.on_morphisms:
                raise FunctorError("totality", f"morphism {m} is not mapped", (m,))
            if self.on_morphisms[m] not in codomain.mor_index:
                raise FunctorError("identifiers", f"{m} maps to unknown morphism {self.on_morphisms[m]}", (m,))
        self.obj_idx = [codomain.obj_index[self.on_objects[o]] for o in domain.objects]
        self.mor_idx = [codomain.mor_index[self.on_morphisms[m]] for m in domain.morphisms]
        if check:
            self.check()

    def check(self) -> None:
        D, C = self.domain, self.codomain
        for i, m in enumerate(D.morphisms):
            j = self.mor_idx[i]
            if C.src[j] != self.obj_idx[D.src[i]] or C.dst[j] != self.obj_idx[D.dst[i]]:
                raise FunctorError("source/target", f"{m} ↦ {C.morphisms[j]} has the wrong endpoints", (m,))
        for o, i in enumerate(D.ident):
            if self.mor_idx[i] != C.ident[self.obj_idx[o]]:
                raise FunctorError("identities", f"identity of {D.objects[o]} is not preserved", (D.objects[o],))
        n = len(D.morphisms)
        for g in range(n):
            for f in range(n):
                gf = D.table[g][f]
                if gf >= 0 and C.table[self.mor_idx[g]][self.mor_idx[f]] != self.mor_idx[gf]:
                    raise FunctorError("composition", f"F({D.morphisms[g]}∘{D.morphisms[f]}) ≠ F(..)∘F(..)",
                                       (D.morphisms[g], D.morphisms[f]))

    def __call__(self, x: str) -> str:
        if x in self.on_morphisms:
            return self.on_morphisms[x]
        return self.on_objects[x]

    def obj(self, o: str) -> str:
        return self.on_objects[o]

    def mor(self, m: str) -> str:
        return self.on_morphisms[m]

    def __matmul__(self, other: Functor) -> Functor:
        """``self @ other`` is ``self ∘ other``."""
        if other.codomain is not self.domain and not other.codomain.same_as(self.domain):
            raise FunctorError("composition", "codomain/domain mismatch")
        return Functor(other.domain, self.codomain,
                       {o: self.on_objects[v] for o, v in other.on_objects.items()},
                       {m: self.on_morphisms[v] for m, v in other.on_morphisms.items()},
                       check=False)

    @classmethod
    def identity(cls, C: FinCategory) -> Functor:
        return cls(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms}, name="id", check=False)

    def is_faithful(self) -> bool:
        seen = set()
        for i in range(len(self.domain.morphisms)):
            key = (self.domain.src[i], self.domain.dst[i], self.mor_idx[i])
            if key in seen:
                return False
            seen.add(key)
        return True

    def equals(self, other: Functor) -> bool:
        return self.on_objects == other.on_objects and self.on_morphisms == other.on_morphisms

    def to_dict(self, domain_ref=None, codomain_ref=None) -> dict:
        return {
            "domain": domain_ref if domain_ref is not None else self.domain.to_dict(),
            "codomain": codomain_ref if codomain_ref is not None else self.codomain.to_dict(),
            "on_objects": dict(self.on_objects),
            "on_morphisms": dict(self.on_morphisms),
        }

    def __repr__(self) -> str:
        return f"<Functor {self.name or ''} {self.domain!r} -> {self.codomain!r}>"


def injective_on_objects(F: Functor) -> bool:
    return len(set(F.obj_idx)) == len(F.obj_idx)


def opposite(C: FinCategory) -> FinCategory:
    n = len(C.morphisms)
    table = [[C.table[f][g] for f in range(n)] for g in range(n)]
    name = f"{C.name}^op" if C.name else None
    return FinCategory.from_table(C.objects, C.morphisms, C.dst, C.src, C.ident, table, name=name, check=False)


def pi0(C: FinCategory) -> list[list[str]]:
    """Connected components, each in object order, listed by first object."""
    parent = list(range(len(C.objects)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in zip(C.src, C.dst):
        a, b = find(s), find(t)
        if a != b:
            parent[max(a, b)] = min(a, b)
    comps: dict[int, list[str]] = {}
    for i, o in enumerate(C.objects):
        comps.setdefault(find(i), []).append(o)
    return list(comps.values())


@dataclass
class PushoutSquare:
    F1: Functor
    F2: Functor
    I1: Functor
    I2: Functor
    name: str | None = None

    def __post_init__(self):
        if not self.I1.domain.same_as(self.F1.codomain) or not self.I2.domain.same_as(self.F2.codomain):
            raise FunctorError("square", "legs do not match")
        if not self.F1.domain.same_as(self.F2.domain):
            raise FunctorError("square", "F1 and F2 have different domains")
        if not (self.I1 @ self.F1).equals(self.I2 @ self.F2):
            raise FunctorError("square", "the square does not commute: I1∘F1 ≠ I2∘F2")

    @property
    def C0(self) -> FinCategory:
        return self.F1.domain

    @property
    def C1(self) -> FinCategory:
        return self.F1.codomain

    @property
    def C2(self) -> FinCategory:
        return self.F2.codomain

    @property
    def C(self) -> FinCategory:
        return self.I1.codomain

    @property
    def I0(self) -> Functor:
        return self.I1 @ self.F1


@dataclass
class UnderCategory:
    """``c/F``: objects ``(d, f: c → F d)``, morphisms ``g: d → d'`` with ``F(g)∘f = f'``."""

    base: str
    functor: Functor
    category: FinCategory
    object_data: dict[str, tuple[str, str]]
    morphism_data: dict[str, tuple[str, str]]  # name -> (g, source object name)
    projection: Functor


def _under_obj_name(d: str, f: str) -> str:
    return f"({d},{f})"


def under_category(c: str, F: Functor) -> UnderCategory:
    D, C = F.domain, F.codomain
    if c not in C.obj_index:
        raise CategoryError("identifiers", f"unknown object {c}", (c,))
    ci = C.obj_index[c]
    objects: list[tuple[int, int]] = []  # (d index, f index in C)
    for di in range(len(D.objects)):
        fd = F.obj_idx[di]
        for f in range(len(C.morphisms)):
            if C.src[f] == ci and C.dst[f] == fd:
                objects.append((di, f))
    obj_pos = {o: k for k, o in enumerate(objects)}
    obj_names = [_under_obj_name(D.objects[d], C.morphisms[f]) for d, f in objects]
    mors: list[tuple[int, int]] = []  # (g index in D, source object position)
    src, dst = [], []
    for k, (d, f) in enumerate(objects):
        for g in range(len(D.morphisms)):
            if D.src[g] == d:
                f2 = C.table[F.mor_idx[g]][f]
                mors.append((g, k))
                src.append(k)
                dst.append(obj_pos[(D.dst[g], f2)])
    mor_pos = {m: k for k, m in enumerate(mors)}
    mor_names = [f"{D.morphisms[g]}:{obj_names[k]}" for g, k in mors]
    ident = [mor_pos[(D.ident[d], k)] for k, (d, _f) in enumerate(objects)]
    n = len(mors)
    table = [[-1] * n for _ in range(n)]
    for a, (g2, k2) in enumerate(mors):
        for b, (g1, k1) in enumerate(mors):
            if dst[b] == k2:
                table[a][b] = mor_pos[(D.table[g2][g1], k1)]
    name = f"{c}/{F.name}" if F.name else f"{c}/F"
    cat = FinCategory.from_table(obj_names, mor_names, src, dst, ident, table, name=name, check=False)
    proj = Functor(cat, D,
                   {obj_names[k]: D.objects[d] for k, (d, _f) in enumerate(objects)},
                   {mor_names[a]: D.morphisms[g] for a, (g, _k) in enumerate(mors)},
                   check=False)
    return UnderCategory(
        c, F, cat,
        {obj_names[k]: (D.objects[d], C.morphisms[f]) for k, (d, f) in enumerate(objects)},
        {mor_names[a]: (D.morphisms[g], obj_names[k]) for a, (g, k) in enumerate(mors)},
        proj,
    )


def under_functor(h: str, F: Functor, source: UnderCategory | None = None,
                  target: UnderCategory | None = None) -> tuple[Functor, UnderCategory, UnderCategory]:
    """For ``h: c' → c`` the functor ``c/F → c'/F``, ``(d, f) ↦ (d, f∘h)``."""
    C = F.codomain
    c_prime, c = C.source(h), C.target(h)
    src = source or under_category(c, F)
    tgt = target or under_category(c_prime, F)
    on_obj = {}
    for name, (d, f) in src.object_data.items():
        on_obj[name] = _under_obj_name(d, C.compose(f, h))
    on_mor = {}
    for name, (g, o) in src.morphism_data.items():
        on_mor[name] = f"{g}:{on_obj[o]}"
    return Functor(src.category, tgt.category, on_obj, on_mor, check=False), src, tgt


def induced_under_functor(c: str, G: Functor, F: Functor, source: UnderCategory | None = None,
                          target: UnderCategory | None = None) -> Functor:
    """For ``F ∘ G`` and ``F``, the functor ``c/(F∘G) → c/F``, ``(e, f) ↦ (G e, f)``."""
    src = source or under_category(c, F @ G)
    tgt = target or under_category(c, F)
    on_obj = {name: _under_obj_name(G.obj(e), f) for name, (e, f) in src.object_data.items()}
    on_mor = {}
    for name, (g, o) in src.morphism_data.items():
        on_mor[name] = f"{G.mor(g)}:{on_obj[o]}"
    return Functor(src.category, tgt.category, on_obj, on_mor, check=False)


# --- isomorphism search -----------------------------------------------------

def cat_isomorphic(A: FinCategory, B: FinCategory, limit: int = 200) -> tuple[Functor, Functor] | None:
    """Find an isomorphism ``A ≅ B`` by backtracking; ``None`` certifies absence."""
    if max(len(A.morphisms), len(B.morphisms)) > limit:
        raise ValueError(f"isomorphism search limited to {limit} morphisms")
    if len(A.objects) != len(B.objects) or len(A.morphisms) != len(B.morphisms):
        return None
    no = len(A.objects)
    hA = [[0] * no for _ in range(no)]
    hB = [[0] * no for _ in range(no)]
    for s, t in zip(A.src, A.dst):
        hA[s][t] += 1
    for s, t in zip(B.src, B.dst):
        hB[s][t] += 1

    def sig(h, i):
        return (h[i][i], sorted(h[i]), sorted(r[i] for r in h))

    sigA = [sig(hA, i) for i in range(no)]
    sigB = [sig(hB, i) for i in range(no)]

    homB: dict[tuple[int, int], list[int]] = {}
    for j, (s, t) in enumerate(zip(B.src, B.dst)):
        homB.setdefault((s, t), []).append(j)
    nonid_A = [i for i in range(len(A.morphisms)) if A.ident[A.src[i]] != i]

    def extend_objects(phi: list[int], used: set[int]):
        k = len(phi)
        if k == no:
            yield list(phi)
            return
        for j in range(no):
            if j in used or sigA[k] != sigB[j]:
                continue
            if any(hA[k][i] != hB[j][phi[i]] or hA[i][k] != hB[phi[i]][j] for i in range(k)):
                continue
            if hA[k][k] != hB[j][j]:
                continue
            phi.append(j)
            used.add(j)
            yield from extend_objects(phi, used)
            phi.pop()
            used.discard(j)

    def propagate(psi: dict[int, int], inv: dict[int, int], queue: list[int]) -> bool:
        while queue:
            m = queue.pop()
            for other in list(psi):
                for g, f in ((m, other), (other, m)):
                    gf = A.table[g][f]
                    if gf < 0:
                        continue
                    want = B.table[psi[g]][psi[f]]
                    if gf in psi:
                        if psi[gf] != want:
                            return False
                    else:
                        if want in inv:
                            return False
                        psi[gf] = want
                        inv[want] = gf
                        queue.append(gf)
        return True

    def extend_morphisms(phi, psi, inv, k):
        while k < len(nonid_A) and nonid_A[k] in psi:
            k += 1
        if k == len(nonid_A):
            yield dict(psi)
            return
        m = nonid_A[k]
        for cand in homB.get((phi[A.src[m]], phi[A.dst[m]]), []):
            if cand in inv or B.ident[B.src[cand]] == cand:
                continue
            psi2, inv2 = dict(psi), dict(inv)
            psi2[m] = cand
            inv2[cand] = m
            if propagate(psi2, inv2, [m]):
                yield from extend_morphisms(phi, psi2, inv2, k + 1)

    for phi in extend_objects([], set()):
        psi = {A.ident[o]: B.ident[phi[o]] for o in range(no)}
        inv = {v: k for k, v in psi.items()}
        if not propagate(psi, inv, list(psi)):
            continue
        for full in extend_morphisms(phi, psi, inv, 0):
            F = Functor(A, B, {A.objects[i]: B.objects[phi[i]] for i in range(no)},
                        {A.morphisms[i]: B.morphisms[j] for i, j in full.items()})
            G = Functor(B, A, {B.objects[phi[i]]: A.objects[i] for i in range(no)},
                        {B.morphisms[j]: A.morphisms[i] for i, j in full.items()})
            return F, G
    return None


# --- pushouts ----------------------------------------------------------------

class _UnionFind:
    def __init__(self, n: int = 0):
        self.parent = list(range(n))

    def add(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if a > b:
            a, b = b, a
        self.parent[b] = a
        return True


@dataclass
class PushoutResult:
    category: FinCategory
    I1: Functor
    I2: Functor
    certificate: dict = field(default_factory=dict)

    def square(self, F1: Functor, F2: Functor, name: str | None = None) -> PushoutSquare:
        return PushoutSquare(F1, F2, self.I1, self.I2, name=name)


def pushout(F1: Functor, F2: Functor, word_bound: int = 8, size_bound: int = 10000) -> PushoutResult:
    """Pushout of ``C1 ← C0 → C2`` by bounded congruence closure on words.

    Words are composable strings of non-identity generators from
    ``Mor C1 ⊔ Mor C2`` with ``F1(m)`` and ``F2(m)`` glued. Adjacent letters
    that compose inside ``C1`` or ``C2`` are identified with their composite.
    At word length ``L`` the classes whose shortest word has length at most
    ``L // 2`` form a candidate category; it is accepted only when products
    of normal forms stay inside it, the product is associative, both legs
    are functors into it and every class is the product of its letters.
    Those checks make the candidate isomorphic to the true pushout, so a
    returned category is never wrong; otherwise :class:`BoundExceeded`.
    """
    C0, C1, C2 = F1.domain, F1.codomain, F2.codomain
    if not F2.domain.same_as(C0):
        raise FunctorError("pushout", "F1 and F2 must share a domain")
    sides = (C1, C2)

    # objects
    n1 = len(C1.objects)
    ouf = _UnionFind(n1 + len(C2.objects))
    for o in range(len(C0.objects)):
        ouf.union(F1.obj_idx[o], n1 + F2.obj_idx[o])
    obj_roots: list[int] = []
    for x in range(n1 + len(C2.objects)):
        r = ouf.find(x)
        if r not in obj_roots:
            obj_roots.append(r)
    obj_of = {r: k for k, r in enumerate(obj_roots)}

    def obj_class(side: int, o: int) -> int:
        return obj_of[ouf.find(o if side == 0 else n1 + o)]

    # generators
    m1 = len(C1.morphisms)
    muf = _UnionFind(m1 + len(C2.morphisms))
    for m in range(len(C0.morphisms)):
        muf.union(F1.mor_idx[m], m1 + F2.mor_idx[m])
    # gluing identities of identified objects
    for o in range(len(C0.objects)):
        muf.union(C1.ident[F1.obj_idx[o]], m1 + C2.ident[F2.obj_idx[o]])
    id_roots = {muf.find(C1.ident[o]) for o in range(n1)} | {muf.find(m1 + C2.ident[o]) for o in range(len(C2.objects))}
    letter_roots: list[int] = []
    for x in range(m1 + len(C2.morphisms)):
        r = muf.find(x)
        if r not in id_roots and r not in letter_roots:
            letter_roots.append(r)
    letter_of = {r: k for k, r in enumerate(letter_roots)}
    reps: list[tuple[list[int], list[int]]] = [([], []) for _ in letter_roots]
    letter_src: list[int] = [0] * len(letter_roots)
    letter_dst: list[int] = [0] * len(letter_roots)
    for x in range(m1 + len(C2.morphisms)):
        r = muf.find(x)
        if r in letter_of:
            k = letter_of[r]
            side, m = (0, x) if x < m1 else (1, x - m1)
            reps[k][side].append(m)
            C = sides[side]
            letter_src[k] = obj_class(side, C.src[m])
            letter_dst[k] = obj_class(side, C.dst[m])

    def letter_word(side: int, m: int) -> tuple[int, ...]:
        r = muf.find(m if side == 0 else m1 + m)
        return () if r in id_roots else (letter_of[r],)

    nobj = len(obj_roots)
    out_letters: list[list[int]] = [[] for _ in range(nobj)]
    for k in range(len(letter_roots)):
        out_letters[letter_src[k]].append(k)

    # word store: key = (source object, letters)
    words: list[tuple[int, tuple[int, ...]]] = []
    index: dict[tuple[int, tuple[int, ...]], int] = {}
    uf = _UnionFind()

    def add_word(key):
        index[key] = len(words)
        words.append(key)
        uf.add()

    for o in range(nobj):
        add_word((o, ()))
    frontier = [(o, ()) for o in range(nobj)]

    def word_dst(key):
        o, w = key
        return letter_dst[w[-1]] if w else o

    def relate(key):
        o, w = key
        i = index[key]
        for p in range(len(w) - 1):
            a, b = w[p], w[p + 1]
            for side in (0, 1):
                C = sides[side]
                for x in reps[a][side]:
                    for y in reps[b][side]:
                        if C.src[y] != C.dst[x]:
                            continue
                        new = w[:p] + letter_word(side, C.table[y][x]) + w[p + 2:]
                        uf.union(i, index[(o, new)])

    length = 0
    while True:
        length += 1
        if length > word_bound:
            classes = len({uf.find(i) for i in range(len(words))})
            raise BoundExceeded(
                f"pushout did not stabilize within word length {word_bound}; "
                f"{len(words)} words in {classes} classes",
                word_bound, len(words), classes,
            )
        new_frontier = []
        for key in frontier:
            for k in out_letters[word_dst(key)]:
                nk = (key[0], key[1] + (k,))
                add_word(nk)
                new_frontier.append(nk)
                if len(words) > size_bound:
                    classes = len({uf.find(i) for i in range(len(words))})
                    raise BoundExceeded(
                        f"pushout exceeded {size_bound} words at word length {length}",
                        length, len(words), classes,
                    )
        for key in new_frontier:
            relate(key)
        frontier = new_frontier
        if length < 2:
            continue
        certified = _certify(length, words, index, uf, letter_word, letter_dst, obj_class, sides)
        if certified is not None:
            Q, nf, comp, cls = certified
            return _build_pushout(Q, nf, comp, cls, nobj, reps, letter_dst, obj_class, letter_word,
                                  C1, C2, length, len(words))


def _certify(length, words, index, uf, letter_word, letter_dst, obj_class, sides):
    """Return the candidate category data if every certificate check passes."""
    half = length // 2
    nf: dict[int, tuple[int, tuple[int, ...]]] = {}
    for i, key in enumerate(words):
        r = uf.find(i)
        cur = nf.get(r)
        if cur is None or (len(key[1]), key[1], key[0]) < (len(cur[1]), cur[1], cur[0]):
            nf[r] = key
    Q = [r for r, key in nf.items() if len(key[1]) <= half]
    Qset = set(Q)

    def cls(key) -> int:
        return uf.find(index[key])

    def dst_of(r):
        o, w = nf[r]
        return letter_dst[w[-1]] if w else o

    by_src: dict[int, list[int]] = {}
    for r in Q:
        by_src.setdefault(nf[r][0], []).append(r)
    # closure: comp[(b, a)] = b∘a with a applied first
    comp: dict[tuple[int, int], int] = {}
    for a in Q:
        wa = nf[a]
        for b in by_src.get(dst_of(a), []):
            r = cls((wa[0], wa[1] + nf[b][1]))
            if r not in Qset:
                return None
            comp[(b, a)] = r
    # associativity
    for a in Q:
        for b in by_src.get(dst_of(a), []):
            ba = comp[(b, a)]
            for c in by_src.get(dst_of(b), []):
                if comp[(c, ba)] != comp[(comp[(c, b)], a)]:
                    return None

    def mor_class(side, m):
        C = sides[side]
        return cls((obj_class(side, C.src[m]), letter_word(side, m)))

    # both legs are functors into the candidate
    for side, C in enumerate(sides):
        for g in range(len(C.morphisms)):
            for f in range(len(C.morphisms)):
                gf = C.table[g][f]
                if gf >= 0 and comp.get((mor_class(side, g), mor_class(side, f))) != mor_class(side, gf):
                    return None
    # every class is the product of its letters
    for r in Q:
        o, w = nf[r]
        acc = cls((o, ()))
        here = o
        for k in w:
            acc = comp.get((cls((here, (k,))), acc))
            if acc is None:
                return None
            here = letter_dst[k]
        if acc != r:
            return None
    return Q, nf, comp, cls


def _build_pushout(Q, nf, comp, cls, nobj, reps, letter_dst, obj_class, letter_word, C1, C2, length, nwords):
    obj_name: dict[int, str] = {}
    used: set[str] = set()

    def fresh(base: str, pool: set[str]) -> str:
        name = base
        while name in pool:
            name += "′"
        pool.add(name)
        return name

    for side, C in enumerate((C1, C2)):
        for o in range(len(C.objects)):
            k = obj_class(side, o)
            if k not in obj_name:
                obj_name[k] = fresh(C.objects[o], used)
    objects_order = list(obj_name)
    obj_pos = {k: i for i, k in enumerate(objects_order)}

    letter_name = [C1.morphisms[s1[0]] if s1 else C2.morphisms[s2[0]] for s1, s2 in reps]

    def ident_name(k):
        for side, C in enumerate((C1, C2)):
            for o in range(len(C.objects)):
                if obj_class(side, o) == k:
                    return C.identity(C.objects[o])
        return f"id_{obj_name[k]}"

    mused: set[str] = set()
    id_classes = [cls((k, ())) for k in objects_order]
    idset = set(id_classes)
    rest = sorted((r for r in Q if r not in idset), key=lambda r: (len(nf[r][1]), nf[r][1], nf[r][0]))
    ordered = id_classes + rest
    names: dict[int, str] = {}
    for k, r in zip(objects_order, id_classes):
        names[r] = fresh(ident_name(k), mused)
    for r in rest:
        names[r] = fresh("∘".join(letter_name[k] for k in reversed(nf[r][1])), mused)
    pos = {r: i for i, r in enumerate(ordered)}

    def dst_of(r):
        o, w = nf[r]
        return letter_dst[w[-1]] if w else o

    n = len(ordered)
    table = [[-1] * n for _ in range(n)]
    for (b, a), v in comp.items():
        table[pos[b]][pos[a]] = pos[v]
    category = FinCategory.from_table(
        [obj_name[k] for k in objects_order], [names[r] for r in ordered],
        [obj_pos[nf[r][0]] for r in ordered], [obj_pos[dst_of(r)] for r in ordered],
        [pos[r] for r in id_classes], table, name="pushout",
    )

    def leg(side: int, C: FinCategory) -> Functor:
        on_obj = {C.objects[o]: obj_name[obj_class(side, o)] for o in range(len(C.objects))}
        on_mor = {C.morphisms[m]: names[cls((obj_class(side, C.src[m]), letter_word(side, m)))]
                  for m in range(len(C.morphisms))}
        return Functor(C, category, on_obj, on_mor)

    cert = {
        "word_length": length,
        "normal_form_bound": length // 2,
        "words_enumerated": nwords,
        "morphisms": n,
        "generators": len(reps),
    }
    return PushoutResult(category, leg(0, C1), leg(1, C2), cert)
