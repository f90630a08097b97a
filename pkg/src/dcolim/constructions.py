"""Small categories and functors used throughout the examples and tests."""

from __future__ import annotations

from itertools import product as _product
from typing import Mapping, Sequence

from .fincat import FinCategory, Functor

__all__ = [
    "point",
    "discrete",
    "group",
    "cyclic_group",
    "klein_four",
    "symmetric_group_3",
    "poset",
    "chain",
    "span",
    "contractible_groupoid",
    "transformation_monoid",
    "adjoin_initial",
    "adjoin_terminal",
    "coproduct",
    "join",
    "inclusion",
    "constant_functor",
    "full_subcategory",
    "cyclic_hom",
]


def point(obj: str = "*", name: str = "pt") -> FinCategory:
    return FinCategory([obj], [(f"id_{obj}", obj, obj)], {obj: f"id_{obj}"},
                       {(f"id_{obj}", f"id_{obj}"): f"id_{obj}"}, name=name)


def discrete(objects: Sequence[str], name: str | None = None) -> FinCategory:
    mors = [(f"id_{o}", o, o) for o in objects]
    return FinCategory(objects, mors, {o: f"id_{o}" for o in objects},
                       {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objects}, name=name or f"disc{len(objects)}")


def group(elements: Sequence[str], mult: Mapping[tuple[str, str], str], obj: str = "*",
          name: str | None = None) -> FinCategory:
    """One-object category; ``elements[0]`` is the identity, ``mult[(g, h)] = g·h``."""
    mors = [(e, obj, obj) for e in elements]
    return FinCategory([obj], mors, {obj: elements[0]}, dict(mult), name=name)


def cyclic_group(n: int, obj: str = "*", gen: str = "g", name: str | None = None) -> FinCategory:
    """``ℤ/n`` on one object; elements ``id_*, g, g2, ...``."""
    def el(k):
        k %= n
        return f"id_{obj}" if k == 0 else (gen if k == 1 else f"{gen}{k}")
    elements = [el(k) for k in range(n)]
    mult = {(el(a), el(b)): el(a + b) for a in range(n) for b in range(n)}
    return group(elements, mult, obj, name=name or f"Z/{n}")


def klein_four(obj: str = "*") -> FinCategory:
    els = [(0, 0), (1, 0), (0, 1), (1, 1)]
    names = {(0, 0): f"id_{obj}", (1, 0): "x", (0, 1): "y", (1, 1): "xy"}
    mult = {(names[a], names[b]): names[((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)] for a in els for b in els}
    return group([names[e] for e in els], mult, obj, name="V4")


def symmetric_group_3(obj: str = "*") -> FinCategory:
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
    names = [f"id_{obj}", "s", "t", "u", "r", "r2"]
    lookup = dict(zip(perms, names))
    mult = {}
    for p, pn in zip(perms, names):
        for q, qn in zip(perms, names):
            mult[(pn, qn)] = lookup[tuple(p[q[i]] for i in range(3))]
    return group(names, mult, obj, name="S3")


def poset(objects: Sequence[str], relations: Sequence[tuple[str, str]], name: str | None = None) -> FinCategory:
    """Category of a finite poset generated by ``a ≤ b`` pairs (one arrow ``a->b``)."""
    le = {(o, o) for o in objects} | {tuple(r) for r in relations}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in _product(list(le), repeat=2):
            if b == c and (a, d) not in le:
                le.add((a, d))
                changed = True
    for a, b in le:
        if a != b and (b, a) in le:
            raise ValueError(f"relations are not antisymmetric: {a} and {b}")

    def mname(a, b):
        return f"id_{a}" if a == b else f"{a}->{b}"

    order = {o: i for i, o in enumerate(objects)}
    pairs = sorted(le, key=lambda p: (p[0] != p[1], order[p[0]], order[p[1]]))
    mors = [(mname(a, b), a, b) for a, b in pairs]
    comp = {}
    for a, b in pairs:
        for c, d in pairs:
            if b == c:
                comp[(mname(c, d), mname(a, b))] = mname(a, d)
    return FinCategory(objects, mors, {o: mname(o, o) for o in objects}, comp, name=name)


def chain(n: int, name: str | None = None) -> FinCategory:
    objs = [str(i) for i in range(n)]
    return poset(objs, [(objs[i], objs[i + 1]) for i in range(n - 1)], name=name or f"[{n - 1}]")


def span(name: str = "span") -> FinCategory:
    """``a ← c → b``."""
    return poset(["c", "a", "b"], [("c", "a"), ("c", "b")], name=name)


def contractible_groupoid(objects: Sequence[str], name: str | None = None) -> FinCategory:
    """Exactly one morphism between any two objects."""
    def mname(a, b):
        return f"id_{a}" if a == b else f"{a}->{b}"
    mors = [(mname(a, b), a, b) for a in objects for b in objects]
    comp = {(mname(b, c), mname(a, b)): mname(a, c) for a in objects for b in objects for c in objects}
    return FinCategory(objects, mors, {o: mname(o, o) for o in objects}, comp,
                       name=name or f"E{len(objects)}")


def transformation_monoid(generators: Sequence[Sequence[int]], obj: str = "*", name: str | None = None,
                          limit: int = 64) -> FinCategory:
    """One-object category of the monoid of self-maps generated by ``generators``.

    Elements are named by shortest generator words (``m0``, ``m0m1``, ...).
    """
    n = len(generators[0]) if generators else 0
    ident = tuple(range(n))
    names = {ident: f"id_{obj}"}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for k, g in enumerate(generators):
                q = tuple(g[p[i]] for i in range(n))  # apply p, then g
                if q not in names:
                    names[q] = (f"m{k}" if p == ident else f"m{k}·{names[p]}")
                    nxt.append(q)
                    if len(names) > limit:
                        raise ValueError("monoid larger than the limit")
        frontier = nxt
    elements = list(names)
    mult = {}
    for a in elements:
        for b in elements:
            # a ∘ b: apply b first
            mult[(names[a], names[b])] = names[tuple(a[b[i]] for i in range(n))]
    return group([names[e] for e in elements], mult, obj, name=name)


def _extend(C: FinCategory, new_obj: str, arrows: Mapping[str, str], initial: bool,
            name: str | None) -> FinCategory:
    if new_obj in C.obj_index:
        raise ValueError(f"object {new_obj} already exists")
    idn = f"id_{new_obj}"
    objects = list(C.objects) + [new_obj]
    mors = [(m, C.source(m), C.target(m)) for m in C.morphisms] + [(idn, new_obj, new_obj)]
    for x in C.objects:
        m = arrows[x]
        mors.append((m, new_obj, x) if initial else (m, x, new_obj))
    comp = {}
    for g in C.morphisms:
        for f in C.morphisms:
            if C.source(g) == C.target(f):
                comp[(g, f)] = C.compose(g, f)
    comp[(idn, idn)] = idn
    for x in C.objects:
        m = arrows[x]
        if initial:
            comp[(m, idn)] = m
            for h in C.morphisms:
                if C.source(h) == x:
                    comp[(h, m)] = arrows[C.target(h)]
        else:
            comp[(idn, m)] = m
            for h in C.morphisms:
                if C.target(h) == x:
                    comp[(m, h)] = arrows[C.source(h)]
    ids = {o: C.identity(o) for o in C.objects}
    ids[new_obj] = idn
    return FinCategory(objects, mors, ids, comp, name=name)


def adjoin_initial(C: FinCategory, new_obj: str = "0", arrows: Mapping[str, str] | None = None,
                   name: str | None = None) -> FinCategory:
    """``C`` with a disjoint initial object; arrow names default to ``0->x``."""
    arrows = arrows or {x: f"{new_obj}->{x}" for x in C.objects}
    return _extend(C, new_obj, arrows, True, name or (f"{C.name}+0" if C.name else None))


def adjoin_terminal(C: FinCategory, new_obj: str = "1", arrows: Mapping[str, str] | None = None,
                    name: str | None = None) -> FinCategory:
    arrows = arrows or {x: f"{x}->{new_obj}" for x in C.objects}
    return _extend(C, new_obj, arrows, False, name or (f"{C.name}+1" if C.name else None))


def coproduct(A: FinCategory, B: FinCategory, name: str | None = None) -> FinCategory:
    """Disjoint union; identifiers get ``1.`` / ``2.`` prefixes."""
    objects = [f"1.{o}" for o in A.objects] + [f"2.{o}" for o in B.objects]
    mors, ids, comp = [], {}, {}
    for tag, C in (("1.", A), ("2.", B)):
        for m in C.morphisms:
            mors.append((tag + m, tag + C.source(m), tag + C.target(m)))
        for o in C.objects:
            ids[tag + o] = tag + C.identity(o)
        for g in C.morphisms:
            for f in C.morphisms:
                if C.source(g) == C.target(f):
                    comp[(tag + g, tag + f)] = tag + C.compose(g, f)
    return FinCategory(objects, mors, ids, comp, name=name)


def join(A: FinCategory, B: FinCategory, name: str | None = None) -> FinCategory:
    """``A ⋆ B``: the coproduct plus one arrow from every object of A to every object of B."""
    S = coproduct(A, B)
    objects = list(S.objects)
    mors = [(m, S.source(m), S.target(m)) for m in S.morphisms]
    comp = {}
    for g in S.morphisms:
        for f in S.morphisms:
            if S.source(g) == S.target(f):
                comp[(g, f)] = S.compose(g, f)

    def arrow(a, b):
        return f"{a}=>{b}"

    for a in A.objects:
        for b in B.objects:
            mors.append((arrow("1." + a, "2." + b), "1." + a, "2." + b))
    for a in A.objects:
        for b in B.objects:
            u = arrow("1." + a, "2." + b)
            for h in A.morphisms:
                if A.target(h) == a:
                    comp[(u, "1." + h)] = arrow("1." + A.source(h), "2." + b)
            for h in B.morphisms:
                if B.source(h) == b:
                    comp[("2." + h, u)] = arrow("1." + a, "2." + B.target(h))
    ids = {o: S.identity(o) for o in S.objects}
    return FinCategory(objects, mors, ids, comp, name=name)


def inclusion(D: FinCategory, C: FinCategory, on_objects: Mapping[str, str] | None = None,
              on_morphisms: Mapping[str, str] | None = None, name: str | None = None) -> Functor:
    """Functor sending identifiers to equal identifiers unless overridden."""
    on_o = {o: o for o in D.objects}
    on_o.update(on_objects or {})
    on_m = {m: m for m in D.morphisms}
    on_m.update(on_morphisms or {})
    return Functor(D, C, on_o, on_m, name=name)


def constant_functor(D: FinCategory, C: FinCategory, obj: str, name: str | None = None) -> Functor:
    idc = C.identity(obj)
    return Functor(D, C, {o: obj for o in D.objects}, {m: idc for m in D.morphisms}, name=name)


def full_subcategory(C: FinCategory, objects: Sequence[str], name: str | None = None) -> tuple[FinCategory, Functor]:
    """The full subcategory on ``objects`` and its inclusion into C."""
    keep = [o for o in C.objects if o in set(objects)]
    mors = [m for m in C.morphisms if C.source(m) in keep and C.target(m) in keep]
    comp = {(g, f): C.compose(g, f) for g in mors for f in mors if C.source(g) == C.target(f)}
    D = FinCategory(keep, [(m, C.source(m), C.target(m)) for m in mors], {o: C.identity(o) for o in keep},
                    comp, name=name)
    return D, inclusion(D, C)


def cyclic_hom(n: int, m: int, r: int, obj: str = "*", gen: str = "g") -> Functor:
    """The homomorphism ``ℤ/n → ℤ/m``, ``1 ↦ r``, between :func:`cyclic_group` categories."""
    if (n * r) % m:
        raise ValueError(f"1 ↦ {r} does not define a homomorphism Z/{n} → Z/{m}")
    A, B = cyclic_group(n, obj, gen), cyclic_group(m, obj, gen)

    def el(k, size):
        k %= size
        return f"id_{obj}" if k == 0 else (gen if k == 1 else f"{gen}{k}")

    return Functor(A, B, {obj: obj}, {el(k, n): el(k * r, m) for k in range(n)})
