"""JSON input files and report serialization.

Categories, functors, diagrams and squares are read from UTF-8 JSON. A
reference to another file may be an inline object, a path relative to the
referring file, or ``@name`` for a file of the bundled corpus. Integers
outside the exactly representable range of JSON numbers (|n| > 2**53) are
written as decimal strings and accepted as such on input.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .abelian import FgAbGroup, IntMatrix
from .dmod import Diagram, DiagramError, const_diagram
from .fincat import CategoryError, FinCategory, Functor, FunctorError, PushoutSquare, pushout, validate

SAFE_INT = 2 ** 53


class InputError(ValueError):
    """A malformed or invalid input file; the message names the file and position."""


def corpus_dir() -> Path:
    return Path(str(resources.files("dcolim") / "corpus"))


def corpus_files() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.json"))


def resolve_path(ref: str, base: Path | None = None) -> Path:
    if ref.startswith("@"):
        name = ref[1:]
        path = corpus_dir() / (name if name.endswith(".json") else name + ".json")
        if not path.exists():
            raise InputError(f"no bundled corpus file named {name!r}")
        return path
    path = Path(ref)
    if not path.is_absolute() and base is not None:
        path = base / path
    return path


def load_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: cannot read file ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None


def _parse_int(x: Any, where: str) -> int:
    if isinstance(x, bool):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise InputError(f"{where}: expected an integer, got {x!r}")


def _parse_matrix(rows: Any, where: str) -> list[list[int]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    out = [[_parse_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    if out and len({len(r) for r in out}) != 1:
        raise InputError(f"{where}: rows have different lengths")
    return out


class Loader:
    """Reads input files, caching categories by resolved path."""

    def __init__(self):
        self._cats: dict[Path, FinCategory] = {}

    def _obj(self, ref: Any, base: Path | None, what: str) -> tuple[Mapping, Path | None, str]:
        if isinstance(ref, Mapping):
            return ref, base, f"{what} (inline)"
        if isinstance(ref, str):
            path = resolve_path(ref, base)
            data = load_json(path)
            if not isinstance(data, Mapping):
                raise InputError(f"{path}: expected a JSON object")
            return data, path.parent, str(path)
        raise InputError(f"{what}: expected an object or a file reference, got {ref!r}")

    def category(self, ref: Any, base: Path | None = None, name: str | None = None) -> FinCategory:
        if isinstance(ref, str):
            path = resolve_path(ref, base).resolve()
            if path in self._cats:
                return self._cats[path]
        data, _, where = self._obj(ref, base, "category")
        try:
            C = validate(data, name=name or data.get("name") or _stem(ref))
        except (CategoryError, TypeError, ValueError) as e:
            raise InputError(f"{where}: {e}") from None
        if isinstance(ref, str):
            self._cats[resolve_path(ref, base).resolve()] = C
        return C

    def functor(self, ref: Any, base: Path | None = None, domain: FinCategory | None = None,
                codomain: FinCategory | None = None, name: str | None = None) -> Functor:
        data, fbase, where = self._obj(ref, base, "functor")
        for key in ("on_objects",):
            if key not in data:
                raise InputError(f"{where}: missing key {key!r}")
        D = domain if domain is not None else self.category(data.get("domain"), fbase)
        C = codomain if codomain is not None else self.category(data.get("codomain"), fbase)
        try:
            return Functor(D, C, data["on_objects"], data.get("on_morphisms", {}),
                           name=name or data.get("name") or _stem(ref))
        except (FunctorError, CategoryError, KeyError) as e:
            raise InputError(f"{where}: {e}") from None

    def diagram(self, ref: Any, base: Path | None = None, category: FinCategory | None = None,
                variance: str | None = None) -> Diagram:
        """A diagram file, or the shorthands ``const``, ``const:Z``, ``const:Z/k``."""
        if isinstance(ref, str) and ref.startswith("const"):
            if category is None:
                raise InputError("a constant diagram needs a category")
            return const_diagram(category, _const_group(ref), variance or "left")
        data, dbase, where = self._obj(ref, base, "diagram")
        C = category if category is not None else self.category(data.get("base"), dbase)
        if "const" in data:
            G = _group_from_spec(data["const"], where + ": const")
            return const_diagram(C, G, data.get("variance", variance or "left"))
        if "groups" not in data:
            raise InputError(f"{where}: missing key 'groups'")
        clean = dict(data)
        groups = {}
        for o, spec in data["groups"].items():
            if o not in C.obj_index:
                raise InputError(f"{where}: group given for unknown object {o!r}")
            groups[o] = _group_spec_dict(spec, f"{where}: groups[{o}]")
        clean["groups"] = groups
        clean["maps"] = {m: _parse_matrix(v, f"{where}: maps[{m}]") for m, v in data.get("maps", {}).items()}
        if variance is not None:
            clean["variance"] = variance
        try:
            return Diagram.from_dict(clean, C)
        except (DiagramError, ValueError) as e:
            raise InputError(f"{where}: {e}") from None

    def square(self, ref: Any, base: Path | None = None, require_corner: bool = False,
               word_bound: int = 8, size_bound: int = 10000) -> tuple[PushoutSquare | None, dict]:
        """Returns ``(square, legs)``; the corner C is computed as a pushout when absent.

        ``legs`` holds ``F1`` and ``F2``. With ``require_corner=False`` and no C
        given the square is ``None`` (prediction mode needs only the legs).
        """
        data, sbase, where = self._obj(ref, base, "square")
        cats = data.get("categories")
        funs = data.get("functors")
        if not isinstance(cats, Mapping) or not isinstance(funs, Mapping):
            raise InputError(f"{where}: expected 'categories' and 'functors' objects")
        for k in ("C0", "C1", "C2"):
            if k not in cats:
                raise InputError(f"{where}: missing category {k}")
        for k in ("F1", "F2"):
            if k not in funs:
                raise InputError(f"{where}: missing functor {k}")
        C0 = self.category(cats["C0"], sbase, name="C0")
        C1 = self.category(cats["C1"], sbase, name="C1")
        C2 = self.category(cats["C2"], sbase, name="C2")
        F1 = self.functor(funs["F1"], sbase, C0, C1, name="F1")
        F2 = self.functor(funs["F2"], sbase, C0, C2, name="F2")
        legs = {"F1": F1, "F2": F2}
        if "C" in cats:
            C = self.category(cats["C"], sbase, name="C")
            for k in ("I1", "I2"):
                if k not in funs:
                    raise InputError(f"{where}: category C given but functor {k} missing")
            I1 = self.functor(funs["I1"], sbase, C1, C, name="I1")
            I2 = self.functor(funs["I2"], sbase, C2, C, name="I2")
            try:
                return PushoutSquare(F1, F2, I1, I2), legs
            except FunctorError as e:
                raise InputError(f"{where}: {e}") from None
        if not require_corner:
            return None, legs
        res = pushout(F1, F2, word_bound=word_bound, size_bound=size_bound)
        res.category.name = "C"
        res.I1.name, res.I2.name = "I1", "I2"
        legs["certificate"] = res.certificate
        return res.square(F1, F2), legs


def _stem(ref: Any) -> str | None:
    return Path(ref.lstrip("@")).stem if isinstance(ref, str) else None


def _const_group(ref: str) -> FgAbGroup:
    if ref in ("const", "const:Z"):
        return FgAbGroup.free(1)
    if ref.startswith("const:Z/"):
        try:
            return FgAbGroup.cyclic(int(ref[len("const:Z/"):]))
        except ValueError:
            pass
    raise InputError(f"unknown constant diagram {ref!r} (use const, const:Z or const:Z/k)")


def _group_spec_dict(spec: Any, where: str) -> dict:
    if not isinstance(spec, Mapping):
        raise InputError(f"{where}: expected an object")
    if "relations" in spec:
        rel = _parse_matrix(spec["relations"], where + ".relations")
        out = {"relations": rel}
        if "generators" in spec:
            out["generators"] = _parse_int(spec["generators"], where + ".generators")
        elif not rel:
            raise InputError(f"{where}: an empty relation matrix needs 'generators'")
        return out
    rank = _parse_int(spec.get("rank", 0), where + ".rank")
    tors = [_parse_int(t, where + ".torsion") for t in spec.get("torsion", [])]
    if rank < 0 or any(t < 0 for t in tors):
        raise InputError(f"{where}: negative rank or torsion coefficient")
    return {"rank": rank, "torsion": tors}


def _group_from_spec(spec: Any, where: str) -> FgAbGroup:
    d = _group_spec_dict(spec, where)
    if "relations" in d:
        rel = d["relations"]
        return FgAbGroup(IntMatrix(rel, len(rel[0])) if rel else IntMatrix.zeros(d["generators"], 0))
    return FgAbGroup.from_invariants(d["rank"], d["torsion"])


def json_safe(x: Any) -> Any:
    """Recursively replace integers beyond ±2**53 by decimal strings."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x) if abs(x) > SAFE_INT else x
    if isinstance(x, Mapping):
        return {str(k): json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [json_safe(v) for v in x]
    return x


def dumps(report: Mapping) -> str:
    return json.dumps(json_safe(report), sort_keys=True, indent=2, ensure_ascii=False)
