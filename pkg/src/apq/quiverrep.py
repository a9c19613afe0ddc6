"""The canonically oriented quiver of type A~(p,q) and its representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import UsageError
from .exactnum import Matrix, format_rational, parse_rational, block_diagonal

__all__ = [
    "Quiver",
    "Representation",
    "build_quiver",
    "validate",
    "comp_factor_mult",
    "supp",
    "Supp",
    "sincere",
    "direct_sum",
    "zero_representation",
    "representation_to_json",
    "representation_from_json",
    "REPRESENTATION_SCHEMA",
]

Arrow = tuple[int, int]


@dataclass(frozen=True)
class Quiver:
    """Vertices ``0..p+q-1``; ``p+q-1`` is the unique source, ``0`` the sink.

    Arrows are stored top path first (``p+q-1 -> p-1 -> ... -> 1 -> 0``), then
    the bottom path (``p+q-1 -> p+q-2 -> ... -> p -> 0``), each from source to
    sink. That order is the serialization order of representation maps.
    """

    p: int
    q: int
    arrows: tuple[Arrow, ...] = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def source(self) -> int:
        return self.n - 1

    @property
    def sink(self) -> int:
        return 0

    @property
    def top_interior(self) -> range:
        return range(1, self.p)

    @property
    def bottom_interior(self) -> range:
        return range(self.p, self.p + self.q - 1)

    def in_arrows(self, v: int) -> list[int]:
        return [k for k, (_, t) in enumerate(self.arrows) if t == v]

    def out_arrows(self, v: int) -> list[int]:
        return [k for k, (s, _) in enumerate(self.arrows) if s == v]

    @cached_property
    def _paths(self) -> dict[tuple[int, int], tuple[tuple[int, ...], ...]]:
        # every path is a tuple of arrow indices, in traversal order
        out: dict[tuple[int, int], list[tuple[int, ...]]] = {}

        def walk(start: int, at: int, prefix: tuple[int, ...]) -> None:
            out.setdefault((start, at), []).append(prefix)
            for k in self.out_arrows(at):
                walk(start, self.arrows[k][1], prefix + (k,))

        for v in self.vertices:
            walk(v, v, ())
        return {key: tuple(val) for key, val in out.items()}

    def paths(self, u: int, w: int) -> tuple[tuple[int, ...], ...]:
        """All paths from ``u`` to ``w`` (the trivial path when ``u == w``)."""
        return self._paths.get((u, w), ())

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise UsageError(f"vertex {v!r} outside [0, {self.n - 1}]")
        return v


def build_quiver(p: int, q: int) -> Quiver:
    if p < 1:
        raise UsageError(f"p must be at least 1, got p={p}")
    if q < p:
        raise UsageError(f"need p <= q, got p={p}, q={q}")
    if q < 2:
        raise UsageError(f"q must be at least 2, got q={q}")
    s = p + q - 1
    top = [s, *range(p - 1, 0, -1), 0]
    bottom = [s, *range(p + q - 2, p - 1, -1), 0]
    arrows = tuple(zip(top, top[1:])) + tuple(zip(bottom, bottom[1:]))
    return Quiver(p, q, arrows)


@dataclass(frozen=True, eq=False)
class Representation:
    """One vector space per vertex and one matrix per arrow.

    The map of arrow ``u -> v`` has shape ``dims[v] x dims[u]``. Instances are
    treated as immutable; derived data (path matrices, presentations) is cached
    on the object.
    """

    quiver: Quiver
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "maps", tuple(self.maps))

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def path_map(self, path: Sequence[int]) -> Matrix:
        cache = self.__dict__.setdefault("_path_cache", {})
        key = tuple(path)
        if key not in cache:
            if not key:
                raise ValueError("trivial path needs a vertex; use Matrix.identity")
            m = self.maps[key[0]]
            for k in key[1:]:
                m = self.maps[k] @ m
            cache[key] = m
        return cache[key]

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"<Representation {label}dims={self.dims} on A~({self.quiver.p},{self.quiver.q})>"


def zero_representation(quiver: Quiver) -> Representation:
    dims = (0,) * quiver.n
    return Representation(quiver, dims, tuple(Matrix.zeros(0, 0) for _ in quiver.arrows))


def validate(rep: Representation) -> list[str]:
    """Empty list when every arrow's matrix matches the dimension vector."""
    errors = []
    quiver = rep.quiver
    if len(rep.dims) != quiver.n:
        errors.append(f"dimension vector has length {len(rep.dims)}, expected {quiver.n}")
        return errors
    if any(d < 0 for d in rep.dims):
        errors.append("negative dimension")
    if len(rep.maps) != len(quiver.arrows):
        errors.append(f"{len(rep.maps)} maps given for {len(quiver.arrows)} arrows")
        return errors
    for k, ((u, v), m) in enumerate(zip(quiver.arrows, rep.maps)):
        want = (rep.dims[v], rep.dims[u])
        if m.shape != want:
            errors.append(f"arrow {k} ({u}->{v}): map is {m.rows}x{m.cols}, expected {want[0]}x{want[1]}")
    return errors


def require_valid(rep: Representation) -> Representation:
    errors = validate(rep)
    if errors:
        raise UsageError("invalid representation: " + "; ".join(errors))
    return rep


def comp_factor_mult(rep: Representation, v: int) -> int:
    """Multiplicity of the simple at ``v`` as a composition factor (= dim at v)."""
    rep.quiver.check_vertex(v)
    return rep.dims[v]


def supp(rep: Representation) -> frozenset[int]:
    return frozenset(v for v, d in enumerate(rep.dims) if d)


def Supp(reps: Iterable[Representation]) -> frozenset[int]:
    out: frozenset[int] = frozenset()
    for r in reps:
        out |= supp(r)
    return out


def sincere(rep: Representation) -> bool:
    return all(d > 0 for d in rep.dims)


def direct_sum(reps: Sequence[Representation], quiver: Quiver | None = None) -> Representation:
    if not reps:
        if quiver is None:
            raise UsageError("direct sum of nothing needs an explicit quiver")
        return zero_representation(quiver)
    quiver = reps[0].quiver
    if any(r.quiver != quiver for r in reps):
        raise UsageError("direct sum of representations over different quivers")
    if len(reps) == 1:
        return reps[0]
    dims = tuple(sum(r.dims[v] for r in reps) for v in quiver.vertices)
    maps = tuple(block_diagonal([r.maps[k] for r in reps]) for k in range(len(quiver.arrows)))
    return Representation(quiver, dims, maps, name=" + ".join(r.name or "?" for r in reps))


# -- JSON -------------------------------------------------------------------

REPRESENTATION_SCHEMA = {
    "type": "object",
    "required": ["p", "q", "dims", "maps"],
    "properties": {
        "p": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 2},
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "maps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst", "rows", "cols", "entries"],
                "properties": {
                    "src": {"type": "integer", "minimum": 0},
                    "dst": {"type": "integer", "minimum": 0},
                    "rows": {"type": "integer", "minimum": 0},
                    "cols": {"type": "integer", "minimum": 0},
                    "entries": {
                        "type": "array",
                        "items": {"type": "string", "pattern": r"^-?[0-9]+/[1-9][0-9]*$"},
                    },
                },
            },
        },
    },
}


def representation_to_json(rep: Representation) -> dict:
    return {
        "p": rep.quiver.p,
        "q": rep.quiver.q,
        "dims": list(rep.dims),
        "maps": [
            {
                "src": u,
                "dst": v,
                "rows": m.rows,
                "cols": m.cols,
                "entries": [format_rational(e) for e in m.entries],
            }
            for (u, v), m in zip(rep.quiver.arrows, rep.maps)
        ],
    }


def representation_from_json(data: dict) -> Representation:
    quiver = build_quiver(int(data["p"]), int(data["q"]))
    maps = []
    if len(data["maps"]) != len(quiver.arrows):
        raise UsageError("map count does not match the quiver")
    for (u, v), item in zip(quiver.arrows, data["maps"]):
        if (item["src"], item["dst"]) != (u, v):
            raise UsageError(f"map for arrow {item['src']}->{item['dst']} out of storage order")
        maps.append(Matrix(item["rows"], item["cols"], [parse_rational(e) for e in item["entries"]]))
    return Representation(quiver, tuple(data["dims"]), tuple(maps))
