"""Named modules over A~(p,q): descriptors, realizations and symbolic tau.

Projectives, injectives, simples and the quasi-simple regular modules are
written down explicitly. Preprojective ``tau^-t P_v`` and preinjective
``tau^t I_v`` modules are realized by sampling a random representation with
the right dimension vector and certifying that its endomorphism ring is the
ground field; an exceptional module over a hereditary algebra is determined by
its dimension vector, so the certificate pins the isomorphism class.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import CertificationError, DescriptorSyntaxError, UsageError, VanishesUnderTau
from .exactnum import Matrix, format_rational
from .homcalc import coxeter_apply, end_dim, euler_form
from .quiverrep import Quiver, Representation

__all__ = [
    "Proj",
    "Inj",
    "Simple",
    "TauProj",
    "TauInj",
    "RegInf",
    "RegZero",
    "Homog",
    "FMember",
    "GMember",
    "Descriptor",
    "RealizationCertificate",
    "Catalog",
    "check_descriptor",
    "normalize",
    "descriptor_class",
    "descriptor_dim",
    "realize",
    "tau_desc",
    "F_system",
    "G_system",
    "tau_power_set",
    "parse_descriptor",
    "parse_sequence",
    "MAX_RETRIES",
]

MAX_RETRIES = 32
SMALL_BOUND = 7
LARGE_BOUND = 97
ESCALATE_AFTER = 8


@dataclass(frozen=True)
class Proj:
    vertex: int

    def __str__(self) -> str:
        return f"P({self.vertex})"


@dataclass(frozen=True)
class Inj:
    vertex: int

    def __str__(self) -> str:
        return f"I({self.vertex})"


@dataclass(frozen=True)
class Simple:
    vertex: int

    def __str__(self) -> str:
        return f"S({self.vertex})"


@dataclass(frozen=True)
class TauProj:
    """``tau^-t P_v`` with ``t >= 1``."""

    t: int
    vertex: int

    def __str__(self) -> str:
        return f"tP({self.t},{self.vertex})"


@dataclass(frozen=True)
class TauInj:
    """``tau^t I_v`` with ``t >= 1``."""

    t: int
    vertex: int

    def __str__(self) -> str:
        return f"tI({self.t},{self.vertex})"


@dataclass(frozen=True)
class RegInf:
    """Quasi-simple ``E_i^(inf)`` of the rank-p tube."""

    i: int

    def __str__(self) -> str:
        return f"Einf({self.i})"


@dataclass(frozen=True)
class RegZero:
    """Quasi-simple ``E_j^(0)`` of the rank-q tube."""

    j: int

    def __str__(self) -> str:
        return f"Ezero({self.j})"


@dataclass(frozen=True)
class Homog:
    """Quasi-simple ``E^(lambda)`` of a homogeneous tube."""

    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))

    def __str__(self) -> str:
        return f"Ehom({format_rational(self.lam)})"


@dataclass(frozen=True)
class FMember:
    """``F_i = E_{p-i}^(inf)``."""

    i: int

    def __str__(self) -> str:
        return f"F({self.i})"


@dataclass(frozen=True)
class GMember:
    """``G_i = E_{q-i}^(0)``."""

    i: int

    def __str__(self) -> str:
        return f"G({self.i})"


Descriptor = Union[Proj, Inj, Simple, TauProj, TauInj, RegInf, RegZero, Homog, FMember, GMember]


@dataclass(frozen=True)
class RealizationCertificate:
    end_dim: int
    self_ext: int
    retries: int
    seed: int


# -- validation and normal forms -------------------------------------------


def _in(value: int, lo: int, hi: int, what: str, desc) -> None:
    if not isinstance(value, int) or not lo <= value <= hi:
        raise UsageError(f"{desc}: {what} {value!r} outside [{lo}, {hi}]")


def check_descriptor(desc: Descriptor, quiver: Quiver) -> Descriptor:
    n, p, q = quiver.n, quiver.p, quiver.q
    if isinstance(desc, (Proj, Inj, Simple)):
        _in(desc.vertex, 0, n - 1, "vertex", desc)
    elif isinstance(desc, (TauProj, TauInj)):
        _in(desc.vertex, 0, n - 1, "vertex", desc)
        _in(desc.t, 1, 10**9, "shift", desc)
    elif isinstance(desc, RegInf):
        _in(desc.i, 1, p, "index", desc)
    elif isinstance(desc, RegZero):
        _in(desc.j, 1, q, "index", desc)
    elif isinstance(desc, Homog):
        if desc.lam == 0:
            raise UsageError("Ehom needs a nonzero lambda")
    elif isinstance(desc, FMember):
        _in(desc.i, 1, p - 1, "index", desc)
    elif isinstance(desc, GMember):
        _in(desc.i, 1, q - 1, "index", desc)
    else:
        raise UsageError(f"not a module descriptor: {desc!r}")
    return desc


def normalize(desc: Descriptor, quiver: Quiver) -> Descriptor:
    """Canonical name of the module: simples and F/G map onto their catalog aliases."""
    check_descriptor(desc, quiver)
    p = quiver.p
    if isinstance(desc, FMember):
        return RegInf(p - desc.i)
    if isinstance(desc, GMember):
        return RegZero(quiver.q - desc.i)
    if isinstance(desc, Simple):
        v = desc.vertex
        if v == quiver.sink:
            return Proj(v)
        if v == quiver.source:
            return Inj(v)
        if v < p:
            return RegInf(v)
        return RegZero(v - p + 1)
    return desc


def descriptor_class(desc: Descriptor, quiver: Quiver) -> str:
    d = normalize(desc, quiver)
    if isinstance(d, (Proj, TauProj)):
        return "postprojective"
    if isinstance(d, (Inj, TauInj)):
        return "preinjective"
    return "regular"


# -- dimension vectors and explicit realizations -----------------------------


def _proj_dims(quiver: Quiver, v: int) -> tuple[int, ...]:
    return tuple(len(quiver.paths(v, w)) for w in quiver.vertices)


def _inj_dims(quiver: Quiver, v: int) -> tuple[int, ...]:
    return tuple(len(quiver.paths(w, v)) for w in quiver.vertices)


def _reg_inf_dims(quiver: Quiver, i: int) -> tuple[int, ...]:
    if i < quiver.p:
        return tuple(int(w == i) for w in quiver.vertices)
    return tuple(0 if w in quiver.top_interior else 1 for w in quiver.vertices)


def _reg_zero_dims(quiver: Quiver, j: int) -> tuple[int, ...]:
    if j < quiver.q:
        v = quiver.p + j - 1
        return tuple(int(w == v) for w in quiver.vertices)
    return tuple(0 if w in quiver.bottom_interior else 1 for w in quiver.vertices)


def descriptor_dim(desc: Descriptor, quiver: Quiver) -> tuple[int, ...]:
    d = normalize(desc, quiver)
    if isinstance(d, Proj):
        return _proj_dims(quiver, d.vertex)
    if isinstance(d, Inj):
        return _inj_dims(quiver, d.vertex)
    if isinstance(d, TauProj):
        return coxeter_apply(quiver, _proj_dims(quiver, d.vertex), -d.t)
    if isinstance(d, TauInj):
        return coxeter_apply(quiver, _inj_dims(quiver, d.vertex), d.t)
    if isinstance(d, RegInf):
        return _reg_inf_dims(quiver, d.i)
    if isinstance(d, RegZero):
        return _reg_zero_dims(quiver, d.j)
    return (1,) * quiver.n


def _scalar_maps(quiver: Quiver, dims, values) -> tuple[Matrix, ...]:
    """Maps for a representation with every space of dimension <= 1."""
    maps = []
    for k, (u, v) in enumerate(quiver.arrows):
        r, c = dims[v], dims[u]
        maps.append(Matrix(r, c, [values(k)] if r and c else None))
    return tuple(maps)


def _path_module(quiver: Quiver, v: int, injective: bool) -> Representation:
    if injective:
        basis = {w: list(quiver.paths(w, v)) for w in quiver.vertices}
    else:
        basis = {w: list(quiver.paths(v, w)) for w in quiver.vertices}
    dims = tuple(len(basis[w]) for w in quiver.vertices)
    maps = []
    for k, (u, w) in enumerate(quiver.arrows):
        rows = [[0] * dims[u] for _ in range(dims[w])]
        for col, path in enumerate(basis[u]):
            if injective:
                if path and path[0] == k:
                    rows[basis[w].index(path[1:])][col] = 1
            else:
                rows[basis[w].index(path + (k,))][col] = 1
        maps.append(Matrix.from_rows(rows, dims[u]) if dims[w] else Matrix.zeros(0, dims[u]))
    name = f"I({v})" if injective else f"P({v})"
    return Representation(quiver, dims, tuple(maps), name=name)


def _explicit(desc: Descriptor, quiver: Quiver) -> Representation:
    name = str(desc)
    if isinstance(desc, Simple):
        dims = tuple(int(w == desc.vertex) for w in quiver.vertices)
        return Representation(quiver, dims, _scalar_maps(quiver, dims, lambda k: 0), name=name)
    d = normalize(desc, quiver)
    if isinstance(d, Proj):
        rep = _path_module(quiver, d.vertex, injective=False)
    elif isinstance(d, Inj):
        rep = _path_module(quiver, d.vertex, injective=True)
    elif isinstance(d, RegInf):
        dims = _reg_inf_dims(quiver, d.i)
        # E_p^(inf): identity along the bottom path, zero on the top path
        top = set(range(quiver.p))
        rep = Representation(quiver, dims, _scalar_maps(quiver, dims, lambda k: 0 if k in top else 1))
    elif isinstance(d, RegZero):
        dims = _reg_zero_dims(quiver, d.j)
        top = set(range(quiver.p))
        rep = Representation(quiver, dims, _scalar_maps(quiver, dims, lambda k: 1 if k in top else 0))
    elif isinstance(d, Homog):
        dims = (1,) * quiver.n
        lam_arrow = quiver.p - 1  # last top arrow: 1 -> 0, or p+q-1 -> 0 when p = 1
        rep = Representation(
            quiver, dims, _scalar_maps(quiver, dims, lambda k: d.lam if k == lam_arrow else 1)
        )
    else:
        raise AssertionError(f"{desc} has no explicit realization")
    return Representation(quiver, rep.dims, rep.maps, name=name)


def _sample(quiver: Quiver, dims, rng: random.Random, bound: int) -> tuple[Matrix, ...]:
    maps = []
    for u, v in quiver.arrows:
        r, c = dims[v], dims[u]
        maps.append(Matrix(r, c, [rng.randint(-bound, bound) for _ in range(r * c)]))
    return tuple(maps)


def _attempt_seed(seed: int, desc: Descriptor, attempt: int) -> str:
    return f"{seed}|{desc}|{attempt}"


def realize(
    desc: Descriptor, quiver: Quiver, seed: int = 0
) -> tuple[Representation, RealizationCertificate]:
    """Concrete representation of ``desc`` plus its certificate.

    Raises :class:`CertificationError` when ``MAX_RETRIES`` retries never give a
    trivial endomorphism ring.
    """
    d = normalize(desc, quiver)
    if not isinstance(d, (TauProj, TauInj)):
        rep = _explicit(desc, quiver)
        e = end_dim(rep)
        self_ext = e - euler_form(quiver, rep.dims, rep.dims)
        return rep, RealizationCertificate(e, self_ext, 0, seed)
    dims = descriptor_dim(d, quiver)
    if euler_form(quiver, dims, dims) != 1:
        raise AssertionError(f"{d} has dimension vector {dims}, which is not a real root")
    trail = []
    for attempt in range(MAX_RETRIES + 1):
        bound = SMALL_BOUND if attempt < ESCALATE_AFTER else LARGE_BOUND
        rng = random.Random(_attempt_seed(seed, d, attempt))
        trail.append(attempt)
        rep = Representation(quiver, dims, _sample(quiver, dims, rng, bound), name=str(desc))
        e = end_dim(rep)
        if e == 1:
            # <d, d> = 1 for a real root, so End = K forces Ext^1(M, M) = 0
            return rep, RealizationCertificate(1, 0, attempt, seed)
    raise CertificationError(
        f"no certified realization of {d} after {MAX_RETRIES} retries (seed {seed})", trail
    )


class Catalog:
    """Memoized realizations for one quiver and one seed."""

    def __init__(self, quiver: Quiver, seed: int = 0):
        self.quiver = quiver
        self.seed = seed
        self._cache: dict[Descriptor, tuple[Representation, RealizationCertificate]] = {}

    def realize(self, desc: Descriptor) -> Representation:
        return self.realize_certified(desc)[0]

    def realize_certified(self, desc: Descriptor) -> tuple[Representation, RealizationCertificate]:
        key = desc if isinstance(desc, Simple) else normalize(desc, self.quiver)
        if key not in self._cache:
            self._cache[key] = realize(key, self.quiver, self.seed)
        return self._cache[key]

    def dims(self, desc: Descriptor) -> tuple[int, ...]:
        return descriptor_dim(desc, self.quiver)

    def __len__(self) -> int:
        return len(self._cache)


# -- symbolic tau ------------------------------------------------------------


def tau_desc(desc: Descriptor, k: int, quiver: Quiver) -> Descriptor:
    """Name of ``tau^k`` of the module, in normal form."""
    d = normalize(desc, quiver)
    if k == 0:
        return d
    if isinstance(d, RegInf):
        return RegInf((d.i - k - 1) % quiver.p + 1)
    if isinstance(d, RegZero):
        return RegZero((d.j - k - 1) % quiver.q + 1)
    if isinstance(d, Homog):
        return d
    if isinstance(d, (Proj, TauProj)):
        t = (d.t if isinstance(d, TauProj) else 0) - k
        if t < 0:
            raise VanishesUnderTau(f"{d} vanishes under tau^{k}")
        return TauProj(t, d.vertex) if t else Proj(d.vertex)
    t = (d.t if isinstance(d, TauInj) else 0) + k
    if t < 0:
        raise VanishesUnderTau(f"{d} vanishes under tau^{k}")
    return TauInj(t, d.vertex) if t else Inj(d.vertex)


def F_system(quiver: Quiver) -> tuple[FMember, ...]:
    return tuple(FMember(i) for i in range(1, quiver.p))


def G_system(quiver: Quiver) -> tuple[GMember, ...]:
    return tuple(GMember(i) for i in range(1, quiver.q))


def tau_power_set(which: str, n: int, quiver: Quiver) -> frozenset[Descriptor]:
    """``tau^n`` applied to every member of F or G, as a set of normal forms."""
    if which == "F":
        if quiver.p == 1:
            raise UsageError("tau powers of F need p > 1 (F is empty)")
        members: Iterable[Descriptor] = F_system(quiver)
    elif which == "G":
        members = G_system(quiver)
    else:
        raise UsageError(f"which must be 'F' or 'G', got {which!r}")
    return frozenset(tau_desc(m, n, quiver) for m in members)


# -- text grammar ------------------------------------------------------------

_INT = r"(-?\d+)"
_PATTERNS = [
    (re.compile(rf"P\({_INT}\)"), lambda g: Proj(int(g[0]))),
    (re.compile(rf"I\({_INT}\)"), lambda g: Inj(int(g[0]))),
    (re.compile(rf"S\({_INT}\)"), lambda g: Simple(int(g[0]))),
    (re.compile(rf"tP\({_INT},{_INT}\)"), lambda g: TauProj(int(g[0]), int(g[1]))),
    (re.compile(rf"tI\({_INT},{_INT}\)"), lambda g: TauInj(int(g[0]), int(g[1]))),
    (re.compile(rf"Einf\({_INT}\)"), lambda g: RegInf(int(g[0]))),
    (re.compile(rf"Ezero\({_INT}\)"), lambda g: RegZero(int(g[0]))),
    (re.compile(rf"Ehom\({_INT}/{_INT}\)"), lambda g: _homog(g)),
    (re.compile(rf"F\({_INT}\)"), lambda g: FMember(int(g[0]))),
    (re.compile(rf"G\({_INT}\)"), lambda g: GMember(int(g[0]))),
]


def _homog(groups) -> Homog:
    num, den = int(groups[0]), int(groups[1])
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Homog(Fraction(num, den))


def _parse_at(text: str, pos: int) -> tuple[Descriptor, int]:
    for pattern, build in _PATTERNS:
        m = pattern.match(text, pos)
        if m:
            try:
                return build(m.groups()), m.end()
            except ValueError as exc:
                raise DescriptorSyntaxError(text, pos, str(exc)) from None
    raise DescriptorSyntaxError(text, pos, "unrecognized descriptor")


def parse_descriptor(text: str) -> Descriptor:
    desc, end = _parse_at(text, 0)
    if end != len(text):
        raise DescriptorSyntaxError(text, end, "trailing characters")
    return desc


def parse_sequence(text: str, quiver: Quiver) -> list[Descriptor]:
    """Comma-separated descriptors; ``F*`` and ``G*`` expand to the full F and G."""
    out: list[Descriptor] = []
    pos = 0
    if not text:
        raise DescriptorSyntaxError(text, 0, "empty sequence")
    while True:
        if text.startswith("F*", pos):
            out.extend(F_system(quiver))
            pos += 2
        elif text.startswith("G*", pos):
            out.extend(G_system(quiver))
            pos += 2
        else:
            desc, pos = _parse_at(text, pos)
            out.append(desc)
        if pos == len(text):
            return out
        if text[pos] != ",":
            raise DescriptorSyntaxError(text, pos, "expected ','")
        pos += 1
