"""Stratifying systems (M, F, G, Y) over A~(p,q).

:func:`is_stratifying` checks the Hom/Ext vanishing conditions on an ordered
sequence. :func:`enumerate_Y` and :func:`find_completion` search bounded pools
of catalog modules by computation alone; :func:`predicted_Y` and
:func:`predicted_completion` hold the closed-form families they are compared
against in :func:`check_theorem`.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .catalog import (
    Catalog,
    Descriptor,
    FMember,
    GMember,
    Homog,
    Inj,
    Proj,
    RegInf,
    RegZero,
    Simple,
    TauInj,
    TauProj,
    F_system,
    G_system,
    descriptor_dim,
    normalize,
)
from .errors import UsageError
from .homcalc import end_dim, euler_form, hom_dim, is_isomorphic
from .quiverrep import Quiver, Representation, build_quiver

__all__ = [
    "StratSequence",
    "Violation",
    "VerificationReport",
    "Verifier",
    "is_stratifying",
    "verify_sequence",
    "default_window",
    "enumerate_Y",
    "predicted_Y",
    "completion_pool",
    "find_completion",
    "predicted_completion",
    "check_theorem",
    "REPORT_SCHEMA",
]

SIDES = ("postprojective", "preinjective")


def default_window(p: int, q: int) -> int:
    return 2 * lcm(p, q) + p + q


@dataclass
class StratSequence:
    items: list[Descriptor]
    realized: list[Representation]

    def __post_init__(self):
        if len(self.items) != len(self.realized):
            raise UsageError("descriptor and realization lists differ in length")

    def __len__(self) -> int:
        return len(self.items)


@dataclass
class Violation:
    kind: str
    j: int | None
    i: int | None
    dim: int | None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind, "j": self.j, "i": self.i, "dim": self.dim}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    violations: list[Violation] = field(default_factory=list)
    size: int = 0
    complete_size: int = 0
    found: list[str] = field(default_factory=list)
    expected: list[str] = field(default_factory=list)
    p: int | None = None
    q: int | None = None
    T: int | None = None
    seed: int | None = None
    hom_edges: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def sizes(self) -> tuple[int, int]:
        return (self.size, self.complete_size)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [v.to_json() for v in self.violations],
            "found": list(self.found),
            "expected": list(self.expected),
            "p": self.p,
            "q": self.q,
            "T": self.T,
            "seed": self.seed,
            "size": self.size,
            "complete_size": self.complete_size,
        }


REPORT_SCHEMA = {
    "type": "object",
    "required": ["passed", "violations", "found", "expected", "p", "q", "T", "seed"],
    "properties": {
        "passed": {"type": "boolean"},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "j", "i", "dim"],
                "properties": {
                    "kind": {"type": "string"},
                    "j": {"type": ["integer", "null"]},
                    "i": {"type": ["integer", "null"]},
                    "dim": {"type": ["integer", "null"]},
                    "detail": {"type": "string"},
                },
            },
        },
        "found": {"type": "array", "items": {"type": "string"}},
        "expected": {"type": "array", "items": {"type": "string"}},
        "p": {"type": ["integer", "null"]},
        "q": {"type": ["integer", "null"]},
        "T": {"type": ["integer", "null"]},
        "seed": {"type": ["integer", "null"]},
    },
}


# -- checking sequences --------------------------------------------------------


def is_stratifying(seq: StratSequence) -> VerificationReport:
    """Full check of a realized sequence, listing every violated condition.

    Positions in the report are 1-based, ``j`` the later and ``i`` the earlier
    member.
    """
    reps = seq.realized
    report = VerificationReport(size=len(reps))
    if reps:
        quiver = reps[0].quiver
        report.complete_size = quiver.n
        report.p, report.q = quiver.p, quiver.q
    for k, x in enumerate(reps, start=1):
        e = end_dim(x)
        if e != 1:
            report.violations.append(Violation("not-indecomposable", k, k, e))
        self_ext = e - euler_form(x.quiver, x.dims, x.dims)
        if self_ext:
            report.violations.append(Violation("self-ext", k, k, self_ext))
    for j in range(len(reps)):
        for i in range(j):
            h = hom_dim(reps[j], reps[i])
            if h:
                report.violations.append(Violation("hom", j + 1, i + 1, h))
                report.hom_edges.append((j + 1, i + 1, h))
            ext = h - euler_form(reps[j].quiver, reps[j].dims, reps[i].dims)
            if ext:
                report.violations.append(Violation("ext", j + 1, i + 1, ext))
            back = hom_dim(reps[i], reps[j])
            if back:
                report.hom_edges.append((i + 1, j + 1, back))
    report.found = [str(d) for d in seq.items]
    return report


class Verifier:
    """Realizations plus memoized Hom dimensions for one quiver and seed."""

    def __init__(self, quiver: Quiver, seed: int = 0):
        self.quiver = quiver
        self.seed = seed
        self.catalog = Catalog(quiver, seed)
        self._dims: dict[Descriptor, tuple[int, ...]] = {}
        self._hom: dict[tuple[Descriptor, Descriptor], int] = {}

    def key(self, desc: Descriptor) -> Descriptor:
        return normalize(desc, self.quiver)

    def dims(self, desc: Descriptor) -> tuple[int, ...]:
        k = self.key(desc)
        if k not in self._dims:
            self._dims[k] = descriptor_dim(k, self.quiver)
        return self._dims[k]

    def euler(self, a: Descriptor, b: Descriptor) -> int:
        return euler_form(self.quiver, self.dims(a), self.dims(b))

    def hom(self, a: Descriptor, b: Descriptor) -> int:
        key = (self.key(a), self.key(b))
        if key not in self._hom:
            self._hom[key] = hom_dim(self.catalog.realize(key[0]), self.catalog.realize(key[1]))
        return self._hom[key]

    def passes(self, descs: Sequence[Descriptor]) -> bool:
        """Pass/fail only, cheapest tests first.

        If ``<x_j, x_i> != 0`` for a later ``j`` then Hom or Ext^1 from ``X_j``
        to ``X_i`` is nonzero, so the sequence fails without realizing
        anything. Once all those forms vanish, ``Ext^1(X_j, X_i) = Hom(X_j, X_i)``
        and exceptionality reduces to ``End = K`` with ``<x, x> = 1``.
        """
        for k, x in enumerate(descs):
            if self.euler(x, x) != 1:
                return False
            for y in descs[:k]:
                if self.euler(x, y) != 0:
                    return False
        for x in descs:
            _, cert = self.catalog.realize_certified(x)
            if cert.end_dim != 1:
                return False
        for k, x in enumerate(descs):
            for y in descs[:k]:
                if self.hom(x, y):
                    return False
        return True

    def sequence(self, descs: Sequence[Descriptor]) -> StratSequence:
        return StratSequence(list(descs), [self.catalog.realize(d) for d in descs])


def verify_sequence(descs: Sequence[Descriptor], quiver: Quiver, seed: int = 0) -> VerificationReport:
    report = is_stratifying(Verifier(quiver, seed).sequence(descs))
    report.seed = seed
    return report


# -- brute force over pools -------------------------------------------------------


def _side_pool(side: str, T: int, quiver: Quiver) -> list[Descriptor]:
    if side not in SIDES:
        raise UsageError(f"side must be one of {SIDES}, got {side!r}")
    if T < 0:
        raise UsageError("tau window must be non-negative")
    pool: list[Descriptor] = []
    for t in range(T + 1):
        for v in quiver.vertices:
            if side == "postprojective":
                pool.append(TauProj(t, v) if t else Proj(v))
            else:
                pool.append(TauInj(t, v) if t else Inj(v))
    return pool


def _filter_worker(args) -> list[Descriptor]:
    p, q, seed, before, after, candidates = args
    verifier = Verifier(build_quiver(p, q), seed)
    return [c for c in candidates if verifier.passes([*before, c, *after])]


def _search(
    quiver: Quiver,
    seed: int,
    before: Sequence[Descriptor],
    after: Sequence[Descriptor],
    candidates: list[Descriptor],
    jobs: int,
    verifier: Verifier | None = None,
) -> list[Descriptor]:
    if jobs <= 1 or len(candidates) < 2 * jobs:
        verifier = verifier or Verifier(quiver, seed)
        return [c for c in candidates if verifier.passes([*before, c, *after])]
    chunks = [candidates[k::jobs] for k in range(jobs)]
    args = [(quiver.p, quiver.q, seed, list(before), list(after), chunk) for chunk in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_filter_worker, args))
    keep = {c for r in results for c in r}
    return [c for c in candidates if c in keep]


def _fg(quiver: Quiver) -> list[Descriptor]:
    return [*F_system(quiver), *G_system(quiver)]


def enumerate_Y(
    side: str,
    T: int,
    quiver: Quiver,
    seed: int = 0,
    jobs: int = 1,
    verifier: Verifier | None = None,
) -> frozenset[Descriptor]:
    """Every ``tau^-t P_j`` (or ``tau^t I_j``), ``t <= T``, with ``(F, G, Y)`` stratifying."""
    pool = _side_pool(side, T, quiver)
    before = _fg(quiver)
    found = _search(quiver, seed, before, [], pool, jobs, verifier)
    return frozenset(found)


def _shift(side: str, t: int, v: int) -> Descriptor:
    if side == "postprojective":
        return TauProj(t, v) if t else Proj(v)
    return TauInj(t, v) if t else Inj(v)


def predicted_Y(side: str, T: int, quiver: Quiver) -> frozenset[Descriptor]:
    """The six closed-form families on each side, truncated to ``t <= T``."""
    if side not in SIDES:
        raise UsageError(f"side must be one of {SIDES}, got {side!r}")
    p, q = quiver.p, quiver.q
    s = p + q - 1
    out: set[Descriptor] = set()
    if side == "postprojective":
        out.add(Proj(0))
        out.add(Proj(s))
        for t in range(1, T + 1):
            rp, rq = t % p, t % q
            if rp == 0 and rq == 0:
                out.add(TauProj(t, 0))
                out.add(TauProj(t, s))
            if rq == 0 and 1 <= rp <= p - 1:
                out.add(TauProj(t, p - rp))
            if rp == 0 and 1 <= rq <= q - 1:
                out.add(TauProj(t, p + q - rq - 1))
        return frozenset(out)
    for t in range(1, T + 1):
        rp, rq = t % p, t % q
        top_end = rp == (p - 1) % p
        bottom_end = rq == q - 1
        if top_end and rq == 0:
            out.add(TauInj(t, p))
        if bottom_end and rp == 0:
            out.add(TauInj(t, 1))
        if top_end and bottom_end:
            out.add(TauInj(t, 0))
            out.add(TauInj(t, s))
        if 1 <= rp <= p - 2 and bottom_end:
            out.add(TauInj(t, rp + 1))
        if 1 <= rq <= q - 2 and top_end:
            out.add(TauInj(t, p + rq))
    return frozenset(out)


def completion_pool(T: int, quiver: Quiver, lam=1) -> list[Descriptor]:
    pool: list[Descriptor] = []
    pool += _side_pool("postprojective", T, quiver)
    pool += _side_pool("preinjective", T, quiver)
    pool += [RegInf(i) for i in range(1, quiver.p + 1)]
    pool += [RegZero(j) for j in range(1, quiver.q + 1)]
    pool.append(Homog(Fraction(lam)))
    return pool


def find_completion(
    Y: Descriptor,
    T: int,
    quiver: Quiver,
    seed: int = 0,
    jobs: int = 1,
    verifier: Verifier | None = None,
    lam=1,
) -> frozenset[Descriptor]:
    """All pool members ``M`` making ``(M, F, G, Y)`` stratifying."""
    after = [*_fg(quiver), Y]
    found = _search(quiver, seed, [], after, completion_pool(T, quiver, lam), jobs, verifier)
    return frozenset(found)


def _post(t: int, v: int) -> Descriptor:
    return TauProj(t, v) if t else Proj(v)


def _pre(t: int, v: int) -> Descriptor:
    return TauInj(t, v) if t else Inj(v)


def predicted_completion(Y: Descriptor, quiver: Quiver) -> Descriptor:
    """The module ``M`` completing ``(F, G, Y)``, read off the twelve families."""
    p, q = quiver.p, quiver.q
    s = p + q - 1
    y = normalize(Y, quiver)
    if isinstance(y, Proj):
        if y.vertex == 0:
            return Simple(s)
        if y.vertex == s:
            return _post(p - 1, 0 if p == q else q - 1)
    elif isinstance(y, TauProj):
        t, v = y.t, y.vertex
        rp, rq = t % p, t % q
        if rp == 0 and rq == 0 and v == s:
            return _post(t + p - 1, 0 if p == q else q - 1)
        if rp == 0 and rq == 0 and v == 0:
            return _post(t - 1, s)
        if rq == 0 and 1 <= rp <= p - 1 and v == p - rp:
            r = rp
            return _post(t + p - r - 1, q + r - 1)
        if rp == 0 and 1 <= rq <= q - 1 and v == p + q - rq - 1:
            r = rq
            if p >= q - r:
                return _post(t + q - r - 1, p - q + r)
            return _post(t + p - 1, q - r - 1)
    elif isinstance(y, TauInj):
        t, v = y.t, y.vertex
        rp, rq = t % p, t % q
        top_end = rp == (p - 1) % p
        bottom_end = rq == q - 1
        if top_end and rq == 0 and v == p:
            return _pre(t, p - 1)
        if bottom_end and rp == 0 and v == 1:
            return _pre(t, p + q - 2)
        if top_end and bottom_end and v == 0:
            return _pre(t + 1, s)
        if top_end and bottom_end and v == s:
            return _pre(t - p + 1, q - 1)
        if 1 <= rp <= p - 2 and bottom_end and v == rp + 1:
            r = rp
            return _pre(t - r, p + q - r - 2)
        if 1 <= rq <= q - 2 and top_end and v == p + rq:
            r = rq
            if r < p:
                return _pre(t - r, p - (r + 1))
            return _pre(t - (p - 1), r)
    raise UsageError(f"{Y} is not in any of the families with a predicted completion")


# -- the classification check ----------------------------------------------------


def check_theorem(
    quiver: Quiver,
    T: int | None = None,
    seed: int = 0,
    jobs: int = 1,
    pool_window: int | None = None,
) -> VerificationReport:
    """Compare brute force against the closed-form classification.

    (a) brute-forced Y sets equal the predicted families on both sides;
    (b) each found Y has exactly one completion in the pool, isomorphic to the
    predicted one; (c) every predicted quadruple is a complete stratifying
    system. Completions are searched with ``t <= T + p + q`` so that predicted
    answers for Y near the edge of the window are inside the pool.
    """
    p, q = quiver.p, quiver.q
    if T is None:
        T = default_window(p, q)
    if pool_window is None:
        pool_window = T + p + q
    verifier = Verifier(quiver, seed)
    report = VerificationReport(p=p, q=q, T=T, seed=seed, complete_size=quiver.n)
    found_all: list[Descriptor] = []
    expected_all: list[Descriptor] = []
    for side in SIDES:
        found = enumerate_Y(side, T, quiver, seed, jobs, verifier)
        expected = predicted_Y(side, T, quiver)
        found_all += sorted(found, key=_order)
        expected_all += sorted(expected, key=_order)
        for y in sorted(expected - found, key=_order):
            report.violations.append(Violation("missing-Y", None, None, None, f"{side}: predicted {y} not found"))
        for y in sorted(found - expected, key=_order):
            report.violations.append(Violation("extra-Y", None, None, None, f"{side}: found {y} not predicted"))
    fg = _fg(quiver)
    for y in found_all:
        try:
            predicted = predicted_completion(y, quiver)
        except UsageError as exc:
            report.violations.append(Violation("no-prediction", None, None, None, str(exc)))
            predicted = None
        completions = find_completion(y, pool_window, quiver, seed, jobs, verifier)
        if len(completions) != 1:
            listed = ", ".join(str(c) for c in sorted(completions, key=_order)) or "none"
            report.violations.append(
                Violation("completion-count", None, None, len(completions), f"Y={y}: completions {listed}")
            )
        if predicted is not None:
            target = verifier.catalog.realize(predicted)
            if not any(
                is_isomorphic(verifier.catalog.realize(c), target, seed) for c in completions
            ):
                report.violations.append(
                    Violation("completion-mismatch", None, None, None, f"Y={y}: predicted {predicted} not among completions")
                )
    for y in expected_all:
        try:
            m = predicted_completion(y, quiver)
        except UsageError as exc:
            report.violations.append(Violation("no-prediction", None, None, None, str(exc)))
            continue
        quad = [m, *fg, y]
        if not verifier.passes(quad):
            sub = is_stratifying(verifier.sequence(quad))
            for v in sub.violations:
                v.detail = f"quadruple ({', '.join(map(str, quad))})"
                report.violations.append(v)
        elif len(quad) != quiver.n:
            report.violations.append(Violation("size", None, None, len(quad), f"quadruple for Y={y}"))
    report.found = [str(d) for d in found_all]
    report.expected = [str(d) for d in expected_all]
    report.size = quiver.n
    return report


def _order(desc: Descriptor):
    kinds = {Proj: 0, TauProj: 0, Inj: 1, TauInj: 1, Simple: 2, RegInf: 3, RegZero: 4, Homog: 5, FMember: 6, GMember: 7}
    t = getattr(desc, "t", 0)
    v = getattr(desc, "vertex", getattr(desc, "i", getattr(desc, "j", 0)))
    if isinstance(desc, Homog):
        return (kinds[Homog], 0, 0, float(desc.lam))
    return (kinds[type(desc)], t, v, 0.0)
