"""Euler form, Coxeter transformation and Hom/Ext dimensions.

The path algebra of A~(p,q) is hereditary, so ``dim Ext^1(M, N)`` is read off
from ``dim Hom(M, N)`` and the Euler form. Hom spaces are computed from a
projective presentation of ``M``: a homomorphism is fixed by where it sends
generators of the top of ``M``, subject to the relations among path images of
those generators. For the large preprojective modules this is roughly the
square root of the size of the naive intertwiner system, which is kept as
:func:`hom_dim_direct` for cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .errors import UsageError
from .exactnum import Matrix, kernel
from .quiverrep import Quiver, Representation, require_valid

__all__ = [
    "BilinearFormData",
    "euler_matrix",
    "euler_form",
    "cartan_matrix",
    "coxeter_matrix",
    "coxeter_power",
    "coxeter_apply",
    "bilinear_form_data",
    "null_root",
    "defect",
    "hom_dim",
    "hom_dim_direct",
    "hom_basis",
    "ext1_dim",
    "end_dim",
    "is_exceptional",
    "is_isomorphic",
    "ISO_TRIALS",
    "ISO_COEFF_BOUND",
]

ISO_TRIALS = 8
ISO_COEFF_BOUND = 997


# -- bilinear form ----------------------------------------------------------


def _check_len(quiver: Quiver, *vectors: Sequence[int]) -> None:
    for x in vectors:
        if len(x) != quiver.n:
            raise UsageError(f"vector of length {len(x)} for a quiver with {quiver.n} vertices")


def euler_form(quiver: Quiver, x: Sequence[int], y: Sequence[int]) -> int:
    _check_len(quiver, x, y)
    value = sum(a * b for a, b in zip(x, y))
    for u, v in quiver.arrows:
        value -= x[u] * y[v]
    return value


@lru_cache(maxsize=None)
def euler_matrix(quiver: Quiver) -> Matrix:
    """``E`` with ``<x, y> = x^T E y``."""
    n = quiver.n
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for u, v in quiver.arrows:
        rows[u][v] -= 1
    return Matrix.from_rows(rows)


@lru_cache(maxsize=None)
def cartan_matrix(quiver: Quiver) -> Matrix:
    """Column ``v`` is ``dim P_v``; equals ``E^{-T}``."""
    return euler_matrix(quiver).inverse().transpose()


@lru_cache(maxsize=None)
def coxeter_matrix(quiver: Quiver) -> Matrix:
    """``Phi = -C^T C^{-1}``, acting on column dimension vectors as tau."""
    c = cartan_matrix(quiver)
    phi = -(c.transpose() @ c.inverse())
    _coxeter_self_test(quiver, phi)
    return phi


def _coxeter_self_test(quiver: Quiver, phi: Matrix) -> None:
    # tau E_2^(inf) = E_1^(inf); only meaningful when the rank-p tube has p >= 2
    p, n = quiver.p, quiver.n
    if p < 2:
        return
    e1 = [0] * n
    e1[1] = 1
    if p > 2:
        e2 = [0] * n
        e2[2] = 1
    else:
        e2 = [1] * n
        e2[1] = 0
    image = phi @ Matrix(n, 1, e2)
    if list(image.entries) != e1:
        raise AssertionError(f"Coxeter convention self-test failed: {list(image.entries)} != {e1}")


@lru_cache(maxsize=None)
def coxeter_power(quiver: Quiver, k: int) -> Matrix:
    if k == 0:
        return Matrix.identity(quiver.n)
    step = coxeter_matrix(quiver) if k > 0 else coxeter_matrix(quiver).inverse()
    return step @ coxeter_power(quiver, k - 1 if k > 0 else k + 1)


def coxeter_apply(quiver: Quiver, x: Sequence[int], k: int) -> tuple[int, ...]:
    """``Phi^k x``; rejects results that are not dimension vectors."""
    _check_len(quiver, x)
    y = coxeter_power(quiver, k) @ Matrix(quiver.n, 1, list(x))
    out = []
    for e in y.entries:
        if e.denominator != 1:
            raise UsageError(f"Coxeter image {list(y.entries)} is not integral")
        out.append(int(e))
    if any(e < 0 for e in out):
        raise UsageError(
            f"Phi^{k} {tuple(x)} = {tuple(out)} has negative entries; "
            "the corresponding tau-shift does not exist"
        )
    return tuple(out)


def null_root(quiver: Quiver) -> tuple[int, ...]:
    return (1,) * quiver.n


def defect(quiver: Quiver, x: Sequence[int]) -> int:
    """``<delta, x>``: negative, zero, positive on postprojective, regular, preinjective."""
    return euler_form(quiver, null_root(quiver), x)


@dataclass(frozen=True)
class BilinearFormData:
    cartan: Matrix
    coxeter: Matrix
    null_root: tuple[int, ...]


def bilinear_form_data(quiver: Quiver) -> BilinearFormData:
    return BilinearFormData(cartan_matrix(quiver), coxeter_matrix(quiver), null_root(quiver))


# -- presentations ----------------------------------------------------------


@dataclass
class _Term:
    source: int  # vertex carrying the generators
    path: tuple[int, ...]  # arrow indices, empty for the trivial path
    offset: int  # column offset inside the vertex's B matrix
    width: int  # number of generators at ``source``


@dataclass
class _Fibre:
    terms: list[_Term]
    kernel: flint.fmpq_mat  # relations among the terms, one per column
    right_inverse: flint.fmpq_mat | None


@dataclass
class _Presentation:
    gens: list[list[int]]
    fibres: list[_Fibre]


def _columns(m: Matrix, cols: Sequence[int]) -> flint.fmpq_mat:
    out = flint.fmpq_mat(m.rows, len(cols))
    src = m.flint
    for b, j in enumerate(cols):
        for i in range(m.rows):
            e = src[i, j]
            if e != 0:
                out[i, b] = e
    return out


def _hconcat(blocks: Sequence[flint.fmpq_mat], rows: int) -> flint.fmpq_mat:
    total = sum(b.ncols() for b in blocks)
    out = flint.fmpq_mat(rows, total)
    off = 0
    for b in blocks:
        for i in range(rows):
            for j in range(b.ncols()):
                e = b[i, j]
                if e != 0:
                    out[i, off + j] = e
        off += b.ncols()
    return out


def _pivots(r: flint.fmpq_mat, rank: int) -> list[int]:
    pivots, col = [], 0
    for i in range(rank):
        while r[i, col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    return pivots


def _top_generators(rep: Representation, v: int) -> list[int]:
    """Standard basis indices spanning a complement of the radical at ``v``."""
    m = rep.dims[v]
    if m == 0:
        return []
    incoming = [rep.maps[k].flint for k in rep.quiver.in_arrows(v) if rep.maps[k].cols]
    width = sum(b.ncols() for b in incoming)
    eye = flint.fmpq_mat(m, m)
    for i in range(m):
        eye[i, i] = 1
    stacked = _hconcat([*incoming, eye], m)
    r, rank = stacked.rref()
    return [c - width for c in _pivots(r, rank) if c >= width]


def _presentation(rep: Representation) -> _Presentation:
    cached = rep.__dict__.get("_presentation")
    if cached is not None:
        return cached
    quiver = rep.quiver
    gens = [_top_generators(rep, v) for v in quiver.vertices]
    fibres = []
    for w in quiver.vertices:
        terms: list[_Term] = []
        blocks: list[flint.fmpq_mat] = []
        offset = 0
        for v in quiver.vertices:
            if not gens[v]:
                continue
            for path in quiver.paths(v, w):
                if path:
                    block = _columns(rep.path_map(path), gens[v])
                else:
                    block = _columns(Matrix.identity(rep.dims[v]), gens[v])
                terms.append(_Term(v, path, offset, len(gens[v])))
                blocks.append(block)
                offset += len(gens[v])
        m_w = rep.dims[w]
        b = _hconcat(blocks, m_w)
        right_inverse = None
        if m_w and offset:
            r, rank = b.rref()
            if rank != m_w:
                raise AssertionError("top generators do not generate the module")
            piv = _pivots(r, rank)
            square = flint.fmpq_mat(m_w, m_w)
            for i in range(m_w):
                for a, c in enumerate(piv):
                    square[i, a] = b[i, c]
            inv = square.inv()
            right_inverse = flint.fmpq_mat(offset, m_w)
            for a, c in enumerate(piv):
                for j in range(m_w):
                    right_inverse[c, j] = inv[a, j]
        k = kernel(b) if offset else flint.fmpq_mat(0, 0)
        fibres.append(_Fibre(terms, k, right_inverse))
    pres = _Presentation(gens, fibres)
    rep.__dict__["_presentation"] = pres
    return pres


def _target_path_map(rep: Representation, path: tuple[int, ...], v: int) -> flint.fmpq_mat:
    if path:
        return rep.path_map(path).flint
    n = rep.dims[v]
    eye = flint.fmpq_mat(n, n)
    for i in range(n):
        eye[i, i] = 1
    return eye


def _hom_system(m: Representation, n: Representation) -> tuple[flint.fmpq_mat, list[int]]:
    """Constraint matrix on the generator images, and the unknown offsets."""
    if m.quiver != n.quiver:
        raise UsageError("Hom between representations of different quivers")
    pres = _presentation(m)
    offsets = []
    total = 0
    for v in m.quiver.vertices:
        offsets.append(total)
        total += len(pres.gens[v]) * n.dims[v]
    rows: list[list] = []
    for w, fibre in enumerate(pres.fibres):
        n_w = n.dims[w]
        k_w = fibre.kernel.ncols()
        if n_w == 0 or k_w == 0:
            continue
        block = [[0] * total for _ in range(k_w * n_w)]
        kern = fibre.kernel
        for term in fibre.terms:
            v = term.source
            n_v = n.dims[v]
            if n_v == 0:
                continue
            target = _target_path_map(n, term.path, v).tolist()
            base = offsets[v]
            for b in range(term.width):
                for kappa in range(k_w):
                    coeff = kern[term.offset + b, kappa]
                    if coeff == 0:
                        continue
                    row0 = kappa * n_w
                    col0 = base + b * n_v
                    for i in range(n_w):
                        trow = target[i]
                        out = block[row0 + i]
                        for a in range(n_v):
                            t = trow[a]
                            if t != 0:
                                out[col0 + a] += coeff * t
        rows.extend(block)
    mat = flint.fmpq_mat(len(rows), total, [e for r in rows for e in r]) if rows else flint.fmpq_mat(0, total)
    return mat, offsets


def hom_dim(m: Representation, n: Representation) -> int:
    require_valid(m)
    require_valid(n)
    if m.quiver != n.quiver:
        raise UsageError("Hom between representations of different quivers")
    if not m.total_dim or not n.total_dim:
        return 0
    system, _ = _hom_system(m, n)
    unknowns = system.ncols()
    if system.nrows() == 0 or unknowns == 0:
        return unknowns
    return unknowns - system.rank()


def hom_basis(m: Representation, n: Representation) -> list[tuple[Matrix, ...]]:
    """Basis of ``Hom(M, N)``; each element lists its matrix at every vertex."""
    require_valid(m)
    require_valid(n)
    if not m.total_dim or not n.total_dim:
        return []
    system, offsets = _hom_system(m, n)
    pres = _presentation(m)
    quiver = m.quiver
    if system.nrows():
        null = kernel(system)
    else:
        null = flint.fmpq_mat(system.ncols(), system.ncols())
        for i in range(system.ncols()):
            null[i, i] = 1
    basis = []
    for col in range(null.ncols()):
        images = []  # X_v: n_v x g_v, column-major in the solution vector
        for v in quiver.vertices:
            g, n_v = len(pres.gens[v]), n.dims[v]
            x = flint.fmpq_mat(n_v, g)
            for b in range(g):
                for a in range(n_v):
                    x[a, b] = null[offsets[v] + b * n_v + a, col]
            images.append(x)
        basis.append(_assemble(m, n, pres, images))
    return basis


def _assemble(m, n, pres: _Presentation, images) -> tuple[Matrix, ...]:
    out = []
    for w, fibre in enumerate(pres.fibres):
        m_w, n_w = m.dims[w], n.dims[w]
        if m_w == 0 or n_w == 0:
            out.append(Matrix.zeros(n_w, m_w))
            continue
        blocks = []
        for term in fibre.terms:
            blocks.append(_target_path_map(n, term.path, term.source) * images[term.source])
        z = _hconcat(blocks, n_w)
        out.append(Matrix._wrap(z * fibre.right_inverse))
    return tuple(out)


def hom_dim_direct(m: Representation, n: Representation) -> int:
    """Naive intertwiner count: ``sum_v m_v n_v - rank`` of ``f_t M_a = N_a f_s``."""
    require_valid(m)
    require_valid(n)
    if m.quiver != n.quiver:
        raise UsageError("Hom between representations of different quivers")
    quiver = m.quiver
    offsets, total = [], 0
    for v in quiver.vertices:
        offsets.append(total)
        total += m.dims[v] * n.dims[v]
    rows = []
    for k, (s, t) in enumerate(quiver.arrows):
        ma, na = m.maps[k].tolist(), n.maps[k].tolist()
        ms, mt, ns, nt = m.dims[s], m.dims[t], n.dims[s], n.dims[t]
        # entry (i, j) of f_t M_a - N_a f_s; f_v[i, j] sits at offsets[v] + j * n_v + i
        for j in range(ms):
            for i in range(nt):
                row = [Fraction(0)] * total
                for c in range(mt):
                    if ma[c][j]:
                        row[offsets[t] + c * nt + i] += ma[c][j]
                for c in range(ns):
                    if na[i][c]:
                        row[offsets[s] + j * ns + c] -= na[i][c]
                rows.append(row)
    if not rows:
        return total
    return total - Matrix.from_rows(rows, total).rank()


def ext1_dim(m: Representation, n: Representation) -> int:
    value = hom_dim(m, n) - euler_form(m.quiver, m.dims, n.dims)
    if value < 0:
        raise AssertionError(f"negative Ext dimension {value}: Hom computation is inconsistent")
    return value


def end_dim(m: Representation) -> int:
    return hom_dim(m, m)


def is_exceptional(m: Representation) -> bool:
    return end_dim(m) == 1 and ext1_dim(m, m) == 0


def is_isomorphic(m: Representation, n: Representation, seed: int = 0) -> bool:
    """Randomized search for an intertwiner invertible at every vertex.

    A ``True`` answer is exact (an explicit isomorphism was found). ``False``
    means no isomorphism turned up in :data:`ISO_TRIALS` samples.
    """
    if m.quiver != n.quiver:
        raise UsageError("isomorphism test across different quivers")
    if m.dims != n.dims:
        return False
    if not m.total_dim:
        return True
    basis = hom_basis(m, n)
    if not basis:
        return False
    rng = random.Random(seed)
    for _ in range(ISO_TRIALS):
        coeffs = [rng.randint(-ISO_COEFF_BOUND, ISO_COEFF_BOUND) for _ in basis]
        ok = True
        for v in m.quiver.vertices:
            if not m.dims[v]:
                continue
            f = Matrix.zeros(n.dims[v], m.dims[v])
            for c, phi in zip(coeffs, basis):
                if c:
                    f = f + phi[v].scale(c)
            if f.det() == 0:
                ok = False
                break
        if ok:
            return True
    return False
