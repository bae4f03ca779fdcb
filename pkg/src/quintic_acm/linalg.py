"""Exact rank and kernel computations.

Modular matrices are ``int64`` numpy arrays reduced mod p. For primes below
2**26 the rank is computed by a compiled float64 kernel: products of two
residues stay below 2**52 and are therefore exact in double precision. Exact
matrices are lists of rows of Z[zeta] 4-tuples and are reduced by
fraction-free (Bareiss) elimination, so every intermediate entry stays in
Z[zeta].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

import numba
import numpy as np

from .fields import (
    CyclotomicElement,
    CyclotomicField,
    FieldMismatchError,
    ModularElement,
    ModularField,
    ONE,
    zdiv_exact,
    zis_zero,
    zmul,
    zsub,
)

__all__ = [
    "FormSpace",
    "formspace_dim",
    "monomials",
    "monomial_index",
    "rank_mod_p",
    "rref_mod_p",
    "kernel_mod_p",
    "rank_exact",
    "kernel_exact",
    "rank_kernel",
]


def formspace_dim(nvars: int, degree: int) -> int:
    """Dimension of the space of forms of ``degree`` in ``nvars`` variables."""
    if degree < 0:
        return 0
    return comb(degree + nvars - 1, nvars - 1)


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of the given degree in graded lexicographic order.

    ``x0^degree`` comes first; the order is fixed so that kernel bases are
    reproducible.
    """
    if degree < 0:
        return ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class FormSpace:
    """Forms of a fixed degree in 3 or 4 variables, graded lex monomial order."""

    nvars: int
    degree: int

    def __post_init__(self):
        if self.nvars not in (3, 4):
            raise ValueError("form spaces are ternary or quaternary")

    @property
    def dim(self) -> int:
        return formspace_dim(self.nvars, self.degree)

    def monomials(self) -> tuple[tuple[int, ...], ...]:
        return monomials(self.nvars, self.degree)

    def index(self, exponent: tuple[int, ...]) -> int:
        return monomial_index(self.nvars, self.degree)[tuple(exponent)]

    def evaluation_matrix(self, points, p: int) -> np.ndarray:
        """Rows are the monomials evaluated at each point over F_p."""
        E = exponent_array(self.nvars, self.degree)
        out = np.ones((len(points), len(E)), dtype=np.int64)
        for r, pt in enumerate(points):
            for v in range(self.nvars):
                powers = np.array([pow(int(pt[v]), e, p) for e in range(self.degree + 1)], dtype=np.int64)
                out[r] = out[r] * powers[E[:, v]] % p
        return out


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


@lru_cache(maxsize=None)
def exponent_array(nvars: int, degree: int) -> np.ndarray:
    arr = np.array(monomials(nvars, degree), dtype=np.int64)
    return arr.reshape(-1, nvars)


# ---------------------------------------------------------------------------
# modular kernels


FLOAT_PRIME_LIMIT = 1 << 26


@numba.njit(cache=True)
def _rank_float_kernel(A, p):
    """In-place row echelon over F_p on a float64 matrix of residues."""
    nrows, ncols = A.shape
    pinv = 1.0 / p
    ip = int(p)
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if A[i, c] != 0.0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        x = int(A[r, c])
        e = ip - 2
        inv = 1
        while e:
            if e & 1:
                inv = (inv * x) % ip
            x = (x * x) % ip
            e >>= 1
        finv = float(inv)
        for j in range(c + 1, ncols):
            y = A[r, j] * finv
            y -= p * np.floor(y * pinv)
            if y >= p:
                y -= p
            elif y < 0.0:
                y += p
            A[r, j] = y
        for i in range(r + 1, nrows):
            f = A[i, c]
            if f == 0.0:
                continue
            for j in range(c + 1, ncols):
                v = A[r, j]
                if v == 0.0:
                    continue
                y = A[i, j] - f * v
                y -= p * np.floor(y * pinv)
                if y >= p:
                    y -= p
                elif y < 0.0:
                    y += p
                A[i, j] = y
        r += 1
        if r == nrows:
            break
    return r


def rank_mod_p(M, p: int) -> int:
    """Rank of an integer matrix over F_p."""
    A = np.asarray(M, dtype=np.int64) % p
    if A.ndim != 2 or A.size == 0:
        return 0
    if p < FLOAT_PRIME_LIMIT:
        return int(_rank_float_kernel(A.astype(np.float64), float(p)))
    return _rank_int64(A, p)


def _rank_int64(A: np.ndarray, p: int) -> int:
    """numpy elimination for primes below 2**31 (products fit in int64)."""
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        pivot = A[r, c + 1:] * inv % p
        below = np.flatnonzero(A[r + 1:, c]) + (r + 1)
        if below.size:
            A[below, c + 1:] = (A[below, c + 1:] - np.outer(A[below, c], pivot)) % p
        r += 1
        if r == nrows:
            break
    return r


def rref_mod_p(M, p: int):
    """Reduced row echelon form over F_p; returns (R, pivot_columns)."""
    A = np.asarray(M, dtype=np.int64) % p
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def kernel_mod_p(M, p: int) -> np.ndarray:
    """Basis of the right kernel over F_p, one vector per row."""
    A = np.asarray(M, dtype=np.int64)
    ncols = A.shape[1]
    R, pivots = rref_mod_p(A, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-R[row, f]) % p
    return basis


# ---------------------------------------------------------------------------
# exact kernels over Z[zeta] / Q(zeta)


def _echelon_exact(M):
    """Fraction-free row echelon form with column skipping.

    Returns the echelon rows and pivot columns. Each division by the previous
    pivot is exact in Z[zeta] (entries are minors of the input).
    """
    A = [list(row) for row in M]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    prev = ONE
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not zis_zero(A[i][c])), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        prow = A[r]
        pc = prow[c]
        for i in range(r + 1, nrows):
            row = A[i]
            a = row[c]
            if zis_zero(a):
                # row <- pc * row / prev keeps the invariant
                for j in range(c + 1, ncols):
                    if not zis_zero(row[j]):
                        row[j] = zdiv_exact(zmul(pc, row[j]), prev)
                continue
            for j in range(c + 1, ncols):
                x = zsub(zmul(pc, row[j]), zmul(a, prow[j]))
                row[j] = zdiv_exact(x, prev) if not zis_zero(x) else x
            row[c] = (0, 0, 0, 0)
        prev = pc
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_exact(M) -> int:
    """Rank over Q(zeta) of a matrix of Z[zeta] 4-tuples."""
    if not M or not M[0]:
        return 0
    _, pivots = _echelon_exact(M)
    return len(pivots)


def kernel_exact(M) -> list[list[CyclotomicElement]]:
    """Right kernel basis over Q(zeta) of a matrix of Z[zeta] 4-tuples."""
    ncols = len(M[0])
    E, pivots = _echelon_exact(M)
    rows = [[CyclotomicElement(x) for x in row] for row in E]
    # back substitution to reduced form over the field
    for k in range(len(pivots) - 1, -1, -1):
        pc = pivots[k]
        inv = rows[k][pc].inverse()
        rows[k] = [x * inv for x in rows[k]]
        for i in range(k):
            f = rows[i][pc]
            if not f.is_zero():
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    pivset = set(pivots)
    zero = CyclotomicElement()
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = CyclotomicElement((1, 0, 0, 0))
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# public entry point


def _field_of(M):
    fields = set()
    for row in M:
        for x in row:
            if isinstance(x, ModularElement):
                fields.add(x.field)
            elif isinstance(x, CyclotomicElement):
                fields.add(CyclotomicField())
            elif not isinstance(x, int):
                raise TypeError(f"unsupported matrix entry {x!r}")
    if len(fields) > 1:
        raise FieldMismatchError(f"matrix mixes fields: {fields}")
    return fields.pop() if fields else CyclotomicField()


def rank_kernel(M, field=None):
    """Rank and right-kernel basis of a matrix over a single field.

    ``M`` is a sequence of rows of field elements (ints are promoted). For
    speed, a numpy integer array together with a ``ModularField`` is also
    accepted. Kernel vectors are returned as lists of field elements.
    """
    if isinstance(M, np.ndarray):
        if not isinstance(field, ModularField):
            raise TypeError("numpy input requires a ModularField")
        basis = kernel_mod_p(M, field.p)
        rank = M.shape[1] - len(basis)
        return rank, [[field(int(x)) for x in v] for v in basis]
    M = [list(row) for row in M]
    inferred = _field_of(M)
    if field is not None and field != inferred and any(
        not isinstance(x, int) for row in M for x in row
    ):
        raise FieldMismatchError(f"matrix over {inferred}, requested {field}")
    field = field or inferred
    if not M:
        return 0, []
    ncols = len(M[0])
    if isinstance(field, ModularField):
        A = np.array([[field(x).value for x in row] for row in M], dtype=np.int64).reshape(len(M), ncols)
        basis = kernel_mod_p(A, field.p)
        return ncols - len(basis), [[field(int(x)) for x in v] for v in basis]
    # exact: clear denominators row by row, then fraction-free elimination
    Z = []
    for row in M:
        elems = [x if isinstance(x, CyclotomicElement) else CyclotomicElement((x, 0, 0, 0)) for x in row]
        den = 1
        for e in elems:
            for c in e.coeffs:
                den = den * c.denominator // gcd(den, c.denominator)
        Z.append([tuple(int(c * den) for c in e.coeffs) for e in elems])
    basis = kernel_exact(Z)
    return ncols - len(basis), basis

