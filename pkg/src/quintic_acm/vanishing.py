"""Linear conditions for forms vanishing along lines of the Fermat quintic.

Order 1: a form G vanishes on the line ``{x_i = -z^a x_j, x_k = -z^b x_l}``
iff ``G(-z^a s, s, -z^b t, t)`` (coordinates placed at i, j, k, l) is zero.
Every monomial lands on a single monomial ``s^e t^(n-e)`` with coefficient
``+-z^c``, so the block has exactly one nonzero entry per column.

Order 2 has a closed form: on the surface ``x_k = -z^b + v1(s) u + O(u^2)``
with ``v1 = -z^(4(a-b)) s^4`` (differentiate the surface equation), so the
``u^1`` coefficient of ``G`` is ``d_i G + v1 * d_k G`` restricted to the line.
Each monomial again lands on at most two powers of ``s``.

General order m >= 2: work in the chart ``x_l = 1, x_j = s`` with ``u = x_i + z^a x_j``
as a transverse parameter. The surface equation is solved for
``v = x_k + z^b x_l`` as a power series in ``u`` (coefficients polynomial in
``s``), then ``G`` restricted to the surface must vanish to order ``m`` in
``u`` identically in ``s``. The plane ``u = 0`` cuts the surface in five
reduced lines, so ``u`` is a uniformizer along the line.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

import numpy as np

from .fields import CyclotomicField, ModularField, power_to_basis, zadd, zmul
from .fermat import line
from .linalg import exponent_array, formspace_dim, monomials, rank_exact, rank_mod_p

__all__ = [
    "vanishing_conditions_line",
    "series_conditions",
    "order1_template",
    "ideal_dim_in_field",
]


@lru_cache(maxsize=None)
def order1_template(index: int, n: int):
    """(row, sign, zeta_exponent) per monomial column for the order-1 block."""
    i, j, k, l = line(index).coords
    ln = line(index)
    E = exponent_array(4, n)
    row = E[:, i] + E[:, j]
    sign = np.where((E[:, i] + E[:, k]) % 2 == 0, 1, -1).astype(np.int64)
    zexp = (ln.a * E[:, i] + ln.b * E[:, k]) % 5
    for arr in (row, sign, zexp):
        arr.setflags(write=False)
    return row, sign, zexp


@lru_cache(maxsize=None)
def _order1_block_mod(index: int, n: int, p: int, root: int) -> np.ndarray:
    row, sign, zexp = order1_template(index, n)
    zpow = np.array([pow(root, e, p) for e in range(5)], dtype=np.int64)
    B = np.zeros((n + 1, len(row)), dtype=np.int64)
    B[row, np.arange(len(row))] = (sign * zpow[zexp]) % p
    B.setflags(write=False)
    return B


def _order1_block_exact(index: int, n: int):
    row, sign, zexp = order1_template(index, n)
    B = [[(0, 0, 0, 0)] * len(row) for _ in range(n + 1)]
    for col, (r, s, e) in enumerate(zip(row, sign, zexp)):
        c = [0, 0, 0, 0, 0]
        c[int(e)] = int(s)
        B[int(r)][col] = power_to_basis(c)
    return B


@lru_cache(maxsize=None)
def _order2_block_mod(index: int, n: int, p: int, root: int) -> np.ndarray:
    """Order-1 rows stacked over the closed-form u^1 rows (powers s^0 .. s^(n+3))."""
    ln = line(index)
    i, j, k, _ = ln.coords
    a, b = ln.a, ln.b
    E = exponent_array(4, n)
    ai, aj, ak = E[:, i], E[:, j], E[:, k]
    zpow = np.array([pow(root, e, p) for e in range(5)], dtype=np.int64)
    cols = np.arange(len(E))
    T = np.zeros((n + 4, len(E)), dtype=np.int64)
    # d_i G on the line: alpha_i (-z^a s)^(alpha_i - 1) s^alpha_j (-z^b)^alpha_k
    sel = ai > 0
    sign = np.where((ai + ak - 1) % 2 == 0, 1, -1)
    val = ai * sign % p * zpow[(a * (ai - 1) + b * ak) % 5] % p
    np.add.at(T, ((ai + aj - 1)[sel], cols[sel]), val[sel])
    # v1 * d_k G: -alpha_k (-z^a s)^alpha_i s^alpha_j (-z^b)^(alpha_k - 1) z^(4a-4b) s^4
    sel = ak > 0
    sign = np.where((ai + ak) % 2 == 0, 1, -1)
    val = ak * sign % p * zpow[(a * ai + b * (ak - 1) + 4 * a - 4 * b) % 5] % p
    np.add.at(T, ((ai + aj + 4)[sel], cols[sel]), val[sel])
    B = np.vstack([_order1_block_mod(index, n, p, root), T % p])
    B.setflags(write=False)
    return B


# ---------------------------------------------------------------------------
# truncated series in (u, s) with Q(zeta) coefficients: dict (r, q) -> 4-tuple

_Z0 = (0, 0, 0, 0)


def _zeta_el(e, scale=1):
    c = [0, 0, 0, 0, 0]
    c[e % 5] = scale
    return power_to_basis(c)


def _s_add(a, b):
    out = dict(a)
    for key, c in b.items():
        out[key] = zadd(out.get(key, _Z0), c)
    return {k: v for k, v in out.items() if any(v)}


def _s_mul(a, b, m):
    out = {}
    for (r1, q1), c1 in a.items():
        for (r2, q2), c2 in b.items():
            r = r1 + r2
            if r >= m:
                continue
            key = (r, q1 + q2)
            out[key] = zadd(out.get(key, _Z0), zmul(c1, c2))
    return {k: v for k, v in out.items() if any(v)}


def _s_scale(a, c):
    return {k: zmul(v, c) for k, v in a.items() if any(zmul(v, c))}


def _s_pow(a, e, m):
    out = {(0, 0): (1, 0, 0, 0)}
    for _ in range(e):
        out = _s_mul(out, a, m)
    return out


@lru_cache(maxsize=None)
def _branch(index: int, m: int):
    """Series for x_i and x_k on the surface near the line, modulo u^m."""
    ln = line(index)
    a, b = ln.a, ln.b
    xi = {(1, 0): (1, 0, 0, 0), (0, 1): _zeta_el(a, -1)}  # u - z^a s
    # A(u) = x_i^5 + s^5
    A = _s_add(_s_pow(xi, 5, m), {(0, 5): (1, 0, 0, 0)})
    minus_zb = _zeta_el(b, -1)
    inv_lead = tuple(Fraction(x, 5) for x in _zeta_el(b))  # 1 / (5 z^(4b)) = z^b / 5
    v: dict = {}
    for _ in range(m):
        rhs = dict(A)
        vp = {(0, 0): (1, 0, 0, 0)}
        for r in range(1, 6):
            vp = _s_mul(vp, v, m)
            if r >= 2:
                coeff = (comb(5, r), 0, 0, 0)
                for _ in range(5 - r):
                    coeff = zmul(coeff, minus_zb)
                rhs = _s_add(rhs, _s_scale(vp, coeff))
        v = _s_scale(rhs, zmul((-1, 0, 0, 0), inv_lead))
    # precision check: F(u, v(u)) = 0 mod u^m
    xk = _s_add(v, {(0, 0): minus_zb})
    F = _s_add(A, _s_add(_s_pow(xk, 5, m), {(0, 0): (1, 0, 0, 0)}))
    if F:
        raise AssertionError(f"branch expansion of line {index} lost precision at order {m}")
    return xi, xk


@lru_cache(maxsize=None)
def series_conditions(index: int, n: int, m: int):
    """Exact conditions (rows of Q(zeta) 4-tuples) for order >= m vanishing in degree n."""
    if m < 1:
        return ()
    i, j, k, l = line(index).coords
    xi, xk = _branch(index, m)
    pi = [{(0, 0): (1, 0, 0, 0)}]
    pk = [{(0, 0): (1, 0, 0, 0)}]
    for _ in range(n):
        pi.append(_s_mul(pi[-1], xi, m))
        pk.append(_s_mul(pk[-1], xk, m))
    cols = []
    keys = set()
    for alpha in monomials(4, n):
        ser = _s_mul(pi[alpha[i]], pk[alpha[k]], m)
        ser = {(r, q + alpha[j]): c for (r, q), c in ser.items()}
        cols.append(ser)
        keys.update(ser)
    rows = []
    for key in sorted(keys):
        rows.append(tuple(col.get(key, _Z0) for col in cols))
    return tuple(rows)


def _rows_to_zz(rows):
    out = []
    for row in rows:
        den = 1
        for c in row:
            for x in c:
                if isinstance(x, Fraction):
                    den = den * x.denominator // gcd(den, x.denominator)
        out.append([tuple(int(x * den) for x in c) for c in row])
    return out


@lru_cache(maxsize=None)
def _series_integer(index: int, n: int, m: int):
    """Series conditions as an integer array (rows, cols, 4) with one common denominator."""
    rows = _rows_to_zz(series_conditions(index, n, m))
    arr = np.array(rows, dtype=object).reshape(len(rows), formspace_dim(4, n), 4)
    if arr.size and max(abs(int(x)) for x in arr.flat) >= 1 << 62:
        return arr, 1
    arr = arr.astype(np.int64)
    arr.setflags(write=False)
    return arr, 1


@lru_cache(maxsize=None)
def _series_block_mod(index: int, n: int, m: int, p: int, root: int) -> np.ndarray:
    arr, _ = _series_integer(index, n, m)
    zpow = [pow(root, e, p) for e in range(4)]
    if arr.dtype == object:
        B = sum((arr[:, :, e] % p) * zpow[e] for e in range(4)) % p
        B = B.astype(np.int64)
    else:
        B = np.zeros(arr.shape[:2], dtype=np.int64)
        for e in range(4):
            B = (B + (arr[:, :, e] % p) * zpow[e]) % p
    B.setflags(write=False)
    return B


def vanishing_conditions_line(index: int, n: int, m: int = 1, field=None):
    """Linear conditions on degree-n forms for vanishing order >= m along a line.

    Modular fields give an int64 array, the exact field a list of Z[zeta]
    rows. The solution space is {G : ord_L(G|X) >= m}.
    """
    field = field or CyclotomicField()
    if n < 0:
        raise ValueError("degree must be non-negative")
    if isinstance(field, ModularField):
        if m == 1:
            return _order1_block_mod(index, n, field.p, field.root)
        if m == 2:
            return _order2_block_mod(index, n, field.p, field.root)
        return _series_block_mod(index, n, m, field.p, field.root)
    if m == 1:
        return _order1_block_exact(index, n)
    return _rows_to_zz(series_conditions(index, n, m))


def ideal_dim_in_field(mults: dict[int, int], n: int, field) -> int:
    """dim of degree-n forms vanishing to order mults[L] along every line L."""
    if n < 0:
        return 0
    N = formspace_dim(4, n)
    if not mults:
        return N
    blocks = [vanishing_conditions_line(i, n, m, field) for i, m in sorted(mults.items()) if m > 0]
    if isinstance(field, ModularField):
        return N - rank_mod_p(np.vstack(blocks), field.p)
    rows = [row for blk in blocks for row in blk]
    return N - rank_exact(rows)
