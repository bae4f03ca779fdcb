from __future__ import annotations

from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quintic_acm.fermat import line
from quintic_acm.fields import DEFAULT_PRIMES, CyclotomicField, ModularField
from quintic_acm.linalg import FormSpace, formspace_dim, rank_mod_p
from quintic_acm.vanishing import ideal_dim_in_field, vanishing_conditions_line

from conftest import D1, D2

P = DEFAULT_PRIMES[0]
F = ModularField(P)


def line_points(index, count, seed=0):
    """Points s*p1 + p2 of the line over F_p for random parameters s."""
    rng = np.random.default_rng(seed)
    p1, p2 = ([F.from_zz(x) for x in pt] for pt in line(index).points())
    out = []
    for s in rng.integers(1, P, size=count):
        out.append([(int(s) * a + b) % P for a, b in zip(p1, p2)])
    return out


def monomial_value(pt, e):
    v = 1
    for x, k in zip(pt, e):
        v = v * pow(x, int(k), P) % P
    return v


def order_two_oracle_rows(index, n, count):
    """G(P) = 0 and the gradient minor d_iG d_kF - d_kG d_iF = 0 at points of the line.

    With u = x_i + z^a x_j and v = x_k + z^b x_l, d/du = d/dx_i and d/dv = d/dx_k;
    G restricted to the surface has order >= 2 along the line iff G vanishes on
    it and this minor does.
    """
    i, _, k, _ = line(index).coords
    mons = FormSpace(4, n).monomials()
    rows = []
    for pt in line_points(index, count, seed=index * 100 + n):
        dFi, dFk = 5 * pow(pt[i], 4, P) % P, 5 * pow(pt[k], 4, P) % P
        rows.append([monomial_value(pt, e) for e in mons])
        row = []
        for e in mons:
            gi = e[i] * monomial_value(pt, tuple(x - (c == i) for c, x in enumerate(e))) if e[i] else 0
            gk = e[k] * monomial_value(pt, tuple(x - (c == k) for c, x in enumerate(e))) if e[k] else 0
            row.append((gi * dFk - gk * dFi) % P)
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def span_of_line_ideal(index, n):
    """Coefficient vectors of u*m and v*m, m of degree n - 1 (u, v the defining forms)."""
    fs, lower = FormSpace(4, n), FormSpace(4, n - 1)
    vecs = []
    for form in line(index).equations():
        for mu in lower.monomials():
            v = np.zeros(fs.dim, dtype=np.int64)
            for var, c in enumerate(form):
                if any(c):
                    e = list(mu)
                    e[var] += 1
                    v[fs.index(tuple(e))] = (v[fs.index(tuple(e))] + F.from_zz(c)) % P
            vecs.append(v)
    return np.array(vecs)


def structural_dim(n, m):
    """dim of order->=m forms for n <= 5: (I_L^m)_n, plus the quintic itself at n = 5."""
    quotient = sum((j + 1) * (n - j + 1) for j in range(min(m, n + 1)))
    return comb(n + 3, 3) - quotient + (1 if n == 5 else 0)


def test_order_one_examples():
    assert ideal_dim_in_field({D1: 1}, 1, F) == 2
    assert ideal_dim_in_field({D1: 1}, 2, F) == 7
    assert ideal_dim_in_field({D1: 1}, 0, F) == 0
    assert ideal_dim_in_field({}, 3, F) == 20
    assert ideal_dim_in_field({D1: 1}, -1, F) == 0


def test_order_two_double_line_in_degree_two():
    # only u^2, uv, v^2: the quintic has no degree-2 multiples
    assert ideal_dim_in_field({D1: 2}, 2, F) == 3
    assert ideal_dim_in_field({D1: 2}, 2, CyclotomicField()) == 3


def test_ideal_dim_examples():
    assert ideal_dim_in_field({D1: 1, D2: 1}, 1, F) == 0
    assert ideal_dim_in_field({0: 1, 1: 1}, 1, F) == 1


@pytest.mark.parametrize("index", [0, 7, 33, 61, 74])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_order_one_kernel_is_span_of_defining_forms(index, n):
    B = vanishing_conditions_line(index, n, 1, F)
    S = span_of_line_ideal(index, n)
    assert not (B @ S.T % P).any()
    assert rank_mod_p(S, P) == formspace_dim(4, n) - rank_mod_p(B, P)
    assert rank_mod_p(S, P) == 2 * formspace_dim(4, n - 1) - formspace_dim(4, n - 2)


@pytest.mark.parametrize("index", [0, 18, 26, 52, 70])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_order_two_matches_gradient_minor(index, n):
    ours = vanishing_conditions_line(index, n, 2, F)
    oracle = order_two_oracle_rows(index, n, n + 8)
    r = rank_mod_p(ours, P)
    assert rank_mod_p(oracle, P) == r
    assert rank_mod_p(np.vstack([ours, oracle]), P) == r


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_structural_count(m, n):
    assert ideal_dim_in_field({D2: m}, n, F) == structural_dim(n, m)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_series_path_agrees_with_closed_form_at_order_two(n):
    # exact mode expands the surface branch as a power series
    assert ideal_dim_in_field({D2: 2}, n, CyclotomicField()) == ideal_dim_in_field({D2: 2}, n, F)


@pytest.mark.parametrize("mults,n", [({0: 1, 26: 1}, 2), ({0: 1, 1: 1, 2: 1}, 3), ({5: 1, 40: 2}, 3), ({3: 3}, 3)])
def test_exact_and_modular_agree(mults, n):
    exact = ideal_dim_in_field(mults, n, CyclotomicField())
    for p in DEFAULT_PRIMES:
        assert ideal_dim_in_field(mults, n, ModularField(p)) == exact


def test_exact_conditions_are_zz_rows():
    rows = vanishing_conditions_line(0, 2, 1, CyclotomicField())
    assert len(rows) == 3 and all(len(r) == 10 for r in rows)


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        vanishing_conditions_line(0, -1, 1, F)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 74), min_size=1, max_size=5, unique=True), st.integers(0, 5))
def test_monotonicity(lines, n):
    mults = {i: 1 for i in lines}
    d = ideal_dim_in_field(mults, n, F)
    assert d <= ideal_dim_in_field(mults, n + 1, F)
    assert d <= ideal_dim_in_field({i: 1 for i in lines[:-1]}, n, F)
    assert ideal_dim_in_field({**mults, lines[0]: 2}, n, F) <= d
