from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quintic_acm.lattice import (
    NUM_LINES,
    DivisorClass,
    chi,
    default_table,
    intersect,
    k_invariant,
    pa,
    self_intersection,
    serre_partner,
    window_bound,
)

from conftest import D1, D2

C = DivisorClass.hyperplane()


def classes():
    coeff = st.integers(min_value=-2, max_value=2)
    sparse = st.dictionaries(st.integers(0, NUM_LINES - 1), coeff, max_size=8)
    return st.builds(
        lambda h, m: DivisorClass(h, tuple(m.get(i, 0) for i in range(NUM_LINES))),
        st.integers(-3, 3),
        sparse,
    )


def test_table_entries():
    T = default_table().matrix
    assert T.shape == (76, 76)
    assert np.array_equal(T, T.T)
    assert T[0, 0] == 5
    assert (T[0, 1:] == 1).all()
    assert (np.diag(T)[1:] == -3).all()
    off = T[1:, 1:][~np.eye(NUM_LINES, dtype=bool)]
    assert set(np.unique(off)) <= {0, 1}


def test_intersect_examples():
    assert intersect(C, C) == 5
    assert intersect(DivisorClass.line(D1), DivisorClass.line(D2)) == 0
    assert intersect(C, DivisorClass.line(D1)) == 1
    assert intersect(C, DivisorClass.line(D2)) == 1


def test_chi_examples():
    assert chi(DivisorClass.zero()) == 5
    assert chi(DivisorClass.line(0)) == 3
    assert chi(C) == 5


def test_pa_examples():
    assert pa(DivisorClass.line(7)) == 0
    assert pa(C) == 6
    assert pa(DivisorClass.from_lines((D1, D2))) == -1


def test_k_invariant_examples():
    assert k_invariant(DivisorClass.line(0)) == 2
    assert k_invariant(DivisorClass.from_lines((D1, D2))) == 4
    assert k_invariant(DivisorClass.from_lines((0, 1))) == 3


def test_serre_partner_examples():
    d = DivisorClass.line(3)
    assert serre_partner(0, d) == (2, C - d)
    assert serre_partner(1, d) == (1, C - d)
    assert serre_partner(2, DivisorClass.zero()) == (0, C)
    with pytest.raises(ValueError):
        serre_partner(3, d)


def test_window_bound_examples():
    assert window_bound(1) == 2
    assert window_bound(10) == 4
    assert window_bound(4) == 2
    assert window_bound(DivisorClass.from_lines((0, 1, 2, 3))) == 2
    with pytest.raises(ValueError):
        window_bound(0)


@given(st.integers(1, 40))
def test_window_bound_is_minimal(cd):
    k = window_bound(cd)
    assert 5 * k > cd + 5
    assert k == 1 or 5 * (k - 1) <= cd + 5


@settings(max_examples=200, deadline=None)
@given(classes())
def test_parity_and_formulas(d):
    dd, cd = self_intersection(d), intersect(C, d)
    assert (dd + cd) % 2 == 0
    assert (dd - cd) % 2 == 0
    assert chi(d) == (dd - cd) // 2 + 5
    assert 2 * pa(d) - 2 == intersect(d, C + d)
    assert k_invariant(d) == cd + 1 - pa(d)
    assert chi(d) == 5 - k_invariant(d)


@settings(max_examples=200, deadline=None)
@given(classes(), classes())
def test_genus_additivity_and_bilinearity(d1, d2):
    assert pa(d1 + d2) == pa(d1) + pa(d2) + intersect(d1, d2) - 1
    assert intersect(d1, d2) == intersect(d2, d1)
    assert intersect(d1 + d2, C) == intersect(d1, C) + intersect(d2, C)
    assert intersect(d1 * 3, d2) == 3 * intersect(d1, d2)


@settings(max_examples=200, deadline=None)
@given(classes(), classes())
def test_hodge_index(d1, d2):
    a, b = self_intersection(d1), self_intersection(d2)
    if a > 0 and b > 0:
        assert intersect(d1, d2) ** 2 >= a * b


@settings(max_examples=100, deadline=None)
@given(classes())
def test_serre_duality_of_chi(d):
    # chi(D) = chi(C - D) since K = C
    assert chi(d) == chi(C - d)
