from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quintic_acm.classifier import (
    ABSENT,
    AbsentInputError,
    ClassifierInput,
    DegreeTwoStructure,
    classify,
    degree_one_trichotomy,
    degree_two_structure,
    dichotomy_check,
    necessary_ranges,
)
from quintic_acm.lattice import DivisorClass, intersect

from conftest import D1, D2


def line_pairing(x, y):
    return intersect(DivisorClass.line(x), DivisorClass.line(y))


def trace_ids(v):
    return [cid for cid, _ in v.clause_trace]


def test_single_line_accepted_without_side_inputs():
    v = classify(ClassifierInput(CD=1, Pa=0))
    assert v.accepted
    assert v.clause_trace == (("i", True), ("iii-a", True))


def test_disjoint_pair_rejected_at_iv_a():
    v = classify(ClassifierInput(CD=2, Pa=-1))
    assert not v.accepted
    assert v.failed_clause == "iv-a"


def test_ulrich_accepted():
    v = classify(ClassifierInput(CD=10, Pa=11, h0_C_DminusC=0))
    assert v.accepted and trace_ids(v) == ["i", "ii"]


def test_degree_seven_k2_rejected_at_iii_b():
    v = classify(ClassifierInput(CD=7, Pa=6, h0_X_2CminusD=0))
    assert not v.accepted and v.failed_clause == "iii-b"
    assert classify(ClassifierInput(CD=7, Pa=6, h0_X_2CminusD=1)).accepted
    # equality is tested verbatim
    assert not classify(ClassifierInput(CD=7, Pa=6, h0_X_2CminusD=2)).accepted


def test_degree_eight_k2_consults_both_curve_inputs():
    assert classify(ClassifierInput(CD=8, Pa=7, h0_C_D=3, h0_C_DminusC=0)).accepted
    assert not classify(ClassifierInput(CD=8, Pa=7, h0_C_D=2, h0_C_DminusC=0)).accepted
    assert not classify(ClassifierInput(CD=8, Pa=7, h0_C_D=3, h0_C_DminusC=1)).accepted


def test_k3_k4_upper_band():
    # k = 3: C.D in 5..7 needs h0(O_C(D)) = 2
    assert classify(ClassifierInput(CD=5, Pa=3, h0_C_D=2)).accepted
    assert not classify(ClassifierInput(CD=5, Pa=3, h0_C_D=1)).accepted
    assert classify(ClassifierInput(CD=4, Pa=2)).accepted
    assert not classify(ClassifierInput(CD=1, Pa=-2)).accepted
    # k = 4: C.D in 4..6 needs h0(O_C(D)) = 1
    assert classify(ClassifierInput(CD=3, Pa=0)).accepted
    assert classify(ClassifierInput(CD=6, Pa=3, h0_C_D=1)).accepted


def test_k_out_of_range():
    assert classify(ClassifierInput(CD=3, Pa=-2)).failed_clause == "i"
    assert classify(ClassifierInput(CD=3, Pa=5)).failed_clause == "i"


def test_absent_inputs_raise_only_when_consulted():
    with pytest.raises(AbsentInputError):
        classify(ClassifierInput(CD=10, Pa=11))
    with pytest.raises(AbsentInputError):
        classify(ClassifierInput(CD=7, Pa=6))
    with pytest.raises(AbsentInputError):
        classify(ClassifierInput(CD=6, Pa=3))
    # k = 1 with the wrong degree fails before any side input is read
    assert not classify(ClassifierInput(CD=5, Pa=5)).accepted
    assert repr(ABSENT) == "ABSENT" and not ABSENT


def test_nonpositive_degree_rejected():
    with pytest.raises(ValueError):
        classify(ClassifierInput(CD=0, Pa=1))


def test_necessary_ranges_table():
    assert necessary_ranges(-3) == {3, 4, 5, 6}
    assert necessary_ranges(-2) == set(range(2, 8))
    assert necessary_ranges(-1) == {1, 4, 5, 6, 7, 8}
    assert necessary_ranges(0) == {6, 7, 8, 9}
    assert necessary_ranges(1) == {7, 8, 9, 10}
    assert necessary_ranges(2) == set() and necessary_ranges(-4) == set()


def criterion_as_formula(cd, pa, a, b, c):
    """Second formulation as one boolean expression (a = h0_C_D, b = h0_C_DminusC, c = h0_X_2CminusD)."""
    k = cd + 1 - pa
    return (
        (k in (0, 1) and cd == 10 - k and b == 0)
        or (k == 2 and (cd == 1 or 4 <= cd <= 8) and (cd != 7 or c == 1) and (cd != 8 or (b == 0 and a == 3)))
        or (k in (3, 4) and k - 1 <= cd <= 10 - k and not (8 - k <= cd <= 10 - k and a != 5 - k))
    )


side = st.integers(0, 6)


@given(st.integers(1, 14), st.integers(-6, 14), side, side, side)
def test_matches_second_formulation(cd, pa, a, b, c):
    v = classify(ClassifierInput(cd, pa, a, b, c))
    assert v.accepted == criterion_as_formula(cd, pa, a, b, c)
    assert v.accepted == all(ok for _, ok in v.clause_trace)
    assert v == classify(ClassifierInput(cd, pa, a, b, c))


@given(st.integers(1, 14), st.integers(-6, 14), side, side, side)
def test_acceptance_refines_necessary_ranges(cd, pa, a, b, c):
    if classify(ClassifierInput(cd, pa, a, b, c)).accepted:
        assert cd in necessary_ranges(pa - cd)


@given(st.integers(1, 14), st.integers(-6, 14))
def test_lazy_consultation(cd, pa):
    # with every side input absent, either a verdict comes back or a consulted input is named
    try:
        v = classify(ClassifierInput(cd, pa))
    except AbsentInputError:
        k = cd + 1 - pa
        assert (k in (0, 1) and cd == 10 - k) or (k == 2 and cd in (7, 8)) or (
            k in (3, 4) and 8 - k <= cd <= 10 - k
        )
    else:
        assert trace_ids(v)[0] == "i"


def test_degree_one_trichotomy():
    t = degree_one_trichotomy(1, -3, 1, 2, 0)
    assert t.a and t.b and t.c and t.consistent
    t = degree_one_trichotomy(1, -1, 0, 1, 0)
    assert not (t.a or t.b or t.c) and t.consistent
    assert not degree_one_trichotomy(1, -1, 1, 2, 0).consistent
    with pytest.raises(ValueError):
        degree_one_trichotomy(2, -3, 1, 2, 0)


def test_degree_two_structure():
    r = degree_two_structure({D1: 2}, line_pairing)
    assert r.structure is DegreeTwoStructure.CASE_A and r.self_intersection == -12 and r.equivalence_holds
    r = degree_two_structure({D1: 1, D2: 1}, line_pairing)
    assert r.structure is DegreeTwoStructure.CASE_B and r.self_intersection == -6 and r.equivalence_holds
    r = degree_two_structure({0: 1, 1: 1}, line_pairing)
    assert r.structure is DegreeTwoStructure.NEITHER and r.self_intersection == -4 and r.equivalence_holds
    with pytest.raises(ValueError):
        degree_two_structure({0: 1}, line_pairing)


def test_dichotomy_check():
    assert dichotomy_check(0, False, 0, 0) is True
    assert dichotomy_check(1, True, 0, 0) is True
    assert dichotomy_check(1, False, 0, 0) is False
    assert dichotomy_check(1, False, 1, 0) is None
    assert dichotomy_check(1, False, 0, 2) is None
