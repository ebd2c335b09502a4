import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prodquot.errors import SignatureError
from prodquot.signatures import (
    BranchSignature,
    alpha,
    enumerate_admissible_tuples,
    format_periods,
    parse_periods,
    rh_genus,
    surface_invariants,
    theta,
)

from expected_tables import ADMISSIBLE_84


def test_theta_and_alpha():
    assert theta((2, 4, 12)) == Fraction(1, 6)
    assert alpha((2, 4, 12)) == 12
    assert theta((2, 3, 7)) == Fraction(1, 42)
    assert alpha((2, 3, 7)) == 84
    assert theta((2, 2)) == -1
    with pytest.raises(SignatureError):
        alpha((2, 2))
    with pytest.raises(SignatureError):
        theta((1, 3))


def test_rh_genus():
    assert rh_genus(0, 24, (2, 4, 12)) == 3
    assert rh_genus(1, 24, (2, 2)) == 13
    assert rh_genus(1, 8, (2, 2)) == 5
    assert rh_genus(1, 7, ()) == 1
    with pytest.raises(SignatureError):
        rh_genus(0, 5, (2, 4, 12))


def test_surface_invariants():
    assert surface_invariants(13, 3, 24) == (1, 8)
    assert surface_invariants(5, 5, 16) == (1, 8)
    assert surface_invariants(2, 2, 1) == (1, 8)
    with pytest.raises(SignatureError):
        surface_invariants(13, 3, 25)


def test_signature_validation():
    assert BranchSignature.of(0, (4, 2, 12)).periods == (2, 4, 12)
    assert BranchSignature(1, ()).r == 0
    for bad in [(2, (2, 3)), (0, ()), (0, (3, 2)), (0, (1, 2, 3))]:
        with pytest.raises(SignatureError):
            BranchSignature(*bad)
    assert str(BranchSignature(0, (2, 2, 4, 4))) == "(0 | 2^2,4^2)"


def test_admissible_tuples_full_set():
    found = enumerate_admissible_tuples(84)
    assert len(found) == 30
    assert set(found) == ADMISSIBLE_84


def test_admissible_tuples_small_caps():
    assert enumerate_admissible_tuples(1) == []
    small = set(enumerate_admissible_tuples(5))
    assert {((5, 5, 5), 5), ((2, 2, 4, 4), 4), ((2,) * 5, 4), ((3,) * 4, 3), ((2,) * 6, 2)} <= small


def _naive_admissible(cap: int) -> set:
    # the defining predicate checked directly on every nondecreasing tuple
    out = set()
    for r in range(3, 9):
        for m in itertools.combinations_with_replacement(range(2, cap + 1), r):
            t = -2 + sum(1 - Fraction(1, x) for x in m)
            if t <= 0:
                continue
            a = 2 / t
            if a.denominator == 1 and a <= cap and all(a.numerator % x == 0 for x in m):
                out.add((m, a.numerator))
    return out


@pytest.mark.parametrize("cap", [2, 4, 6, 9, 12])
def test_admissible_tuples_match_predicate(cap):
    assert set(enumerate_admissible_tuples(cap)) == _naive_admissible(cap)


def test_admissible_tuples_nested():
    full = set(enumerate_admissible_tuples(84))
    for cap in (12, 40, 48):
        assert set(enumerate_admissible_tuples(cap)) == {e for e in full if e[1] <= cap}


periods = st.lists(st.integers(2, 30), min_size=1, max_size=10).map(lambda xs: tuple(sorted(xs)))


@given(periods)
def test_period_format_round_trip(m):
    assert parse_periods(format_periods(m)) == m
    assert parse_periods(format_periods(m, compact=False)) == m


def test_period_parse_errors():
    for bad in ("2,x", "1,2", "2^0"):
        with pytest.raises(SignatureError):
            parse_periods(bad)
