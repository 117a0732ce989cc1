import math

import pytest
from hypothesis import given, strategies as st

from mwthard.arithmetic import (IntInterval, MalformedNumber, NegativeRadicand, Ordering, ScaledInt,
                                TooManyFractionDigits, edge_length, interval_compare, interval_isqrt,
                                interval_sum, parse_fixed_decimal)


def test_parse_and_format_round_trip():
    v = parse_fixed_decimal("-11.2", 4)
    assert v == ScaledInt(-112000, 4)
    assert str(v) == "-11.2"
    assert v.format(3) == "-11.200"
    assert parse_fixed_decimal("455.471523435", 9).format(9, " ") == "455.471 523 435"


@pytest.mark.parametrize("text", ["1e5", "", "--1", "1.2.3", "abc", "1,5"])
def test_parse_rejects_malformed(text):
    with pytest.raises(MalformedNumber):
        parse_fixed_decimal(text, 4)


def test_parse_rejects_extra_digits():
    with pytest.raises(TooManyFractionDigits):
        parse_fixed_decimal("0.00001", 4)


@given(st.integers(-10 ** 20, 10 ** 20), st.integers(0, 12))
def test_canonical_round_trip(v, s):
    x = ScaledInt(v, s)
    assert parse_fixed_decimal(x.canonical(), s) == x


@given(st.integers(0, 2 ** 256))
def test_isqrt_brackets(n):
    iv = interval_isqrt(n)
    s = iv.lo
    assert s * s <= n < (s + 1) ** 2
    assert iv.hi == (s if s * s == n else s + 1)


def test_isqrt_negative():
    with pytest.raises(NegativeRadicand):
        interval_isqrt(-1)


def test_edge_length_exact_and_enclosing():
    assert edge_length((0, 0), (30, 40), 1, 15) == IntInterval.exact(5 * 10 ** 15, 15)
    iv = edge_length((0, 0), (1, 1), 0, 15)
    assert iv.lo < math.sqrt(2) * 10 ** 15 < iv.hi
    assert iv.hi - iv.lo == 1


def test_compare_and_sum():
    a = IntInterval(1, 2, 3)
    b = IntInterval(3, 4, 3)
    assert interval_compare(a, b) is Ordering.LESS
    assert interval_compare(b, a) is Ordering.GREATER
    assert interval_compare(a, IntInterval(2, 5, 3)) is Ordering.OVERLAPPING
    assert interval_sum([a, b], 3) == IntInterval(4, 6, 3)


def test_rounded_display():
    assert IntInterval(4_999_999, 5_000_001, 9).rounded(3) == ScaledInt(5, 3)
    assert IntInterval(4_500_000, 4_500_000, 9).rounded(3) is None   # exactly on a midpoint
    assert IntInterval(1, 2, 3).display(3) == "[0.001,0.002]"


def test_scaled_arithmetic():
    a, b = ScaledInt(15, 1), ScaledInt(25, 2)
    assert a + b == ScaledInt(175, 2)
    assert a - b == ScaledInt(125, 2)
    assert a * 3 == ScaledInt(45, 1)
    assert a > b and b < a
    assert ScaledInt(10, 1) == ScaledInt(1, 0)
