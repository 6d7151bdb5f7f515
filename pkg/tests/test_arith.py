import threading
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, strategies as st

from pseudohodge.arith import (
    bernoulli,
    double_factorial_odd,
    factorial,
    rat,
    rational_from_json,
    rational_to_json,
)


@pytest.mark.parametrize(
    "n, d, expected",
    [(2, 4, Fraction(1, 2)), (3, -6, Fraction(-1, 2)), (0, 7, Fraction(0, 1))],
)
def test_rat_reduces(n, d, expected):
    q = rat(n, d)
    assert q == expected
    assert q.denominator > 0
    assert (q.numerator, q.denominator) == (expected.numerator, expected.denominator)


def test_rat_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rat(1, 0)


def test_factorial_and_double_factorial():
    assert factorial(4) == 24
    assert factorial(0) == 1
    assert double_factorial_odd(-1) == 1
    assert double_factorial_odd(1) == 1
    assert double_factorial_odd(5) == 15
    with pytest.raises(ValueError):
        factorial(-1)
    for bad in (-3, 0, 4):
        with pytest.raises(ValueError):
            double_factorial_odd(bad)


@pytest.mark.parametrize("d", range(31))
def test_double_factorial_identity(d):
    assert double_factorial_odd(2 * d - 1) * 2**d * factorial(d) == factorial(2 * d)


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    with pytest.raises(ValueError):
        bernoulli(3)
    with pytest.raises(ValueError):
        bernoulli(-2)


def test_bernoulli_recurrence_oracle():
    B = {0: Fraction(1), 1: Fraction(-1, 2)}
    for k in range(2, 42):
        B[k] = bernoulli(k) if k % 2 == 0 else Fraction(0)
    for n in range(1, 41):
        assert sum(comb(n + 1, k) * B[k] for k in range(n + 1)) == 0


@pytest.mark.parametrize("m", range(0, 60, 2))
def test_bernoulli_against_sympy(m):
    ref = sympy.bernoulli(m)
    assert bernoulli(m) == Fraction(int(ref.p), int(ref.q))


def test_bernoulli_concurrent_readers():
    from pseudohodge.arith import _BernoulliTable

    table = _BernoulliTable()
    results = {}

    def work(i):
        results[i] = [table.get(m) for m in range(0, 40)]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    first = results[0]
    assert all(r == first for r in results.values())
    assert first[1] == Fraction(1, 6)


fractions = st.fractions(max_denominator=10**6).filter(lambda q: abs(q.numerator) < 10**12)


@given(fractions, fractions, fractions)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * (1 / a) == 1


@given(fractions)
def test_json_round_trip(q):
    obj = rational_to_json(q)
    assert isinstance(obj["num"], str) and isinstance(obj["den"], str)
    assert rational_from_json(obj) == q


def test_json_huge_value_exact():
    q = Fraction(3**200, 7**150)
    assert rational_from_json(rational_to_json(q)) == q


@pytest.mark.parametrize("bad", [{"num": "1", "den": "0"}, {"num": "1", "den": "-2"}, {"num": "x", "den": "1"}, {}, None])
def test_json_rejects_malformed(bad):
    with pytest.raises(ValueError):
        rational_from_json(bad)
