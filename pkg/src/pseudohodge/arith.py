"""Exact rational arithmetic and the special numbers used throughout.

``Fraction`` from the standard library is the rational type: it is always
stored reduced with a positive denominator, which is what canonical merging
of graph sums relies on.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial as _factorial
from typing import Any

__all__ = [
    "Rational",
    "rat",
    "factorial",
    "double_factorial_odd",
    "bernoulli",
    "rational_to_json",
    "rational_from_json",
]

Rational = Fraction


def rat(n: int, d: int = 1) -> Fraction:
    """Reduced fraction ``n/d``; raises ``ZeroDivisionError`` when ``d == 0``."""
    if d == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return Fraction(n, d)


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return _factorial(n)


def double_factorial_odd(m: int) -> int:
    """Product ``m (m-2) ... 3 1`` for odd ``m``, with ``(-1)!! = 1``."""
    if m < -1 or m % 2 == 0:
        raise ValueError(f"double_factorial_odd expects an odd integer >= -1, got {m}")
    out = 1
    for k in range(3, m + 1, 2):
        out *= k
    return out


class _BernoulliTable:
    # Even-index values only; B_1 = -1/2 enters the recurrence explicitly.
    def __init__(self) -> None:
        self._even: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def get(self, m: int) -> Fraction:
        even = self._even
        if m < len(even):
            return even[m]
        with self._lock:
            even = list(self._even)
            while len(even) <= m:
                n = 2 * len(even)
                # sum_{k=0}^{n} C(n+1, k) B_k = 0, solved for B_n
                s = Fraction(comb(n + 1, 1)) * Fraction(-1, 2)
                for j, b in enumerate(even):
                    s += comb(n + 1, 2 * j) * b
                even.append(-s / (n + 1))
            self._even = even
            return even[m]


_TABLE = _BernoulliTable()


def bernoulli(index: int) -> Fraction:
    """Bernoulli number ``B_index`` for even ``index >= 0`` (memoized)."""
    if index < 0 or index % 2:
        raise ValueError(f"bernoulli expects an even nonnegative index, got {index}")
    return _TABLE.get(index // 2)


def rational_to_json(q: Fraction | int) -> dict[str, str]:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(obj: Any) -> Fraction:
    try:
        num, den = int(obj["num"]), int(obj["den"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed rational {obj!r}") from exc
    if den <= 0:
        raise ValueError(f"rational denominator must be positive, got {den}")
    return Fraction(num, den)
