"""Pure psi intersection numbers via the DVV recursion, memoized."""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .arith import double_factorial_odd, factorial, rational_from_json, rational_to_json

__all__ = [
    "TauIndex",
    "WKEngine",
    "WKCapExceeded",
    "psi_intersection",
    "string_reduce",
    "one_point_closed_form",
    "default_engine",
]

DEFAULT_CAP = 64


class WKCapExceeded(RuntimeError):
    """The requested index is above the configured dimension cap."""


@dataclass(frozen=True)
class TauIndex:
    g: int
    d: tuple[int, ...]

    def __post_init__(self) -> None:
        d = tuple(sorted(int(x) for x in self.d))
        if self.g < 0 or any(x < 0 for x in d):
            raise ValueError(f"negative entry in tau index ({self.g}, {d})")
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def dim(self) -> int:
        return 3 * self.g - 3 + self.n

    @property
    def stable(self) -> bool:
        return 2 * self.g - 2 + self.n > 0

    @property
    def admissible(self) -> bool:
        return self.stable and sum(self.d) == self.dim


def _dfo(m: int) -> int:
    return double_factorial_odd(m)


class WKEngine:
    """Memo table keyed on ``(g, sorted d)``; concurrent readers, locked writers.

    With ``string_shortcut=False`` every value comes from the DVV step on the
    largest exponent, which makes the string equation a nontrivial check.
    """

    def __init__(self, cap: int = DEFAULT_CAP, string_shortcut: bool = True) -> None:
        self.cap = cap
        self.string_shortcut = string_shortcut
        self._memo: dict[tuple[int, tuple[int, ...]], Fraction] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._memo)

    def value(self, g: int, d: Iterable[int]) -> Fraction:
        idx = TauIndex(g, tuple(d))
        if not idx.stable:
            raise ValueError(f"unstable index g={g}, n={idx.n}")
        if idx.dim > self.cap:
            raise WKCapExceeded(f"dimension {idx.dim} exceeds cap {self.cap}")
        return self._get(idx.g, idx.d)

    def _get(self, g: int, d: tuple[int, ...]) -> Fraction:
        n = len(d)
        if 2 * g - 2 + n <= 0 or sum(d) != 3 * g - 3 + n:
            return Fraction(0)
        key = (g, d)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        val = self._compute(g, d)
        with self._lock:
            self._memo.setdefault(key, val)
        return val

    def _compute(self, g: int, d: tuple[int, ...]) -> Fraction:
        n = len(d)
        if g == 0 and n == 3:
            return Fraction(1)
        if g == 1 and d == (1,):
            return Fraction(1, 24)
        if self.string_shortcut and d[0] == 0 and (n >= 4 or (g >= 1 and n >= 2)):
            return sum((self._get(g, t.d) for t in string_reduce(TauIndex(g, d))), Fraction(0))
        # DVV on the largest exponent
        d1 = d[-1]
        rest = d[:-1]
        total = Fraction(0)
        for j, dj in enumerate(rest):
            others = rest[:j] + rest[j + 1 :]
            coeff = Fraction(_dfo(2 * d1 + 2 * dj - 1), _dfo(2 * dj - 1))
            total += coeff * self._get(g, tuple(sorted(others + (d1 + dj - 1,))))
        half = Fraction(0)
        for a in range(d1 - 1):
            b = d1 - 2 - a
            w = _dfo(2 * a + 1) * _dfo(2 * b + 1)
            if g >= 1:
                half += w * self._get(g - 1, tuple(sorted(rest + (a, b))))
            m = len(rest)
            for size in range(m + 1):
                for sub in combinations(range(m), size):
                    S = tuple(rest[i] for i in sub)
                    num = a + sum(S) - len(S) + 2
                    if num % 3:
                        continue
                    g1 = num // 3
                    if not 0 <= g1 <= g:
                        continue
                    left = self._get(g1, tuple(sorted(S + (a,))))
                    if not left:
                        continue
                    Sc = tuple(rest[i] for i in range(m) if i not in sub)
                    half += w * left * self._get(g - g1, tuple(sorted(Sc + (b,))))
        total += half / 2
        return total / _dfo(2 * d1 + 1)

    # -- persistence ----------------------------------------------------------

    def save(self, path: str | os.PathLike) -> None:
        entries = [
            {"g": g, "d": list(d), "value": rational_to_json(v)} for (g, d), v in sorted(self._memo.items())
        ]
        Path(path).write_text(json.dumps({"entries": entries}, sort_keys=True))

    def load(self, path: str | os.PathLike) -> int:
        """Merge entries from a cache file after revalidating each; returns the count loaded."""
        obj = json.loads(Path(path).read_text())
        loaded = {}
        for e in obj["entries"]:
            idx = TauIndex(int(e["g"]), tuple(int(x) for x in e["d"]))
            if list(idx.d) != [int(x) for x in e["d"]]:
                raise ValueError(f"cache entry exponents not sorted: {e['d']}")
            if not idx.admissible:
                raise ValueError(f"cache entry is not an admissible index: {e}")
            loaded[(idx.g, idx.d)] = rational_from_json(e["value"])
        with self._lock:
            for k, v in loaded.items():
                self._memo.setdefault(k, v)
        return len(loaded)


default_engine = WKEngine()


def psi_intersection(idx: TauIndex | tuple[int, Iterable[int]], engine: WKEngine | None = None) -> Fraction:
    """``<tau_{d_1} ... tau_{d_n}>_g``; zero when the dimension does not match."""
    if not isinstance(idx, TauIndex):
        idx = TauIndex(idx[0], tuple(idx[1]))
    return (engine if engine is not None else default_engine).value(idx.g, idx.d)


def string_reduce(idx: TauIndex) -> list[TauIndex]:
    """Remove one ``tau_0`` and lower each positive exponent in turn."""
    if 0 not in idx.d:
        raise ValueError("string_reduce needs a zero exponent")
    rest = list(idx.d)
    rest.remove(0)
    if not (idx.n >= 4 or (idx.g >= 1 and idx.n >= 2)):
        raise ValueError(f"string equation does not apply to ({idx.g}, {idx.n})")
    out = []
    for j, dj in enumerate(rest):
        if dj >= 1:
            out.append(TauIndex(idx.g, tuple(rest[:j] + [dj - 1] + rest[j + 1 :])))
    return out


def one_point_closed_form(g: int) -> Fraction:
    if g < 1:
        raise ValueError("one-point closed form needs g >= 1")
    return Fraction(1, 24**g * factorial(g))
