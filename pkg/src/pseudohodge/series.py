"""Truncated generating series of quadratic Hodge integrals.

Exponent tuples are ``(i, j, g, mu_1, ..., mu_M)`` for the monomial
``x^i y^j z^g t_1^mu_1 ... t_M^mu_M``; its coefficient is the integral of
``lambda_{g-i} lambda_{g-j} prod psi_m^mu_m`` over the unique ``n`` allowed
by dimension, ``n = |mu| - g - i - j + 3``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import factorial
from typing import Iterator

from .graphs import is_stable, validate_indices
from .hodge import UnsupportedHodgePart, qhi_lhs_via_graphs, stable_quadratic_integral
from .psipoly import PsiPolynomial

__all__ = [
    "Bounds",
    "TruncatedSeries",
    "SeriesReport",
    "build_F",
    "exp_z_over_24",
    "series_equal_report",
    "points_for_cell",
    "defect_cells",
]

FORMAL_INDICES = {(1, 1), (2, 0)}


@dataclass(frozen=True)
class Bounds:
    xmax: int = 1
    ymax: int = 1
    zmax: int = 3
    tmax: int = 6
    nt: int = 1

    @property
    def maxima(self) -> tuple[int, ...]:
        return (self.xmax, self.ymax, self.zmax) + (self.tmax,) * self.nt

    @property
    def variables(self) -> tuple[str, ...]:
        return ("x", "y", "z") + tuple(f"t{m + 1}" for m in range(self.nt))

    def cells(self) -> Iterator[tuple[int, ...]]:
        return cartesian(*(range(b + 1) for b in self.maxima))


@dataclass
class TruncatedSeries:
    """Power series with per-variable exponent bounds.

    ``unknown`` holds cells whose coefficient could not be evaluated; they
    poison every product cell they contribute to.
    """

    bounds: Bounds
    coeffs: dict[tuple[int, ...], Fraction] = field(default_factory=dict)
    unknown: set[tuple[int, ...]] = field(default_factory=set)
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        caps = self.bounds.maxima
        for e in list(self.coeffs) + list(self.unknown):
            if len(e) != len(caps) or any(not 0 <= a <= b for a, b in zip(e, caps)):
                raise ValueError(f"exponent {e} outside bounds {caps}")
        self.coeffs = {e: Fraction(c) for e, c in self.coeffs.items() if c}

    def coefficient(self, exps: tuple[int, ...]) -> Fraction | None:
        """Exact coefficient, or ``None`` if the cell is unknown."""
        exps = tuple(exps)
        if exps in self.unknown:
            return None
        return self.coeffs.get(exps, Fraction(0))

    def _check(self, other: "TruncatedSeries") -> None:
        if self.bounds != other.bounds:
            raise ValueError(f"bounds differ: {self.bounds} vs {other.bounds}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return TruncatedSeries(self.bounds, acc, self.unknown | other.unknown)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        caps = self.bounds.maxima
        acc: dict[tuple[int, ...], Fraction] = {}
        unknown: set[tuple[int, ...]] = set()
        left = [(e, self.coeffs.get(e)) for e in set(self.coeffs) | self.unknown]
        right = [(e, other.coeffs.get(e)) for e in set(other.coeffs) | other.unknown]
        for ea, ca in left:
            for eb, cb in right:
                e = tuple(a + b for a, b in zip(ea, eb))
                if any(a > b for a, b in zip(e, caps)):
                    continue
                if ea in self.unknown or eb in other.unknown:
                    unknown.add(e)
                else:
                    acc[e] = acc.get(e, Fraction(0)) + ca * cb
        for e in unknown:
            acc.pop(e, None)
        return TruncatedSeries(self.bounds, acc, unknown)

    def to_json(self) -> dict:
        from .arith import rational_to_json

        return {
            "variables": list(self.bounds.variables),
            "bounds": list(self.bounds.maxima),
            "coefficients": [{"exponent": list(e), "value": rational_to_json(c)} for e, c in sorted(self.coeffs.items())],
            "unknown": [list(e) for e in sorted(self.unknown)],
        }


def points_for_cell(cell: tuple[int, ...]) -> tuple[int, int]:
    """``(n, support)``: marked points forced by dimension, and the last point with a ``t`` exponent."""
    i, j, g, *mu = cell
    support = max((m + 1 for m, e in enumerate(mu) if e), default=0)
    return sum(mu) - g - i - j + 3, support


def _psi_exponents(mu: tuple[int, ...], n: int) -> tuple[int, ...]:
    if n >= len(mu):
        return tuple(mu) + (0,) * (n - len(mu))
    return tuple(mu[:n])


def build_F(mode: str, bounds: Bounds) -> TruncatedSeries:
    """Coefficients of the stable or pseudostable generating function within ``bounds``.

    Unsupported lambda monomials become unknown cells with a diagnostic.
    Pseudostable cells at ``(1, 1)`` and ``(2, 0)`` are evaluated formally
    and listed in the diagnostics.
    """
    if mode not in ("stable", "pseudostable"):
        raise ValueError(f"unknown mode {mode!r}")
    out = TruncatedSeries(bounds)
    for cell in bounds.cells():
        i, j, g, *mu = cell
        a, b = g - i, g - j
        if a < 0 or b < 0:
            continue
        n, support = points_for_cell(cell)
        if n < 0 or n < support or not is_stable(g, n):
            continue
        exps = _psi_exponents(tuple(mu), n)
        try:
            if mode == "stable":
                v = stable_quadratic_integral(g, a, b, exps)
            else:
                formal = (g, n) in FORMAL_INDICES
                if not formal and not validate_indices(g, n, "pseudostable"):
                    continue
                if formal:
                    out.diagnostics.append(f"formal pseudostable cell {cell} at (g,n)=({g},{n})")
                F = PsiPolynomial.monomial(exps) if n else PsiPolynomial.constant(0)
                v = qhi_lhs_via_graphs(g, n, a, b, F, force=formal)
        except UnsupportedHodgePart as exc:
            out.unknown.add(cell)
            out.diagnostics.append(f"unsupported cell {cell}: {exc}")
            continue
        if v:
            out.coeffs[cell] = v
    return out


def exp_z_over_24(bounds: Bounds) -> TruncatedSeries:
    zero_t = (0,) * bounds.nt
    coeffs = {(0, 0, g) + zero_t: Fraction(1, 24**g * factorial(g)) for g in range(bounds.zmax + 1)}
    return TruncatedSeries(bounds, coeffs)


@dataclass
class SeriesReport:
    mismatches: list[tuple[int, ...]]
    skipped: list[tuple[int, ...]]
    cells: int

    @property
    def match(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "mismatches": [list(e) for e in self.mismatches],
            "skipped": [list(e) for e in self.skipped],
            "cells": self.cells,
        }


def series_equal_report(a: TruncatedSeries, b: TruncatedSeries) -> SeriesReport:
    """Cells where both sides are known and differ; unknown cells are listed as skipped."""
    if a.bounds != b.bounds:
        raise ValueError(f"bounds differ: {a.bounds} vs {b.bounds}")
    mismatches, skipped, compared = [], [], 0
    for cell in a.bounds.cells():
        ca, cb = a.coefficient(cell), b.coefficient(cell)
        if ca is None or cb is None:
            skipped.append(cell)
            continue
        compared += 1
        if ca != cb:
            mismatches.append(cell)
    return SeriesReport(mismatches, skipped, compared)


def defect_cells(bounds: Bounds) -> set[tuple[int, ...]]:
    """Cells with no pseudostable space whose stable counterparts with extra points exist.

    For such a cell the pseudostable coefficient is zero by convention while
    the product with ``exp(z/24)`` collects integrals over
    ``Mbar_{g-k, n+k}``, which can be nonzero.
    """
    out = set()
    for cell in bounds.cells():
        i, j, g, *mu = cell
        if g - i < 0 or g - j < 0:
            continue
        n, support = points_for_cell(cell)
        if n >= max(support, 0) and (validate_indices(g, n, "pseudostable") or (g, n) in FORMAL_INDICES):
            continue
        for k in range(1, min(g - i, g - j) + 1):
            if n + k >= max(support, 0) and n + k >= 0 and is_stable(g - k, n + k):
                out.add(cell)
                break
    return out
