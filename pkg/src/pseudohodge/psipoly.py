from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Iterator, Mapping

__all__ = ["PsiPolynomial", "compositions"]


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All exponent vectors of length ``parts`` with entries summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class PsiPolynomial:
    """Polynomial ``F(psi_1, ..., psi_n)`` with rational coefficients."""

    n: int
    coeffs: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.coeffs.items():
            exps = tuple(exps)
            if len(exps) != self.n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for n={self.n}")
            clean[exps] = clean.get(exps, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "coeffs", {e: c for e, c in clean.items() if c})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: Fraction | int = 1) -> "PsiPolynomial":
        exps = tuple(exps)
        return cls(len(exps), {exps: Fraction(coeff)})

    @classmethod
    def constant(cls, n: int, c: Fraction | int = 1) -> "PsiPolynomial":
        return cls(n, {(0,) * n: Fraction(c)})

    @classmethod
    def geometric(cls, n: int, max_degree: int, active: int | None = None) -> "PsiPolynomial":
        """Truncation of ``1 / prod_{j <= active} (1 - psi_j)`` to total degree ``max_degree``."""
        active = n if active is None else active
        coeffs = {}
        for d in range(max_degree + 1):
            for head in compositions(d, active):
                coeffs[head + (0,) * (n - active)] = Fraction(1)
        return cls(n, coeffs)

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.coeffs.items())

    def __add__(self, other: "PsiPolynomial") -> "PsiPolynomial":
        if self.n != other.n:
            raise ValueError("polynomials in different numbers of variables")
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return PsiPolynomial(self.n, acc)

    def __mul__(self, other: "PsiPolynomial") -> "PsiPolynomial":
        if self.n != other.n:
            raise ValueError("polynomials in different numbers of variables")
        acc: dict[tuple[int, ...], Fraction] = {}
        for (e1, c1), (e2, c2) in _cartesian(self.coeffs.items(), other.coeffs.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return PsiPolynomial(self.n, acc)

    def scale(self, c: Fraction | int) -> "PsiPolynomial":
        return PsiPolynomial(self.n, {e: v * c for e, v in self.coeffs.items()})

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "PsiPolynomial":
        """Parse ``"2,0"`` (a monomial) or ``"c1*e11,e12;c2*e21,e22"``.

        An empty string is the constant 1 in ``n`` variables.
        """
        text = text.strip()
        if not text:
            if n is None:
                raise ValueError("empty polynomial needs an explicit n")
            return cls.constant(n)
        coeffs: dict[tuple[int, ...], Fraction] = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if "*" in chunk:
                c_text, e_text = chunk.split("*", 1)
                c = Fraction(c_text.strip())
            else:
                c, e_text = Fraction(1), chunk
            exps = tuple(int(x) for x in e_text.split(",") if x.strip() != "")
            if n is not None and len(exps) != n:
                raise ValueError(f"monomial {chunk!r} has {len(exps)} exponents, expected {n}")
            coeffs[exps] = coeffs.get(exps, Fraction(0)) + c
        lengths = {len(e) for e in coeffs}
        if len(lengths) != 1:
            raise ValueError("monomials of different lengths")
        return cls(lengths.pop(), coeffs)
