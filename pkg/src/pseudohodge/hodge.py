"""Integrals of star-graph classes, closed-form Hodge evaluators and the quadratic identities.

A class ``G^k_*(alpha)`` integrates to the product of its vertex integrals.
Each genus-one tail contributes ``1/24`` when it carries exactly one of
``psi_bullet`` or ``lambda_1`` and zero otherwise; the root integral is
dispatched on its lambda content to one of the evaluators below.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .algebra import (
    cancel_lambda_pairs,
    check_indices,
    codim_part,
    mumford_lhs,
    normalize,
    product,
    pullback_lambda,
    pullback_psi_polynomial,
)
from .arith import bernoulli, double_factorial_odd
from .graphs import GraphSum, is_stable
from .psipoly import PsiPolynomial, compositions
from .wk import WKEngine, default_engine

__all__ = [
    "UnsupportedHodgePart",
    "RootEvaluatorKind",
    "IntegrationReport",
    "classify_root",
    "integrate",
    "integrate_report",
    "faber_integral",
    "faber_closed_form",
    "genus0_psi",
    "stable_quadratic_integral",
    "qhi_rhs",
    "qhi_lhs_via_graphs",
    "quadratic_class",
    "mumford_integral_family",
    "cor_closed_form",
    "mfint_full",
    "mfint_via_graphs",
    "lemma_sum",
    "ps_faber",
]

TAIL_INTEGRAL = Fraction(1, 24)


class UnsupportedHodgePart(ValueError):
    """A lambda monomial with no registered evaluator."""


class RootEvaluatorKind(Enum):
    PURE_PSI = "PurePsi"
    FABER = "FaberLgLgm1"
    LAMBDA_TOP_SQUARE = "LambdaTopSquare"
    MUMFORD = "MumfordCombination"


def classify_root(genus: int, lambdas: tuple[int, ...]) -> RootEvaluatorKind:
    lambdas = tuple(sorted(lambdas))
    if not lambdas:
        return RootEvaluatorKind.PURE_PSI
    if genus >= 1 and lambdas.count(genus) >= 2:
        return RootEvaluatorKind.LAMBDA_TOP_SQUARE
    if lambdas == (genus - 1, genus) or (genus == 1 and lambdas == (1,)):
        return RootEvaluatorKind.FABER
    raise UnsupportedHodgePart(f"no evaluator for lambda monomial {lambdas} in genus {genus}")


# -- leaf evaluators -----------------------------------------------------------


def faber_closed_form(g: int, d: tuple[int, ...]) -> Fraction:
    """``(2g-3+n)! |B_2g| / (2^(2g-1) (2g)! prod (2d_j-1)!!)`` taken literally."""
    n = len(d)
    if g < 1:
        raise ValueError("lambda_g lambda_{g-1} needs g >= 1")
    if sum(d) != g - 2 + n or any(x < 0 for x in d):
        return Fraction(0)
    den = 2 ** (2 * g - 1) * factorial(2 * g) * prod(double_factorial_odd(2 * x - 1) for x in d)
    return Fraction(factorial(2 * g - 3 + n)) * abs(bernoulli(2 * g)) / den


@lru_cache(maxsize=None)
def _faber_sorted(g: int, d: tuple[int, ...]) -> Fraction:
    n = len(d)
    if d and d[0] == 0 and n >= 2:
        # lambda classes pull back along forgetful maps, so the string equation applies
        rest = d[1:]
        return sum(
            (_faber_sorted(g, tuple(sorted(rest[:j] + (x - 1,) + rest[j + 1 :]))) for j, x in enumerate(rest) if x),
            Fraction(0),
        )
    return faber_closed_form(g, d)


def faber_integral(g: int, d) -> Fraction:
    """``int_{Mbar_{g,n}} psi^d lambda_g lambda_{g-1}``.

    The closed form holds when at most one exponent is zero; further zero
    insertions are removed with the string equation first.
    """
    d = tuple(int(x) for x in d)
    if g < 1:
        raise ValueError("lambda_g lambda_{g-1} needs g >= 1")
    if any(x < 0 for x in d):
        raise ValueError("negative psi exponent")
    if not is_stable(g, len(d)) or sum(d) != g - 2 + len(d):
        return Fraction(0)
    return _faber_sorted(g, tuple(sorted(d)))


def genus0_psi(d) -> Fraction:
    """``int_{Mbar_{0,n}} psi^d = (n-3)! / prod d_i!``."""
    d = tuple(d)
    n = len(d)
    if n < 3 or sum(d) != n - 3:
        return Fraction(0)
    return Fraction(factorial(n - 3), prod(factorial(x) for x in d))


def stable_quadratic_integral(g: int, a: int, b: int, d, engine: WKEngine | None = None) -> Fraction:
    """``int_{Mbar_{g,n}} lambda_a lambda_b psi^d`` for the evaluable families."""
    d = tuple(d)
    n = len(d)
    if not is_stable(g, n):
        return Fraction(0)
    if a > g or b > g or a < 0 or b < 0:
        return Fraction(0)
    if sum(d) + a + b != 3 * g - 3 + n:
        return Fraction(0)
    a, b = sorted((a, b))
    if a == 0 and b == 0:
        if g == 0:
            return genus0_psi(d)
        return (engine if engine is not None else default_engine).value(g, d)
    if a == b == g:
        return Fraction(0)
    if (a, b) == (g - 1, g) or (g == 1 and (a, b) == (0, 1)):
        return faber_integral(g, d)
    raise UnsupportedHodgePart(f"no evaluator for lambda_{a} lambda_{b} in genus {g}")


# -- graph integration ---------------------------------------------------------


@dataclass
class IntegrationReport:
    value: Fraction
    terms_evaluated: int = 0
    dropped_inadmissible: int = 0

    def to_json(self) -> dict:
        from .arith import rational_to_json

        return {
            "value": rational_to_json(self.value),
            "terms_evaluated": self.terms_evaluated,
            "dropped_inadmissible": self.dropped_inadmissible,
        }


def integrate_report(x: GraphSum, F: PsiPolynomial | None = None, engine: WKEngine | None = None) -> IntegrationReport:
    engine = engine if engine is not None else default_engine
    if F is None:
        F = PsiPolynomial.constant(x.n)
    if F.n != x.n:
        raise ValueError(f"polynomial in {F.n} variables on Mbar_{{{x.g},{x.n}}}")
    if any(gr.has_big_lambda for gr in x.terms):
        x = normalize(x)
    rep = IntegrationReport(Fraction(0))
    for graph, c in x.sorted_items():
        root = graph.root
        if cancel_lambda_pairs(root.big_lambda):
            raise UnsupportedHodgePart(f"unreduced Lambda factors {root.big_lambda} on the root")
        tail_factor = Fraction(1)
        for t in graph.tails:
            if t.degree != 1:
                tail_factor = Fraction(0)
                break
            tail_factor *= TAIL_INTEGRAL
        if not tail_factor:
            rep.dropped_inadmissible += 1
            continue
        genus = graph.root_genus
        m = graph.n + graph.k
        dim = 3 * genus - 3 + m
        lam_deg = sum(root.lambdas)
        for exps, fc in F.items():
            psi = tuple(a + e for a, e in zip(root.leg_psi, exps)) + root.star_psi
            if sum(psi) + lam_deg != dim:
                rep.dropped_inadmissible += 1
                continue
            kind = classify_root(genus, root.lambdas)
            if kind is RootEvaluatorKind.PURE_PSI:
                v = engine.value(genus, psi)
            elif kind is RootEvaluatorKind.LAMBDA_TOP_SQUARE:
                v = Fraction(0)
            else:
                v = faber_integral(genus, psi)
            rep.terms_evaluated += 1
            rep.value += c * fc * tail_factor * v
    return rep


def integrate(x: GraphSum, F: PsiPolynomial | None = None, engine: WKEngine | None = None) -> Fraction:
    """``int_{Mbar_{g,n}} x * F`` by factorization over the vertices of each star graph."""
    return integrate_report(x, F, engine).value


# -- quadratic Hodge integrals ---------------------------------------------------


def _check_qhi(g: int, n: int, i: int, j: int, F: PsiPolynomial, force: bool) -> None:
    if g > 0:
        check_indices(g, n, force)
    elif not is_stable(g, n):
        raise ValueError(f"(0, {n}) is not a stable index")
    if not (0 <= i <= g and 0 <= j <= g):
        raise ValueError(f"lambda indices ({i}, {j}) out of range for genus {g}")
    if F.n != n:
        raise ValueError(f"polynomial in {F.n} variables, expected {n}")


def qhi_rhs(g: int, n: int, i: int, j: int, F: PsiPolynomial, force: bool = False,
            engine: WKEngine | None = None) -> Fraction:
    """``sum_k 1/(24^k k!) int_{Mbar_{g-k,n+k}} lambda_{i-k} lambda_{j-k} F`` on stable spaces."""
    _check_qhi(g, n, i, j, F, force)
    total = Fraction(0)
    for k in range(min(i, j) + 1):
        if not is_stable(g - k, n + k):
            continue
        w = Fraction(1, 24**k * factorial(k))
        for exps, c in F.items():
            total += w * c * stable_quadratic_integral(g - k, i - k, j - k, exps + (0,) * k, engine)
    return total


def qhi_lhs_via_graphs(g: int, n: int, i: int, j: int, F: PsiPolynomial, force: bool = False,
                       engine: WKEngine | None = None) -> Fraction:
    """Pseudostable side: pull back, multiply in the graph algebra, integrate."""
    _check_qhi(g, n, i, j, F, force)
    cls = product(quadratic_class(g, n, i, j), pullback_psi_polynomial(F, g))
    return integrate(cls, None, engine)


@lru_cache(maxsize=256)
def quadratic_class(g: int, n: int, i: int, j: int) -> GraphSum:
    """Normalized graph expansion of the pulled-back ``lambda_i lambda_j``."""
    return normalize(product(pullback_lambda(g, n, i), pullback_lambda(g, n, j)))


@lru_cache(maxsize=None)
def _mumford_lhs_cached(g: int, n: int, force: bool) -> GraphSum:
    return mumford_lhs(g, n, force)


def mumford_integral_family(g: int, n: int, k: int, force: bool = False) -> Fraction:
    """Pseudostable ``int (sum_j (-1)^j lambda_{2k-j} lambda_j) psi_1^{3g-2k+n-3}``."""
    if not 0 <= k <= g:
        raise ValueError(f"k={k} out of range for genus {g}")
    if n < 1:
        raise ValueError("the family needs a marked point for psi_1")
    part = codim_part(_mumford_lhs_cached(g, n, force), 2 * k)
    F = PsiPolynomial.monomial((3 * g - 2 * k + n - 3,) + (0,) * (n - 1))
    return integrate(part, F)


def cor_closed_form(g: int, k: int) -> Fraction:
    return Fraction((-1) ** k, 24**g * factorial(k) * factorial(g - k))


def _inverse_product_integral(g: int, n: int, m: int, engine: WKEngine) -> Fraction:
    # int_{Mbar_{g,n+m}} 1/prod_{j<=n}(1-psi_j), extra m points without psi
    dim = 3 * g - 3 + n + m
    return sum((engine.value(g, d + (0,) * m) for d in compositions(dim, n)), Fraction(0))


def mfint_full(g: int, n: int, force: bool = False, engine: WKEngine | None = None) -> Fraction:
    """``sum_i (-1)^i/(24^i i!) int_{Mbar_{g-i,n+i}} 1/prod_{j<=n}(1-psi_j)``."""
    engine = engine if engine is not None else default_engine
    if g > 0:
        check_indices(g, n, force)
    elif not is_stable(g, n):
        raise ValueError(f"(0, {n}) is not a stable index")
    total = Fraction(0)
    for i in range(g + 1):
        w = Fraction((-1) ** i, 24**i * factorial(i))
        if is_stable(g - i, n + i):
            total += w * _inverse_product_integral(g - i, n, i, engine)
        elif (g - i, n + i, n) == (0, 2, 1):
            # formal (1,1) only: int_{Mbar_{0,2}} 1/((1-x psi_1)(1-y psi_2)) = 1/(x+y) at x=1, y=0
            total += w
    return total


def mfint_via_graphs(g: int, n: int, force: bool = False) -> Fraction:
    """Same integral, integrating the graph expansion of the Mumford product."""
    if g == 0:
        return integrate(GraphSum.unit(g, n), PsiPolynomial.geometric(n, n - 3))
    x = _mumford_lhs_cached(g, n, force)
    return integrate(x, PsiPolynomial.geometric(n, 3 * g - 3 + n))


def lemma_sum(k: int) -> Fraction:
    """``sum (-1)^{r+s-k} / ((r+s-k)! (k-s)! (k-r)!)`` over ``0 <= r, s <= k``, ``r + s >= k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    total = Fraction(0)
    for r in range(k + 1):
        for s in range(k - r, k + 1):
            N = r + s - k
            total += Fraction((-1) ** N, factorial(N) * factorial(k - s) * factorial(k - r))
    return total


def ps_faber(g: int, n: int, d, reduce_zeros: bool = False) -> Fraction:
    """Term-by-term closed form for the pseudostable ``lambda_g lambda_{g-1}`` integral.

    Each summand uses the Faber closed form on ``n + k`` points with the
    ``k`` gluing points at exponent zero, exactly as written. With
    ``reduce_zeros`` each summand goes through :func:`faber_integral`
    instead, which removes repeated zero insertions first.
    """
    d = tuple(int(x) for x in d)
    if g < 1:
        raise ValueError("ps_faber needs g >= 1")
    if len(d) != n:
        raise ValueError(f"{len(d)} exponents for n={n}")
    if sum(d) != g - 2 + n:
        return Fraction(0)
    total = Fraction(0)
    for k in range(g):
        leaf = faber_integral if reduce_zeros else faber_closed_form
        total += Fraction(1, 24**k * factorial(k)) * leaf(g - k, d + (0,) * k)
    return total
