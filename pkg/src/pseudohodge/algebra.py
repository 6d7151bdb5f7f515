"""Products of star-graph classes, the contraction pullback and Lambda rewriting.

The product of two star graphs with ``r`` and ``s`` tails is supported on
star graphs with ``k`` tails, ``max(r, s) <= k <= min(r + s, g)``. A
generic ``(G, H)``-structure on such a graph identifies every tail edge with
an edge of ``G``, of ``H``, or of both; the ``N = r + s - k`` common edges
carry the excess factor ``(-psi_bullet - psi_star)``. An edge coming from
one factor only receives the restriction of the other factor's root
decoration to that genus-one vertex.

Summing over labeled structures with weight ``1/k!`` is the same as summing
over partial matchings between the tails of ``G`` and ``H`` with weight 1,
because each matching of size ``N`` is realized by exactly ``k!`` labelings
of the result; :func:`product` uses matchings and
:func:`product_bruteforce` enumerates the labeled structures directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product as cartesian
from math import comb, factorial
from typing import Iterator, Sequence

from .graphs import (
    AmbientMismatch,
    GraphSum,
    RootDecoration,
    TailDecoration,
    TailGraph,
    is_stable,
    validate_indices,
)
from .psipoly import PsiPolynomial

__all__ = [
    "Diagnostics",
    "ProductTermCount",
    "structure_count",
    "structure_count_bruteforce",
    "labeled_structures",
    "product",
    "product_bruteforce",
    "pullback_lambda",
    "pullback_psi_polynomial",
    "normalize",
    "mumford_factors",
    "mumford_lhs",
    "mumford_rhs",
    "mumford_slot_types",
    "slot_types_to_graphsum",
    "codim_part",
    "check_indices",
    "cancel_lambda_pairs",
]


@dataclass
class Diagnostics:
    """Counters for terms discarded while building classes."""

    dropped_unstable: int = 0
    dropped_zero: int = 0


def check_indices(g: int, n: int, force: bool = False) -> None:
    """Raise unless ``(g, n)`` is pseudostable; ``force`` only needs stability."""
    if validate_indices(g, n, "pseudostable"):
        return
    if force and validate_indices(g, n, "stable"):
        return
    raise ValueError(f"({g}, {n}) is not a pseudostable index" + ("" if force else " (use force for (1,1)/(2,0))"))


# -- structure census ----------------------------------------------------------


@dataclass(frozen=True)
class ProductTermCount:
    r: int
    s: int
    k: int

    def __post_init__(self) -> None:
        if not (max(self.r, self.s) <= self.k <= self.r + self.s):
            raise ValueError(f"no generic structures for r={self.r}, s={self.s}, k={self.k}")

    @property
    def N(self) -> int:
        return self.r + self.s - self.k

    @property
    def structures(self) -> int:
        return structure_count(self.r, self.s, self.k)

    @property
    def multiplicity(self) -> Fraction:
        """``(-1)^N / (N! (r-N)! (s-N)!)``: census over ``r! s! k!`` with the excess sign."""
        sign = -1 if self.N % 2 else 1
        return Fraction(sign * self.structures, factorial(self.r) * factorial(self.s) * factorial(self.k))


def structure_count(r: int, s: int, k: int) -> int:
    """Number of labeled generic ``(G, H)``-structures on the ``k``-tail star graph."""
    N = r + s - k
    if N < 0 or N > min(r, s):
        return 0
    return comb(k, N) * comb(r, N) * comb(s, N) * factorial(N) ** 2 * comb(k - N, r - N) * factorial(r - N) * factorial(s - N)


def labeled_structures(r: int, s: int, k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield ``(beta_G, beta_H)``: injective edge maps into ``range(k)`` jointly covering it."""
    for bg in permutations(range(k), r):
        used = set(bg)
        for bh in permutations(range(k), s):
            if len(used.union(bh)) == k:
                yield bg, bh


def structure_count_bruteforce(r: int, s: int, k: int) -> int:
    return sum(1 for _ in labeled_structures(r, s, k))


# -- single-term product -------------------------------------------------------


def _merge_tails(a: TailDecoration, b: TailDecoration) -> TailDecoration:
    return TailDecoration(a.bullet_psi + b.bullet_psi, a.lambda1_power + b.lambda1_power, a.big_lambda + b.big_lambda)


def _split_lambdas(lambdas: Sequence[int], targets: Sequence[int]) -> Iterator[tuple[tuple[int, ...], dict[int, int]]]:
    """Restrict a root lambda monomial to a root with extra genus-one tails ``targets``.

    Each ``lambda_j`` becomes a sum over subsets ``S`` of the targets of
    ``lambda_{j-|S|}`` on the root times ``lambda_1`` on every tail of ``S``.
    """
    per_index = []
    for j in lambdas:
        opts = []
        for m in range(min(j, len(targets)) + 1):
            for sub in combinations(targets, m):
                opts.append((j - m, sub))
        per_index.append(opts)
    for choice in cartesian(*per_index):
        root = tuple(sorted(j for j, _ in choice if j > 0))
        extra: dict[int, int] = {}
        for _, sub in choice:
            for t in sub:
                extra[t] = extra.get(t, 0) + 1
        yield root, extra


def _assemble(
    a: TailGraph,
    b: TailGraph,
    slots: Sequence[tuple[int | None, int | None]],
    g: int,
    n: int,
) -> Iterator[tuple[TailGraph, int]]:
    """Decorated graphs (with integer signs) for one labeled structure.

    ``slots[t] = (i, j)``: tail ``t`` of the result is identified with tail
    ``i`` of ``a`` and/or tail ``j`` of ``b`` (``None`` when absent).
    """
    k = len(slots)
    root_genus = g - k
    ra, rb = a.root, b.root
    legs = tuple(x + y for x, y in zip(ra.leg_psi, rb.leg_psi))
    big = ra.big_lambda + rb.big_lambda if root_genus > 0 else ()

    base_tails: list[TailDecoration] = []
    base_stars: list[int] = []
    common: list[int] = []
    a_only: list[int] = []  # result slots whose vertex lies over the root of b
    b_only: list[int] = []
    for t, (i, j) in enumerate(slots):
        if i is not None and j is not None:
            base_tails.append(_merge_tails(a.tails[i], b.tails[j]))
            base_stars.append(ra.star_psi[i] + rb.star_psi[j])
            common.append(t)
        elif i is not None:
            base_tails.append(_merge_tails(a.tails[i], TailDecoration(0, 0, rb.big_lambda)))
            base_stars.append(ra.star_psi[i])
            a_only.append(t)
        else:
            base_tails.append(_merge_tails(b.tails[j], TailDecoration(0, 0, ra.big_lambda)))
            base_stars.append(rb.star_psi[j])
            b_only.append(t)

    for lam_a, extra_a in _split_lambdas(ra.lambdas, b_only):
        for lam_b, extra_b in _split_lambdas(rb.lambdas, a_only):
            lambdas = lam_a + lam_b
            if lambdas and max(lambdas) > root_genus:
                continue
            tails = list(base_tails)
            for t, m in list(extra_a.items()) + list(extra_b.items()):
                old = tails[t]
                tails[t] = TailDecoration(old.bullet_psi, old.lambda1_power + m, old.big_lambda)
            # each common edge contributes -psi_bullet or -psi_star
            for pick in cartesian((0, 1), repeat=len(common)):
                tl = list(tails)
                stars = list(base_stars)
                for t, side in zip(common, pick):
                    if side == 0:
                        old = tl[t]
                        tl[t] = TailDecoration(old.bullet_psi + 1, old.lambda1_power, old.big_lambda)
                    else:
                        stars[t] += 1
                sign = -1 if len(common) % 2 else 1
                yield TailGraph(g, n, RootDecoration(legs, tuple(stars), lambdas, big), tuple(tl)), sign


def _product_terms(a: TailGraph, b: TailGraph, diag: Diagnostics | None) -> Iterator[tuple[TailGraph, Fraction]]:
    g, n = a.g, a.n
    r, s = a.k, b.k
    for k in range(max(r, s), min(r + s, g) + 1):
        if not is_stable(g - k, n + k):
            if diag is not None:
                diag.dropped_unstable += 1
            continue
        N = r + s - k
        for ca in combinations(range(r), N):
            rest_a = [i for i in range(r) if i not in ca]
            for cb in permutations(range(s), N):
                rest_b = [j for j in range(s) if j not in cb]
                slots = list(zip(ca, cb)) + [(i, None) for i in rest_a] + [(None, j) for j in rest_b]
                for graph, sign in _assemble(a, b, slots, g, n):
                    yield graph, Fraction(sign)


def _product_terms_bruteforce(a: TailGraph, b: TailGraph) -> Iterator[tuple[TailGraph, Fraction]]:
    g, n = a.g, a.n
    r, s = a.k, b.k
    for k in range(max(r, s), min(r + s, g) + 1):
        if not is_stable(g - k, n + k):
            continue
        w = Fraction(1, factorial(k))
        for bg, bh in labeled_structures(r, s, k):
            inv_g = {t: i for i, t in enumerate(bg)}
            inv_h = {t: j for j, t in enumerate(bh)}
            slots = [(inv_g.get(t), inv_h.get(t)) for t in range(k)]
            for graph, sign in _assemble(a, b, slots, g, n):
                yield graph, sign * w


def _bilinear(x: GraphSum, y: GraphSum, single) -> GraphSum:
    if x.ambient != y.ambient:
        raise AmbientMismatch(f"cannot multiply sums on {x.ambient} and {y.ambient}")
    acc: dict[TailGraph, Fraction] = {}
    for ga, ca in x.terms.items():
        for gb, cb in y.terms.items():
            c = ca * cb
            for graph, w in single(ga, gb):
                acc[graph] = acc.get(graph, 0) + c * w
    return GraphSum(x.g, x.n, acc)


def product(x: GraphSum, y: GraphSum, diag: Diagnostics | None = None) -> GraphSum:
    """Product of two star-graph classes, extended bilinearly."""
    return _bilinear(x, y, lambda a, b: _product_terms(a, b, diag))


def product_bruteforce(x: GraphSum, y: GraphSum) -> GraphSum:
    """Reference product summing every labeled structure with weight ``1/k!``."""
    return _bilinear(x, y, _product_terms_bruteforce)


# -- pullbacks -----------------------------------------------------------------


def _star_graph(g: int, n: int, k: int, lambdas: tuple[int, ...] = (), big: tuple[int, ...] = ()) -> TailGraph:
    return TailGraph(g, n, RootDecoration((0,) * n, (0,) * k, lambdas, big), (TailDecoration(),) * k)


def pullback_lambda(g: int, n: int, j: int, diag: Diagnostics | None = None) -> GraphSum:
    """``T^* lambda_j = sum_i (1/i!) G^i_*(p_0^* lambda_{j-i})``."""
    if not 0 <= j <= g:
        raise ValueError(f"lambda_{j} does not exist in genus {g}")
    if not is_stable(g, n):
        raise ValueError(f"({g}, {n}) is not a stable index")
    acc = {}
    for i in range(j + 1):
        if not is_stable(g - i, n + i):
            if diag is not None:
                diag.dropped_unstable += 1
            continue
        lam = (j - i,) if j > i else ()
        acc[_star_graph(g, n, i, lam)] = Fraction(1, factorial(i))
    return GraphSum(g, n, acc)


def pullback_psi_polynomial(F: PsiPolynomial, g: int) -> GraphSum:
    """Psi classes pull back to themselves: one ``k = 0`` graph per monomial."""
    n = F.n
    return GraphSum(g, n, {TailGraph(g, n, RootDecoration(e)): c for e, c in F.coeffs.items()})


# -- rewriting -----------------------------------------------------------------


def cancel_lambda_pairs(factors: tuple[int, ...]) -> tuple[int, ...]:
    # Lambda(x) Lambda(-x) = 1 on every vertex; Lambda(0) = 1.
    remaining = [x for x in factors if x != 0]
    out = []
    for x in remaining:
        if -x in out:
            out.remove(-x)
        else:
            out.append(x)
    return tuple(sorted(out))


def _expand_tail(t: TailDecoration) -> Iterator[tuple[TailDecoration, int]]:
    """``Lambda_1(x) = 1 + x lambda_1``, then ``lambda_1 = psi_bullet``."""
    factors = cancel_lambda_pairs(t.big_lambda)
    for pick in cartesian((0, 1), repeat=len(factors)):
        coeff = 1
        for x, p in zip(factors, pick):
            if p:
                coeff *= x
        yield TailDecoration(t.bullet_psi + t.lambda1_power + sum(pick)), coeff


def _expand_root_lambda(genus: int, factors: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
    for idx in cartesian(range(genus + 1), repeat=len(factors)):
        coeff = 1
        for x, i in zip(factors, idx):
            coeff *= x**i
        if coeff:
            yield tuple(sorted(i for i in idx if i > 0)), coeff


def normalize(x: GraphSum, expand_root: bool = False, diag: Diagnostics | None = None) -> GraphSum:
    """Apply the rewrite rules and merge.

    Order: ``Lambda(1) Lambda(-1) -> 1`` on every vertex, then tail
    ``Lambda_1(k) -> 1 + k lambda_1`` (and root ``Lambda_g(k) -> sum k^i
    lambda_i`` when ``expand_root``), then ``lambda_1 -> psi_bullet`` on
    tails. Terms that are zero for dimension reasons on a tail (degree >= 2
    on ``Mbar_{1,1}``) or carry ``lambda_j`` with ``j`` above the root genus
    are dropped.
    """
    acc: dict[TailGraph, Fraction] = {}
    for graph, c in x.terms.items():
        for term, w in _normalize_term(graph, expand_root, diag):
            acc[term] = acc.get(term, 0) + c * w
    return GraphSum(x.g, x.n, acc)


def _normalize_term(graph: TailGraph, expand_root: bool, diag: Diagnostics | None) -> Iterator[tuple[TailGraph, int]]:
    root = graph.root
    genus = graph.root_genus
    big = cancel_lambda_pairs(root.big_lambda) if genus > 0 else ()
    if expand_root and big:
        root_options = list(_expand_root_lambda(genus, big))
        big = ()
    else:
        root_options = [((), 1)]
    tail_options = [list(_expand_tail(t)) for t in graph.tails]
    for extra, rc in root_options:
        lambdas = tuple(sorted(root.lambdas + extra))
        if lambdas and lambdas[-1] > genus:
            if diag is not None:
                diag.dropped_zero += 1
            continue
        for choice in cartesian(*tail_options):
            tails = tuple(t for t, _ in choice)
            if any(t.bullet_psi >= 2 for t in tails):
                if diag is not None:
                    diag.dropped_zero += 1
                continue
            w = rc
            for _, tc in choice:
                w *= tc
            if w:
                yield TailGraph(graph.g, graph.n, RootDecoration(root.leg_psi, root.star_psi, lambdas, big), tails), w


def codim_part(x: GraphSum, c: int) -> GraphSum:
    """Terms of codimension exactly ``c`` (Lambda factors are expanded first)."""
    if any(gr.has_big_lambda for gr in x.terms):
        x = normalize(x, expand_root=True)
    return x.filter(lambda gr: gr.codim() == c)


# -- Mumford relation ----------------------------------------------------------


def mumford_factors(g: int, n: int) -> tuple[GraphSum, GraphSum]:
    """``T^*Lambda(1)`` and ``T^*Lambda(-1)`` as sums over tail strata."""
    left: dict[TailGraph, Fraction] = {}
    right: dict[TailGraph, Fraction] = {}
    for i in range(g + 1):
        if not is_stable(g - i, n + i):
            continue
        big_l = (1,) if g - i > 0 else ()
        big_r = (-1,) if g - i > 0 else ()
        left[_star_graph(g, n, i, big=big_l)] = Fraction(1, factorial(i))
        right[_star_graph(g, n, i, big=big_r)] = Fraction((-1) ** i, factorial(i))
    return GraphSum(g, n, left), GraphSum(g, n, right)


def mumford_lhs(g: int, n: int, force: bool = False, diag: Diagnostics | None = None) -> GraphSum:
    """Normalized expansion of ``T^*(Lambda(1) Lambda(-1))``."""
    if g == 0:
        if not is_stable(g, n):
            raise ValueError(f"(0, {n}) is not a stable index")
        return GraphSum.unit(g, n)
    check_indices(g, n, force)
    left, right = mumford_factors(g, n)
    return normalize(product(left, right, diag), diag=diag)


def mumford_rhs(g: int, n: int, force: bool = False) -> GraphSum:
    """``sum_i (1/i!) G^i_*(prod_j (psi_star_j - psi_bullet_j))``, fully expanded."""
    if g > 0:
        check_indices(g, n, force)
    elif not is_stable(g, n):
        raise ValueError(f"(0, {n}) is not a stable index")
    acc: dict[TailGraph, Fraction] = {}
    for i in range(g + 1):
        if not is_stable(g - i, n + i):
            continue
        for pick in cartesian((0, 1), repeat=i):
            stars = tuple(1 - p for p in pick)
            tails = tuple(TailDecoration(p) for p in pick)
            graph = TailGraph(g, n, RootDecoration((0,) * n, stars), tails)
            acc[graph] = acc.get(graph, 0) + Fraction((-1) ** sum(pick), factorial(i))
    return GraphSum.from_pairs(g, n, acc.items())


SLOT_SIGN = {"G": 1, "H": -1, "GH": -1}


def mumford_slot_types(g: int, k: int) -> dict[tuple[str, ...], Fraction]:
    """Labeled ``k``-tail terms of the Mumford product, keyed by slot origin.

    A slot is ``"G"`` when only the left factor contributes the edge (its
    tail carries ``Lambda_1(-1)`` restricted from the right root), ``"H"``
    when only the right one does (``Lambda_1(1)``), and ``"GH"`` for a
    common edge (``-psi_bullet - psi_star``). Computed by brute-force
    enumeration of labeled structures, before any merging.
    """
    out: dict[tuple[str, ...], Fraction] = {}
    for r in range(k + 1):
        for s in range(k + 1):
            if r + s < k:
                continue
            pref = Fraction((-1) ** s, factorial(r) * factorial(s) * factorial(k))
            for bg, bh in labeled_structures(r, s, k):
                sg, sh = set(bg), set(bh)
                types = tuple("GH" if t in sg and t in sh else ("G" if t in sg else "H") for t in range(k))
                out[types] = out.get(types, 0) + pref
    return {t: c for t, c in out.items() if c}


def slot_types_to_graphsum(g: int, n: int, types_coeffs: dict[tuple[str, ...], Fraction]) -> GraphSum:
    """Realize slot-type terms as (unnormalized) decorated graphs."""
    acc: list[tuple[TailGraph, Fraction]] = []
    for types, c in types_coeffs.items():
        k = len(types)
        big = (-1, 1) if g - k > 0 else ()
        per_slot = []
        for t in types:
            if t == "G":
                per_slot.append([(TailDecoration(0, 0, (-1,)), 0, 1)])
            elif t == "H":
                per_slot.append([(TailDecoration(0, 0, (1,)), 0, 1)])
            else:
                per_slot.append([(TailDecoration(1), 0, -1), (TailDecoration(), 1, -1)])
        for choice in cartesian(*per_slot):
            tails = tuple(t for t, _, _ in choice)
            stars = tuple(e for _, e, _ in choice)
            sign = 1
            for _, _, w in choice:
                sign *= w
            graph = TailGraph(g, n, RootDecoration((0,) * n, stars, (), big), tails)
            acc.append((graph, c * sign))
    return GraphSum.from_pairs(g, n, acc)
