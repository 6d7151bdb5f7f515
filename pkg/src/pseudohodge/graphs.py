"""Decorated star graphs: classes pushed forward along the elliptic-tail gluing map.

A :class:`TailGraph` with ``k`` tails stands for ``G^k_*(decoration)`` in
``Mbar_{g,n}``: a root vertex of genus ``g-k`` carrying the ``n`` legs and
``k`` attaching points, and ``k`` genus-one vertices ``Mbar_{1,1}``. Edge
psi classes live on half-edges, ``star_psi`` on the root side and
``bullet_psi`` on the tail side.

Slots are kept ordered but canonicalized: permuting tails together with
their star exponents does not change the pushed-forward class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping

from .arith import rational_from_json, rational_to_json

__all__ = [
    "RootDecoration",
    "TailDecoration",
    "TailGraph",
    "GraphSum",
    "AmbientMismatch",
    "canonicalize",
    "validate_indices",
    "is_stable",
    "graphsum_add",
    "graphsum_scale",
]


class AmbientMismatch(ValueError):
    """Two graph sums live on different moduli spaces."""


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 0 and 2 * g - 2 + n > 0


def validate_indices(g: int, n: int, mode: str = "stable") -> bool:
    """Whether ``(g, n)`` indexes a moduli space of the given kind.

    Pseudostable indices additionally need ``g + n > 2``, which excludes
    ``(1, 1)`` and ``(2, 0)``.
    """
    if g < 0 or n < 0:
        raise ValueError(f"negative index ({g}, {n})")
    if mode == "stable":
        return is_stable(g, n)
    if mode == "pseudostable":
        return is_stable(g, n) and g + n > 2
    raise ValueError(f"unknown mode {mode!r}")


def _sorted_tuple(xs: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(xs))


@dataclass(frozen=True)
class TailDecoration:
    bullet_psi: int = 0
    lambda1_power: int = 0
    big_lambda: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.bullet_psi < 0 or self.lambda1_power < 0:
            raise ValueError("tail exponents must be nonnegative")
        object.__setattr__(self, "big_lambda", _sorted_tuple(self.big_lambda))

    @property
    def degree(self) -> int:
        """Codimension on ``Mbar_{1,1}``; ``None``-free only when no Lambda factors remain."""
        if self.big_lambda:
            raise ValueError("degree undefined while Lambda factors remain")
        return self.bullet_psi + self.lambda1_power

    def key(self) -> tuple:
        return (self.bullet_psi, self.lambda1_power, self.big_lambda)

    def to_json(self) -> dict[str, Any]:
        return {"bullet_psi": self.bullet_psi, "lambda1": self.lambda1_power, "Lambda": list(self.big_lambda)}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "TailDecoration":
        return cls(int(obj["bullet_psi"]), int(obj["lambda1"]), tuple(int(x) for x in obj["Lambda"]))


TRIVIAL_TAIL = TailDecoration()


@dataclass(frozen=True)
class RootDecoration:
    leg_psi: tuple[int, ...]
    star_psi: tuple[int, ...] = ()
    lambdas: tuple[int, ...] = ()
    big_lambda: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(e < 0 for e in self.leg_psi) or any(e < 0 for e in self.star_psi):
            raise ValueError("psi exponents must be nonnegative")
        if any(j <= 0 for j in self.lambdas):
            raise ValueError("lambda indices must be positive (lambda_0 = 1 is never stored)")
        object.__setattr__(self, "leg_psi", tuple(self.leg_psi))
        object.__setattr__(self, "star_psi", tuple(self.star_psi))
        object.__setattr__(self, "lambdas", _sorted_tuple(self.lambdas))
        object.__setattr__(self, "big_lambda", _sorted_tuple(self.big_lambda))

    def to_json(self) -> dict[str, Any]:
        return {
            "leg_psi": list(self.leg_psi),
            "star_psi": list(self.star_psi),
            "lambda": list(self.lambdas),
            "Lambda": list(self.big_lambda),
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "RootDecoration":
        return cls(
            tuple(int(x) for x in obj["leg_psi"]),
            tuple(int(x) for x in obj["star_psi"]),
            tuple(int(x) for x in obj["lambda"]),
            tuple(int(x) for x in obj["Lambda"]),
        )


@dataclass(frozen=True)
class TailGraph:
    g: int
    n: int
    root: RootDecoration
    tails: tuple[TailDecoration, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tails", tuple(self.tails))
        k = len(self.tails)
        if self.g < 0 or self.n < 0 or k > self.g:
            raise ValueError(f"need 0 <= k <= g, got g={self.g}, k={k}")
        if len(self.root.leg_psi) != self.n or len(self.root.star_psi) != k:
            raise ValueError("root decoration length does not match (n, k)")
        if any(j > self.root_genus for j in self.root.lambdas):
            raise ValueError(f"lambda index exceeds root genus {self.root_genus}")
        if not is_stable(self.root_genus, self.n + k):
            raise ValueError(f"unstable root vertex ({self.root_genus}, {self.n + k})")

    @property
    def k(self) -> int:
        return len(self.tails)

    @property
    def root_genus(self) -> int:
        return self.g - len(self.tails)

    @property
    def has_big_lambda(self) -> bool:
        return bool(self.root.big_lambda) or any(t.big_lambda for t in self.tails)

    def codim(self) -> int:
        if self.has_big_lambda:
            raise ValueError("codimension undefined while Lambda factors remain")
        r = self.root
        return (
            self.k
            + sum(r.leg_psi)
            + sum(r.star_psi)
            + sum(r.lambdas)
            + sum(t.bullet_psi + t.lambda1_power for t in self.tails)
        )

    def sort_key(self) -> tuple:
        r = self.root
        return (
            self.k,
            r.leg_psi,
            r.lambdas,
            r.big_lambda,
            tuple(sorted(zip((t.key() for t in self.tails), r.star_psi))),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "n": self.n,
            "k": self.k,
            "root": self.root.to_json(),
            "tails": [t.to_json() for t in self.tails],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "TailGraph":
        graph = cls(
            int(obj["g"]),
            int(obj["n"]),
            RootDecoration.from_json(obj["root"]),
            tuple(TailDecoration.from_json(t) for t in obj["tails"]),
        )
        if graph.k != int(obj["k"]):
            raise ValueError("field 'k' disagrees with the number of tails")
        return graph

    @classmethod
    def unit(cls, g: int, n: int) -> "TailGraph":
        return cls(g, n, RootDecoration((0,) * n))


def canonicalize(graph: TailGraph) -> TailGraph:
    """Sort tail slots, each moving together with its star exponent."""
    if graph.k < 2:
        return graph
    slots = sorted(zip(graph.tails, graph.root.star_psi), key=lambda s: (s[0].key(), s[1]))
    tails = tuple(t for t, _ in slots)
    stars = tuple(e for _, e in slots)
    if tails == graph.tails and stars == graph.root.star_psi:
        return graph
    r = graph.root
    return TailGraph(graph.g, graph.n, RootDecoration(r.leg_psi, stars, r.lambdas, r.big_lambda), tails)


@dataclass(frozen=True)
class GraphSum:
    """Finite rational combination of canonical tail graphs on ``Mbar_{g,n}``."""

    g: int
    n: int
    terms: Mapping[TailGraph, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        merged: dict[TailGraph, Fraction] = {}
        for graph, c in self.terms.items():
            if (graph.g, graph.n) != (self.g, self.n):
                raise AmbientMismatch(f"term on ({graph.g}, {graph.n}) in sum on ({self.g}, {self.n})")
            graph = canonicalize(graph)
            merged[graph] = merged.get(graph, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "terms", {gr: c for gr, c in merged.items() if c})

    @classmethod
    def from_pairs(cls, g: int, n: int, pairs: Iterable[tuple[TailGraph, Fraction | int]]) -> "GraphSum":
        acc: dict[TailGraph, Fraction] = {}
        for graph, c in pairs:
            graph = canonicalize(graph)
            acc[graph] = acc.get(graph, Fraction(0)) + c
        return cls(g, n, acc)

    @classmethod
    def unit(cls, g: int, n: int) -> "GraphSum":
        return cls(g, n, {TailGraph.unit(g, n): Fraction(1)})

    @classmethod
    def zero(cls, g: int, n: int) -> "GraphSum":
        return cls(g, n, {})

    @property
    def ambient(self) -> tuple[int, int]:
        return (self.g, self.n)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[TailGraph, Fraction]]:
        return iter(self.sorted_items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphSum):
            return NotImplemented
        return self.ambient == other.ambient and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.ambient, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sorted_items(self) -> list[tuple[TailGraph, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

    def __add__(self, other: "GraphSum") -> "GraphSum":
        return graphsum_add(self, other)

    def __sub__(self, other: "GraphSum") -> "GraphSum":
        return graphsum_add(self, graphsum_scale(other, -1))

    def __neg__(self) -> "GraphSum":
        return graphsum_scale(self, -1)

    def __rmul__(self, c: Fraction | int) -> "GraphSum":
        return graphsum_scale(self, c)

    def filter(self, keep) -> "GraphSum":
        return GraphSum(self.g, self.n, {gr: c for gr, c in self.terms.items() if keep(gr)})

    def to_json(self) -> dict[str, Any]:
        return {
            "ambient": [self.g, self.n],
            "terms": [{"graph": gr.to_json(), "coeff": rational_to_json(c)} for gr, c in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "GraphSum":
        g, n = (int(x) for x in obj["ambient"])
        return cls.from_pairs(
            g, n, ((TailGraph.from_json(t["graph"]), rational_from_json(t["coeff"])) for t in obj["terms"])
        )

    def __repr__(self) -> str:
        if not self.terms:
            return f"GraphSum({self.g}, {self.n}, 0)"
        parts = [f"{c} * {format_graph(gr)}" for gr, c in self.sorted_items()]
        return f"GraphSum({self.g}, {self.n}, " + " + ".join(parts) + ")"


def graphsum_add(a: GraphSum, b: GraphSum) -> GraphSum:
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"cannot add sums on {a.ambient} and {b.ambient}")
    acc = dict(a.terms)
    for gr, c in b.terms.items():
        acc[gr] = acc.get(gr, Fraction(0)) + c
    return GraphSum(a.g, a.n, acc)


def graphsum_scale(a: GraphSum, c: Fraction | int) -> GraphSum:
    c = Fraction(c)
    if not c:
        return GraphSum.zero(a.g, a.n)
    return GraphSum(a.g, a.n, {gr: c * v for gr, v in a.terms.items()})


def format_graph(gr: TailGraph) -> str:
    """Compact human-readable form, e.g. ``G^2[lam(2); *1,0 | (b1), ()]``."""
    r = gr.root
    bits = []
    if any(r.leg_psi):
        bits.append("psi" + ",".join(map(str, r.leg_psi)))
    if r.lambdas:
        bits.append("lam" + "".join(f"({j})" for j in r.lambdas))
    if r.big_lambda:
        bits.append("Lam" + "".join(f"({k:+d})" for k in r.big_lambda))
    if gr.k:
        bits.append("*" + ",".join(map(str, r.star_psi)))
    tails = []
    for t in gr.tails:
        tb = []
        if t.bullet_psi:
            tb.append(f"b{t.bullet_psi}")
        if t.lambda1_power:
            tb.append(f"l{t.lambda1_power}")
        if t.big_lambda:
            tb.append("Lam" + "".join(f"({k:+d})" for k in t.big_lambda))
        tails.append("(" + " ".join(tb) + ")")
    body = "; ".join(bits)
    if tails:
        body += " | " + ", ".join(tails)
    return f"G^{gr.k}[{body}]"
