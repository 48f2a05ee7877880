"""Dimension of the Brauer algebra: closed forms, the orbit sum, and a
brute-force enumeration oracle.

The closed forms are (n+1)!! for A_n with k!! the product of the first k
odd numbers, (2^n + 1) n!! - (2^{n-1} + 1) n! for D_n, and the fixed values
1,440,585 / 139,613,625 / 53,328,069,225 for E_6 / E_7 / E_8.  The orbit sum
adds |orbit|^2 |W(C)| over the catalog (the empty orbit contributes |W|).
All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .admissible import OrbitCatalog
from .coxeter import CoxeterGraph, format_cartan_type
from .errors import ClosureBound
from .normalform import BrauerMonoid, NormalForm, Token

E_DIMENSIONS = {6: 1_440_585, 7: 139_613_625, 8: 53_328_069_225}


def odd_double_factorial(k: int) -> int:
    """1 * 3 * ... * (2k - 1)."""
    out = 1
    for i in range(1, k + 1):
        out *= 2 * i - 1
    return out


def closed_form(graph: CoxeterGraph | str) -> int:
    """Rank of the Brauer algebra over Z[delta, delta^{-1}]."""
    if isinstance(graph, str):
        graph = CoxeterGraph.from_spec(graph)
    n = graph.rank
    if graph.kind == "A":
        return odd_double_factorial(n + 1)
    if graph.kind == "D":
        return (2**n + 1) * odd_double_factorial(n) - (2 ** (n - 1) + 1) * math.factorial(n)
    return E_DIMENSIONS[n]


@dataclass(frozen=True)
class OrbitContribution:
    orbit_id: int
    size_x: int
    orbit_size: int
    c_type: str
    wc_order: int
    contribution: int


@dataclass(frozen=True)
class DimReport:
    graph: str
    closed_form: int
    orbit_sum: int
    contributions: tuple[OrbitContribution, ...]

    @property
    def match(self) -> bool:
        return self.closed_form == self.orbit_sum


def orbit_sum(catalog: OrbitCatalog) -> DimReport:
    """Sum of |orbit|^2 |W(C)| over all orbits, against the closed form."""
    graph = catalog.graph
    rows = []
    total = 0
    for orbit in catalog.orbits:
        wc = orbit.wc_order(graph)
        contrib = orbit.size * orbit.size * wc
        total += contrib
        rows.append(
            OrbitContribution(
                orbit_id=orbit.orbit_id,
                size_x=orbit.size_x,
                orbit_size=orbit.size,
                c_type=format_cartan_type(orbit.c_type),
                wc_order=wc,
                contribution=contrib,
            )
        )
    return DimReport(
        graph=graph.name,
        closed_form=closed_form(graph),
        orbit_sum=total,
        contributions=tuple(rows),
    )


def brute_force_dim(monoid: BrauerMonoid, bound: int = 2_000_000) -> int:
    """Number of elements of the monoid modulo delta powers, by breadth-first
    closure of the identity under right multiplication by the generators.

    Aborts with :class:`ClosureBound` past ``bound`` elements; intended for
    small types where the count can be compared against the closed form.
    """
    graph = monoid.graph
    gens: list[Token] = [("r", i) for i in graph.nodes]
    gens += [("e", i) for i in graph.nodes]

    def key(nf: NormalForm) -> tuple:
        return (nf.orbit_id, nf.left, nf.right, nf.z.key())

    start = monoid.identity_nf()
    seen = {key(start)}
    frontier = [start]
    while frontier:
        nxt: list[NormalForm] = []
        for nf in frontier:
            word = monoid.canonical_word(nf)
            for g in gens:
                product = monoid.normalize(word + (g,))
                k = key(product)
                if k not in seen:
                    if len(seen) >= bound:
                        raise ClosureBound(f"monoid enumeration exceeded bound {bound}")
                    seen.add(k)
                    nxt.append(product)
        frontier = nxt
    return len(seen)
