"""Defining and derived relations of the Brauer monoid, as data.

Each relation is a pair of token patterns over slot names; instances are
produced by binding slots to nodes subject to the adjacency condition.
``DEFINING`` holds the presentation relations, ``DERIVED`` the additional
ones that follow from them; both must hold in every realization (normal
forms and every orbit representation), which is what the verification
suites check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .coxeter import CoxeterGraph

Pattern = tuple[tuple[str, str | int], ...]
Token = tuple[str, int]


@dataclass(frozen=True)
class Relation:
    label: str
    # slot condition: "one", "noncomm" (i != j, i not~ j), "adj" (i ~ j),
    # "chain" (i ~ j ~ k, i != k), or "none" (no slots)
    condition: str
    lhs: Pattern
    rhs: Pattern


def _p(spec: str) -> Pattern:
    out: list[tuple[str, str | int]] = []
    for tok in spec.split():
        if tok == "d":
            out.append(("d", 1))
        elif tok == "D":
            out.append(("d", -1))
        else:
            out.append((tok[0], tok[1:]))
    return tuple(out)


DEFINING: tuple[Relation, ...] = (
    Relation("delta-inverse", "none", _p("d D"), _p("")),
    Relation("RSrr", "one", _p("ri ri"), _p("")),
    Relation("RSer", "one", _p("ei ri"), _p("ei")),
    Relation("RSre", "one", _p("ri ei"), _p("ei")),
    Relation("HSee", "one", _p("ei ei"), _p("d ei")),
    Relation("HCrr", "noncomm", _p("ri rj"), _p("rj ri")),
    Relation("HCer", "noncomm", _p("ei rj"), _p("rj ei")),
    Relation("HCee", "noncomm", _p("ei ej"), _p("ej ei")),
    Relation("HNrrr", "adj", _p("ri rj ri"), _p("rj ri rj")),
    Relation("HNrer", "adj", _p("rj ei rj"), _p("ri ej ri")),
    Relation("RNrre", "adj", _p("rj ri ej"), _p("ei ej")),
)

DERIVED: tuple[Relation, ...] = (
    Relation("RNerr", "adj", _p("ei rj ri"), _p("ei ej")),
    Relation("HNree", "adj", _p("rj ei ej"), _p("ri ej")),
    Relation("RNere", "adj", _p("ei rj ei"), _p("ei")),
    Relation("HNeer", "adj", _p("ej ei rj"), _p("ej ri")),
    Relation("HNeee", "adj", _p("ei ej ei"), _p("ei")),
    Relation("HTeere", "chain", _p("ej ei rk ej"), _p("ej ri ek ej")),
    Relation("RTerre", "chain", _p("ej ri rk ej"), _p("ej ei ek ej")),
)

ALL_RELATIONS: tuple[Relation, ...] = DEFINING + DERIVED


def bindings(graph: CoxeterGraph, condition: str) -> Iterator[dict[str, int]]:
    nodes = list(graph.nodes)
    if condition == "none":
        yield {}
    elif condition == "one":
        for i in nodes:
            yield {"i": i}
    elif condition == "noncomm":
        for i in nodes:
            for j in nodes:
                if i != j and not graph.adjacent(i, j):
                    yield {"i": i, "j": j}
    elif condition == "adj":
        for i in nodes:
            for j in nodes:
                if graph.adjacent(i, j):
                    yield {"i": i, "j": j}
    elif condition == "chain":
        for j in nodes:
            for i in nodes:
                for k in nodes:
                    if i != k and graph.adjacent(i, j) and graph.adjacent(j, k):
                        yield {"i": i, "j": j, "k": k}
    else:  # pragma: no cover
        raise ValueError(f"unknown condition {condition!r}")


def instantiate(pattern: Pattern, binding: dict[str, int]) -> tuple[Token, ...]:
    out: list[Token] = []
    for kind, slot in pattern:
        if kind == "d":
            out.append(("d", int(slot)))
        else:
            out.append((kind, binding[str(slot)]))
    return tuple(out)


def relation_instances(
    graph: CoxeterGraph, relations: Sequence[Relation] = ALL_RELATIONS
) -> Iterator[tuple[Relation, dict[str, int], tuple[Token, ...], tuple[Token, ...]]]:
    """Every (relation, binding, lhs word, rhs word) for the graph."""
    for rel in relations:
        for binding in bindings(graph, rel.condition):
            yield rel, binding, instantiate(rel.lhs, binding), instantiate(rel.rhs, binding)
