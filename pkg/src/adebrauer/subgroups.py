"""Reflection subgroup closures: the annihilator group of an idempotent
e_X and enumerated standard parabolics.

The annihilator group A_X is generated by the reflections in the roots of X
together with the four-reflection products r_a r_b r_c r_a for roots a at
inner product +-1 with two members b, c of X; the product collapses to the
pair of reflections in r_a(b) and r_a(c).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .coxeter import RootSystem, WElement
from .errors import ClosureBound

DEFAULT_CLOSURE_BOUND = 1 << 17


def ax_generators(rs: RootSystem, roots: Sequence[int]) -> list[WElement]:
    """Deduplicated generating set of A_X for a set of mutually orthogonal
    positive roots (by index)."""
    gens: dict[bytes, WElement] = {}
    for b in roots:
        g = rs.reflection(b)
        gens.setdefault(g.key(), g)
    agram = abs(rs.gram)
    for b, c in combinations(roots, 2):
        mask = (agram[:, b] == 1) & (agram[:, c] == 1)
        for a in mask.nonzero()[0]:
            rb = int(rs.refl_index[a, b])
            rc = int(rs.refl_index[a, c])
            g = rs.reflection(rb) * rs.reflection(rc)
            gens.setdefault(g.key(), g)
    return list(gens.values())


def group_closure(
    rs: RootSystem,
    generators: Iterable[WElement],
    max_size: int = DEFAULT_CLOSURE_BOUND,
) -> dict[bytes, WElement]:
    """All products of the generators, keyed by signed-permutation bytes.

    Closes over a spanning subset first and then checks the remaining
    generators are absorbed, which keeps the number of multiplications at
    |group| * |spanning set|.  Raises :class:`ClosureBound` beyond
    ``max_size`` elements.
    """
    ident = rs.identity()
    elements: dict[bytes, WElement] = {ident.key(): ident}
    active: list[WElement] = []
    for g in generators:
        if g.key() in elements:
            continue
        active.append(g)
        elements[g.key()] = g
        frontier = [g]
        while frontier:
            nxt: list[WElement] = []
            for h in frontier:
                for gen in active:
                    p = gen * h
                    k = p.key()
                    if k not in elements:
                        if len(elements) >= max_size:
                            raise ClosureBound(
                                f"subgroup closure exceeded bound {max_size}"
                            )
                        elements[k] = p
                        nxt.append(p)
            frontier = nxt
    return elements


def enumerate_parabolic(
    rs: RootSystem, nodes: Iterable[int], max_size: int = DEFAULT_CLOSURE_BOUND
) -> list[WElement]:
    """Elements of the standard parabolic W(nodes) in BFS-from-identity order
    (word length, then generator-lexicographic)."""
    nodes = sorted(nodes)
    ident = rs.identity()
    out = [ident]
    index: set[bytes] = {ident.key()}
    frontier = [ident]
    while frontier:
        nxt: list[WElement] = []
        for w in frontier:
            for i in nodes:
                p = w * rs.simple_reflection(i)
                k = p.key()
                if k not in index:
                    if len(out) >= max_size:
                        raise ClosureBound(
                            f"parabolic enumeration exceeded bound {max_size}"
                        )
                    index.add(k)
                    out.append(p)
                    nxt.append(p)
        frontier = nxt
    return out
