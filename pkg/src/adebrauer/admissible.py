"""Admissible sets of mutually orthogonal positive roots and their W-orbits.

A set of mutually orthogonal positive roots is *admissible* when it is
closed under the fourth-root rule: for distinct members b1, b2, b3 and any
root g at inner product +-1 with all three, the positive root of
+- r_g r_{b1} r_{b2} r_{b3} g also belongs to the set.  Sets are stored as
sorted tuples of positive-root indices.

The monoid generators act on admissible sets: r_i by reflection, delta
trivially, and e_i by

    e_i B = B                         if alpha_i in B,
            closure(B + {alpha_i})    if alpha_i orthogonal to B,
            r_b r_i B                 for b in B not orthogonal to alpha_i.

The catalog enumerates every admissible set reachable from the empty set
(which is all of them), partitions them into W-orbits, and anchors each
orbit at a canonical base element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .coxeter import CoxeterGraph, RootSystem, WElement, format_cartan_type
from .errors import NotOrthogonal, StructureError
from .subgroups import DEFAULT_CLOSURE_BOUND, ax_generators, group_closure

RootSet = tuple[int, ...]

Token = tuple[str, int]
# ("r", node) | ("e", node) | ("d", +1 or -1)


def admissible_closure(rs: RootSystem, roots: Iterable[int]) -> RootSet:
    """Smallest admissible set containing the given mutually orthogonal
    positive roots.  Idempotent and monotone."""
    current = sorted(set(int(i) for i in roots))
    for a, b in combinations(current, 2):
        if rs.gram[a, b] != 0:
            raise NotOrthogonal(
                f"roots {rs.root_name(a)} and {rs.root_name(b)} are not orthogonal"
            )
    agram = abs(rs.gram)
    grew = True
    while grew:
        grew = False
        members = set(current)
        for b1, b2, b3 in combinations(current, 3):
            joined = (agram[:, b1] == 1) & (agram[:, b2] == 1) & (agram[:, b3] == 1)
            hits = joined.nonzero()[0]
            if len(hits) == 0:
                continue
            fourth = _fourth_root(rs, int(hits[0]), b1, b2, b3)
            if fourth not in members:
                members.add(fourth)
                current = sorted(members)
                grew = True
                break
    return tuple(current)


def _fourth_root(rs: RootSystem, g: int, b1: int, b2: int, b3: int) -> int:
    """Positive root of +- r_g r_{b1} r_{b2} r_{b3} (g)."""
    cur = g
    for b in (b3, b2, b1, g):
        cur = int(rs.refl_index[b, cur])
    return cur


def is_admissible(rs: RootSystem, roots: Sequence[int]) -> bool:
    return admissible_closure(rs, roots) == tuple(sorted(roots))


def sigma_gen(rs: RootSystem, token: Token, b: RootSet) -> RootSet:
    """Action of one monoid generator on an admissible set."""
    kind, arg = token
    if kind == "d":
        return b
    if kind == "r":
        w = rs.simple_reflection(arg)
        return w.act_set(b)
    if kind != "e":
        raise ValueError(f"unknown token {token!r}")
    alpha = rs.simple_index[arg - 1]
    if alpha in b:
        return b
    moved = [x for x in b if rs.gram[alpha, x] != 0]
    if not moved:
        return admissible_closure(rs, b + (alpha,))
    beta = moved[0]  # any choice agrees; smallest index keeps runs reproducible
    ri = rs.simple_reflection(arg)
    rb = rs.reflection(beta)
    return (rb * ri).act_set(b)


def sigma_word(rs: RootSystem, word: Sequence[Token], b: RootSet) -> RootSet:
    """Left action of a generator word: the rightmost token acts first."""
    for token in reversed(word):
        b = sigma_gen(rs, token, b)
    return b


@dataclass
class Orbit:
    """A W-orbit of admissible sets, anchored at its base element.

    ``members`` is sorted lexicographically.  ``u_words`` holds, for each
    member B, a minimal-length word (lexicographically smallest among those)
    with ``u_B . base = B``; the base element's word is empty.
    """

    orbit_id: int
    size_x: int
    members: list[RootSet]
    base_pos: int
    c_nodes: tuple[int, ...]
    c_type: tuple[tuple[str, int], ...]
    u_words: list[tuple[int, ...]]
    member_pos: dict[RootSet, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def base(self) -> RootSet:
        return self.members[self.base_pos]

    def wc_order(self, graph: CoxeterGraph) -> int:
        return graph.parabolic_order(self.c_nodes)


@dataclass
class OrbitCatalog:
    graph: CoxeterGraph
    orbits: list[Orbit]
    lookup: dict[RootSet, tuple[int, int]] = field(repr=False)

    def locate(self, b: RootSet) -> tuple[int, int]:
        """(orbit id, member position) of an admissible set."""
        try:
            return self.lookup[b]
        except KeyError:
            raise KeyError(f"{b!r} is not an admissible set of {self.graph.name}") from None

    def orbit_of(self, b: RootSet) -> Orbit:
        return self.orbits[self.locate(b)[0]]


def c_nodes_of(rs: RootSystem, b: RootSet) -> tuple[int, ...]:
    """Nodes whose simple root is orthogonal to every root of ``b``."""
    return tuple(
        i
        for i in rs.graph.nodes
        if all(rs.gram[rs.simple_index[i - 1], x] == 0 for x in b)
    )


def enumerate_catalog(
    rs: RootSystem,
    closure_bound: int = DEFAULT_CLOSURE_BOUND,
) -> OrbitCatalog:
    """All admissible sets reachable from the empty set, partitioned into
    W-orbits with canonical base elements.

    Orbit ids are assigned by (|X|, first discovery in the generator BFS);
    the empty orbit is id 0 with C equal to the whole node set.
    """
    graph = rs.graph
    tokens: list[Token] = [("r", i) for i in graph.nodes]
    tokens += [("e", i) for i in graph.nodes]

    empty: RootSet = ()
    discovered: list[RootSet] = [empty]
    seen: set[RootSet] = {empty}
    queue = [empty]
    while queue:
        cur = queue.pop(0)
        for token in tokens:
            nxt = sigma_gen(rs, token, cur)
            if nxt not in seen:
                seen.add(nxt)
                discovered.append(nxt)
                queue.append(nxt)

    # Partition into W-orbits, in discovery order.
    assigned: set[RootSet] = set()
    raw_orbits: list[list[RootSet]] = []
    for b in discovered:
        if b in assigned:
            continue
        orbit = [b]
        assigned.add(b)
        q = [b]
        while q:
            cur = q.pop(0)
            for i in graph.nodes:
                nxt = rs.simple_reflection(i).act_set(cur)
                if nxt not in assigned:
                    assigned.add(nxt)
                    orbit.append(nxt)
                    q.append(nxt)
        raw_orbits.append(orbit)

    order = sorted(range(len(raw_orbits)), key=lambda k: (len(raw_orbits[k][0]), k))
    orbits: list[Orbit] = []
    lookup: dict[RootSet, tuple[int, int]] = {}
    for oid, k in enumerate(order):
        members = sorted(raw_orbits[k])
        base_pos = _select_base(rs, members, closure_bound)
        u_words = _coset_words(rs, members, base_pos)
        c = c_nodes_of(rs, members[base_pos]) if members[base_pos] else tuple(graph.nodes)
        orbit = Orbit(
            orbit_id=oid,
            size_x=len(members[0]),
            members=members,
            base_pos=base_pos,
            c_nodes=c,
            c_type=graph.component_types(c),
            u_words=u_words,
            member_pos={b: i for i, b in enumerate(members)},
        )
        orbits.append(orbit)
        for pos, b in enumerate(members):
            lookup[b] = (oid, pos)
    return OrbitCatalog(graph=graph, orbits=orbits, lookup=lookup)


def highest_element(rs: RootSystem, members: Sequence[RootSet]) -> RootSet:
    """The canonical base element of a W-orbit given its members."""
    members = sorted(members)
    return members[_select_base(rs, list(members), DEFAULT_CLOSURE_BOUND)]


# -- base element selection -------------------------------------------------
#
# The base element must split its setwise stabilizer: N_W(X) has to be the
# semidirect product of the annihilator group A_X and the standard parabolic
# W(C) on the nodes orthogonal to X.  Candidates are filtered by |W(C)| =
# |N_W(X)| / |A_X| and then checked for trivial intersection and normality;
# ties are broken towards the largest descending height multiset, then the
# lexicographically smallest root tuple.  When every member has an empty C
# the split is member-independent and the tie-break alone decides.


def _preference_key(rs: RootSystem, b: RootSet) -> tuple:
    heights = tuple(sorted((int(rs.height[i]) for i in b), reverse=True))
    return (heights, tuple(-i for i in b))


def _select_base(rs: RootSystem, members: list[RootSet], closure_bound: int) -> int:
    if members == [()]:
        return 0
    graph = rs.graph
    by_pref = sorted(range(len(members)), key=lambda p: _preference_key(rs, members[p]), reverse=True)

    cs = [c_nodes_of(rs, b) for b in members]
    if all(not c for c in cs):
        return by_pref[0]

    n_order = graph.group_order() // len(members)
    a_order = len(
        group_closure(rs, ax_generators(rs, members[by_pref[0]]), closure_bound)
    )
    if n_order % a_order:
        raise StructureError(
            f"{graph.name}: |A_X| = {a_order} does not divide |N_W(X)| = {n_order}"
        )
    target = n_order // a_order

    for pos in by_pref:
        if graph.parabolic_order(cs[pos]) != target:
            continue
        if _splits(rs, members[pos], cs[pos], a_order, closure_bound):
            return pos
    raise StructureError(
        f"{graph.name}: no member of the orbit of {members[0]} admits the "
        f"semidirect split |A_X| * |W(C)| = {n_order}"
    )


def _splits(
    rs: RootSystem,
    b: RootSet,
    c_nodes: tuple[int, ...],
    a_order: int,
    closure_bound: int,
) -> bool:
    gens = ax_generators(rs, b)
    a_group = group_closure(rs, gens, closure_bound)
    if len(a_group) != a_order:
        return False
    # trivial intersection with W(C)
    for a in a_group.values():
        if a.is_identity():
            continue
        if rs.in_parabolic(a, c_nodes):
            return False
    # W(C) normalizes A_X (generator-level check suffices)
    for i in c_nodes:
        ri = rs.simple_reflection(i)
        for g in gens:
            if (ri * g * ri).key() not in a_group:
                return False
    return True


def _coset_words(
    rs: RootSystem, members: list[RootSet], base_pos: int
) -> list[tuple[int, ...]]:
    """Minimal-length words u_B with u_B . base = B, lexicographically
    smallest in each length class (layered BFS over simple reflections)."""
    graph = rs.graph
    pos_of = {b: i for i, b in enumerate(members)}
    words: dict[int, tuple[int, ...]] = {base_pos: ()}
    layer = [base_pos]
    while len(words) < len(members):
        candidates: dict[int, tuple[int, ...]] = {}
        for p in layer:
            for i in graph.nodes:
                q = pos_of[rs.simple_reflection(i).act_set(members[p])]
                if q in words:
                    continue
                w = (i,) + words[p]
                if q not in candidates or w < candidates[q]:
                    candidates[q] = w
        if not candidates:  # pragma: no cover - orbits are connected
            raise StructureError("orbit is not connected under simple reflections")
        for q, w in candidates.items():
            words[q] = w
        layer = sorted(candidates)
    return [words[i] for i in range(len(members))]


def random_mut_orth_set(
    rs: RootSystem, rng: "np.random.Generator", max_size: int | None = None
) -> RootSet:
    """A random set of mutually orthogonal positive roots (greedy sampling)."""
    n = rs.num_positive
    order = rng.permutation(n)
    out: list[int] = []
    limit = max_size if max_size is not None else n
    for i in order:
        if len(out) >= limit:
            break
        if all(rs.gram[i, j] == 0 for j in out):
            out.append(int(i))
    return tuple(sorted(out))


def iter_admissible(catalog: OrbitCatalog) -> Iterator[RootSet]:
    for orbit in catalog.orbits:
        yield from orbit.members
