"""Connected simply laced spherical Coxeter graphs, their root systems, and
exact Weyl group elements.

Everything is integral: roots are integer coefficient vectors in the simple
root basis, the bilinear form is the standard normalized one with
(alpha, alpha) = 2, and group elements are signed permutations of the
positive roots.  Node labels follow Bourbaki:

* ``A_n``   -- the path ``1 - 2 - ... - n``;
* ``D_n``   -- the path ``1 - 2 - ... - (n-2)`` with both ``n-1`` and ``n``
  attached to ``n-2`` (so ``alpha_i = e_i - e_{i+1}`` for ``i < n`` and
  ``alpha_n = e_{n-1} + e_n``);
* ``E_6``, ``E_7``, ``E_8`` -- the chain ``1 - 3 - 4 - 5 - 6 (- 7 (- 8))``
  with node ``2`` attached to node ``4``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidGraph

_EXPECTED_POSITIVE = {"E6": 36, "E7": 63, "E8": 120}
_E_GROUP_ORDER = {6: 51840, 7: 2903040, 8: 696729600}

_SPEC_RE = re.compile(r"^([ADE])\s*_?\s*(\d+)$")


@dataclass(frozen=True)
class CoxeterGraph:
    """A connected ADE diagram with Bourbaki node labels ``1..rank``."""

    kind: str
    rank: int
    edges: frozenset[tuple[int, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind == "A":
            if self.rank < 1:
                raise InvalidGraph(f"A_n needs n >= 1, got {self.rank}")
            edges = {(i, i + 1) for i in range(1, self.rank)}
        elif self.kind == "D":
            if self.rank < 4:
                raise InvalidGraph(f"D_n needs n >= 4, got {self.rank}")
            edges = {(i, i + 1) for i in range(1, self.rank - 1)}
            edges.add((self.rank - 2, self.rank))
        elif self.kind == "E":
            if self.rank not in (6, 7, 8):
                raise InvalidGraph(f"E_n needs n in {{6,7,8}}, got {self.rank}")
            edges = {(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)}
            if self.rank >= 7:
                edges.add((6, 7))
            if self.rank == 8:
                edges.add((7, 8))
        else:
            raise InvalidGraph(f"unknown diagram kind {self.kind!r}")
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_spec(cls, spec: str) -> "CoxeterGraph":
        """Parse a specification string such as ``"A3"``, ``"D4"`` or ``"E6"``."""
        m = _SPEC_RE.match(spec.strip().upper())
        if not m:
            raise InvalidGraph(f"cannot parse graph spec {spec!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def group_order(self) -> int:
        """Order of the Coxeter group W."""
        if self.kind == "A":
            return math.factorial(self.rank + 1)
        if self.kind == "D":
            return 2 ** (self.rank - 1) * math.factorial(self.rank)
        return _E_GROUP_ORDER[self.rank]

    def bilinear_matrix(self) -> np.ndarray:
        """Gram matrix of the simple roots, normalized to (a_i, a_i) = 2."""
        n = self.rank
        b = 2 * np.eye(n, dtype=np.int64)
        for i, j in self.edges:
            b[i - 1, j - 1] = b[j - 1, i - 1] = -1
        return b

    def component_types(self, nodes: Iterable[int]) -> tuple[tuple[str, int], ...]:
        """Cartan types of the subdiagram induced on ``nodes``, sorted
        canonically.  Components are classified by shape: paths are type A,
        one branch node with two length-1 arms is type D, the remaining
        shapes are E_6/E_7/E_8."""
        nodeset = set(nodes)
        adj = {v: [u for u in nodeset if self.adjacent(u, v)] for v in nodeset}
        seen: set[int] = set()
        types: list[tuple[str, int]] = []
        for start in sorted(nodeset):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                v = stack.pop()
                for u in adj[v]:
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        stack.append(u)
            types.append(_classify_component(comp, adj))
        return tuple(sorted(types))

    def parabolic_order(self, nodes: Iterable[int]) -> int:
        """Order of the standard parabolic subgroup W(nodes)."""
        order = 1
        for kind, m in self.component_types(nodes):
            if kind == "A":
                order *= math.factorial(m + 1)
            elif kind == "D":
                order *= 2 ** (m - 1) * math.factorial(m)
            else:
                order *= _E_GROUP_ORDER[m]
        return order


def _classify_component(comp: list[int], adj: dict[int, list[int]]) -> tuple[str, int]:
    degs = {v: len([u for u in adj[v] if u in comp]) for v in comp}
    branch = [v for v in comp if degs[v] == 3]
    if not branch:
        return ("A", len(comp))
    if len(branch) > 1:
        raise InvalidGraph("subdiagram with two branch nodes is not of ADE type")
    v = branch[0]
    arms = []
    for u in adj[v]:
        length = 1
        prev, cur = v, u
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", len(comp))
    if arms == [1, 2, 2]:
        return ("E", 6)
    if arms == [1, 2, 3]:
        return ("E", 7)
    if arms == [1, 2, 4]:
        return ("E", 8)
    raise InvalidGraph(f"branching shape {arms} is not of ADE type")


def format_cartan_type(types: Sequence[tuple[str, int]]) -> str:
    if not types:
        return "-"
    return " ".join(f"{k}{m}" for k, m in types)


class WElement:
    """An element of W stored as a signed permutation of the positive roots.

    ``perm[i]`` is the index of the positive root ``+-w(beta_i)`` and
    ``sign[i]`` the sign making that equation true.  Composition, inversion
    and equality are exact; ``length`` counts positive roots sent negative.
    """

    __slots__ = ("rs", "perm", "sign", "_hash")

    def __init__(self, rs: "RootSystem", perm: np.ndarray, sign: np.ndarray):
        self.rs = rs
        self.perm = perm
        self.sign = sign
        self._hash: int | None = None

    def key(self) -> bytes:
        return self.perm.tobytes() + self.sign.tobytes()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WElement):
            return NotImplemented
        return (
            np.array_equal(self.perm, other.perm)
            and np.array_equal(self.sign, other.sign)
        )

    def __mul__(self, other: "WElement") -> "WElement":
        """Composition ``self o other`` (apply ``other`` first)."""
        perm = self.perm[other.perm]
        sign = other.sign * self.sign[other.perm]
        return WElement(self.rs, perm, sign)

    def inverse(self) -> "WElement":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm), dtype=self.perm.dtype)
        sign = np.empty_like(self.sign)
        sign[self.perm] = self.sign
        return WElement(self.rs, inv, sign)

    def is_identity(self) -> bool:
        return bool(np.all(self.sign == 1)) and bool(
            np.all(self.perm == np.arange(len(self.perm), dtype=self.perm.dtype))
        )

    def length(self) -> int:
        return int(np.count_nonzero(self.sign < 0))

    def image(self, root_index: int) -> tuple[int, int]:
        """Signed image ``(index, sign)`` of a positive root."""
        return int(self.perm[root_index]), int(self.sign[root_index])

    def act_set(self, roots: Iterable[int]) -> tuple[int, ...]:
        """Image of a set of positive roots, as positive roots."""
        return tuple(sorted(int(self.perm[i]) for i in roots))

    def __repr__(self) -> str:
        return f"WElement(len={self.length()})"


class RootSystem:
    """All roots of an ADE diagram, with cached reflection tables.

    Positive roots are ordered by (height, coefficient vector); the first
    ``rank`` heights are 1 so the simple roots head the list (in coefficient
    order, not node order -- use :attr:`simple_index`).
    """

    def __init__(self, graph: CoxeterGraph):
        self.graph = graph
        self.bilinear = graph.bilinear_matrix()
        pos = _positive_roots(graph, self.bilinear)
        pos.sort(key=lambda v: (sum(v), v))
        self.roots: list[tuple[int, ...]] = pos
        self.num_positive = len(pos)
        self.index: dict[tuple[int, ...], int] = {v: i for i, v in enumerate(pos)}
        self.matrix = np.array(pos, dtype=np.int64)
        self.height = self.matrix.sum(axis=1)
        self.gram = self.matrix @ self.bilinear @ self.matrix.T
        # simple_index[i] = root index of alpha_{i+1}
        self.simple_index = [
            self.index[tuple(int(k == i) for k in range(graph.rank))]
            for i in range(graph.rank)
        ]
        self._build_reflection_tables()
        self._identity = WElement(
            self,
            np.arange(self.num_positive, dtype=np.int16),
            np.ones(self.num_positive, dtype=np.int8),
        )
        self._simple_refl = [self.reflection(self.simple_index[i]) for i in range(graph.rank)]
        self._parabolic_masks: dict[tuple[int, ...], np.ndarray] = {}

    def _build_reflection_tables(self) -> None:
        n = self.num_positive
        idx = np.empty((n, n), dtype=np.int16)
        sgn = np.empty((n, n), dtype=np.int8)
        for b in range(n):
            images = self.matrix - np.outer(self.gram[b], self.matrix[b])
            for g in range(n):
                v = tuple(int(x) for x in images[g])
                j = self.index.get(v)
                if j is not None:
                    idx[b, g] = j
                    sgn[b, g] = 1
                else:
                    idx[b, g] = self.index[tuple(-x for x in v)]
                    sgn[b, g] = -1
        self.refl_index = idx
        self.refl_sign = sgn

    # -- elements ---------------------------------------------------------

    def identity(self) -> WElement:
        return self._identity

    def reflection(self, root_index: int) -> WElement:
        return WElement(self, self.refl_index[root_index], self.refl_sign[root_index])

    def simple_reflection(self, node: int) -> WElement:
        return self._simple_refl[node - 1]

    def word_to_element(self, word: Iterable[int]) -> WElement:
        """The product ``r_{i_1} ... r_{i_k}`` for ``word = (i_1, ..., i_k)``."""
        acc = self._identity
        for i in word:
            acc = acc * self._simple_refl[i - 1]
        return acc

    # -- roots ------------------------------------------------------------

    def inner(self, i: int, j: int) -> int:
        """Bilinear form value of two positive roots, by index."""
        return int(self.gram[i, j])

    def root(self, i: int) -> tuple[int, ...]:
        return self.roots[i]

    def root_name(self, i: int) -> str:
        return "(" + ",".join(str(c) for c in self.roots[i]) + ")"

    def reflect_root(self, b: int, g: int) -> tuple[int, int]:
        """Signed index of ``r_{beta_b}(beta_g)``."""
        return int(self.refl_index[b, g]), int(self.refl_sign[b, g])

    def simple_root_word(self, root_index: int) -> tuple[tuple[int, ...], int]:
        """A word ``w`` and node ``j`` with ``w(alpha_j) = beta``.

        Walks the root down by height: a positive non-simple root always has
        a simple root at inner product 1."""
        word: list[int] = []
        cur = root_index
        while True:
            for node in self.graph.nodes:
                if cur == self.simple_index[node - 1]:
                    return tuple(word), node
            for node in self.graph.nodes:
                if self.gram[self.simple_index[node - 1], cur] == 1:
                    word.append(node)
                    cur = int(self.refl_index[self.simple_index[node - 1], cur])
                    break
            else:  # pragma: no cover - every positive root descends
                raise RuntimeError("no descent found for positive root")

    # -- parabolic machinery ----------------------------------------------

    def parabolic_mask(self, nodes: tuple[int, ...]) -> np.ndarray:
        """Boolean mask of the positive roots supported on ``nodes``."""
        cached = self._parabolic_masks.get(nodes)
        if cached is None:
            outside = [i for i in range(self.graph.rank) if (i + 1) not in nodes]
            cached = (self.matrix[:, outside] == 0).all(axis=1)
            self._parabolic_masks[nodes] = cached
        return cached

    def in_parabolic(self, w: WElement, nodes: tuple[int, ...]) -> bool:
        """Membership in the standard parabolic W(nodes): an element lies in
        it exactly when its inversion set is supported on ``nodes``."""
        return bool(self.parabolic_mask(nodes)[w.sign < 0].all())

    def parabolic_factor(self, w: WElement, nodes: Iterable[int]) -> tuple[int, ...] | None:
        """A reduced word for ``w`` over ``{r_i : i in nodes}`` via repeated
        descent, or ``None`` when ``w`` is not in that standard parabolic."""
        nodes = tuple(nodes)
        if not self.in_parabolic(w, nodes):
            return None
        stripped: list[int] = []
        cur = w
        while True:
            if cur.is_identity():
                return tuple(reversed(stripped))
            for i in nodes:
                if cur.sign[self.simple_index[i - 1]] < 0:
                    cur = cur * self._simple_refl[i - 1]
                    stripped.append(i)
                    break
            else:  # pragma: no cover - ruled out by the mask test
                return None

    def element_word(self, w: WElement) -> tuple[int, ...]:
        """A reduced word for an arbitrary element (descent over all nodes)."""
        word = self.parabolic_factor(w, self.graph.nodes)
        assert word is not None
        return word


@lru_cache(maxsize=None)
def root_system(spec: str) -> RootSystem:
    """Cached root system for a graph spec string."""
    return RootSystem(CoxeterGraph.from_spec(spec))


def _positive_roots(graph: CoxeterGraph, bilinear: np.ndarray) -> list[tuple[int, ...]]:
    n = graph.rank
    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    seen: set[tuple[int, ...]] = set(simple)
    frontier = list(simple)
    while frontier:
        nxt: list[tuple[int, ...]] = []
        for v in frontier:
            bv = bilinear @ np.array(v, dtype=np.int64)
            for i in range(n):
                w = list(v)
                w[i] -= int(bv[i])
                wt = tuple(w)
                if wt not in seen and _same_sign(wt):
                    seen.add(wt)
                    nxt.append(wt)
        frontier = nxt
    positive = [v for v in seen if all(c >= 0 for c in v)]
    expected = _expected_positive_count(graph)
    if len(positive) != expected:
        raise InvalidGraph(
            f"{graph.name}: got {len(positive)} positive roots, expected {expected}"
        )
    return positive


def _same_sign(v: tuple[int, ...]) -> bool:
    return all(c >= 0 for c in v) or all(c <= 0 for c in v)


def _expected_positive_count(graph: CoxeterGraph) -> int:
    if graph.kind == "A":
        return graph.rank * (graph.rank + 1) // 2
    if graph.kind == "D":
        return graph.rank * (graph.rank - 1)
    return _EXPECTED_POSITIVE[graph.name]


def mutually_orthogonal(rs: RootSystem, roots: Sequence[int]) -> bool:
    return all(rs.gram[a, b] == 0 for a, b in combinations(roots, 2))
