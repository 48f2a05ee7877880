"""Classical Brauer diagrams on n strands: the independent oracle for type A.

A diagram consists of horizontal pairs on the top boundary, horizontal
pairs on the bottom boundary, a bijection between the remaining top and
bottom points, and a loop count (the delta exponent; negative values only
arise from explicit inverse-delta tokens).

Composition stacks two diagrams and traces strands through the interface;
every closed component confined to the interface becomes a loop.  In type
A_{n-1} a positive root is e_i - e_j in coordinates, giving the pair (i, j);
a normal form maps to the diagram with top pairs uX, bottom pairs v^{-1}X,
and through strands given by z acting on the free coordinates of X, matched
to the free points of either boundary in increasing order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .admissible import RootSet, Token
from .errors import InvalidGraph
from .normalform import BrauerMonoid, NormalForm

Pair = tuple[int, int]


@dataclass(frozen=True)
class BrauerDiagram:
    strands: int
    top: tuple[Pair, ...]
    bottom: tuple[Pair, ...]
    through: tuple[Pair, ...]  # (top point, bottom point)
    loops: int = 0

    def __post_init__(self) -> None:
        n = self.strands
        top_pts = [p for pair in self.top for p in pair]
        bot_pts = [p for pair in self.bottom for p in pair]
        thr_top = [a for a, _ in self.through]
        thr_bot = [b for _, b in self.through]
        if sorted(top_pts + thr_top) != list(range(1, n + 1)):
            raise ValueError("top points do not partition 1..n")
        if sorted(bot_pts + thr_bot) != list(range(1, n + 1)):
            raise ValueError("bottom points do not partition 1..n")

    @staticmethod
    def canonical(
        strands: int,
        top: Iterable[Iterable[int]],
        bottom: Iterable[Iterable[int]],
        through: Iterable[Iterable[int]],
        loops: int = 0,
    ) -> "BrauerDiagram":
        fix = lambda pairs: tuple(sorted(tuple(sorted(p)) for p in pairs))
        thr = tuple(sorted(tuple(p) for p in through))
        return BrauerDiagram(strands, fix(top), fix(bottom), thr, loops)


def identity_diagram(n: int) -> BrauerDiagram:
    return BrauerDiagram.canonical(n, (), (), ((i, i) for i in range(1, n + 1)))


def r_diagram(n: int, i: int) -> BrauerDiagram:
    through = [(p, p) for p in range(1, n + 1) if p not in (i, i + 1)]
    through += [(i, i + 1), (i + 1, i)]
    return BrauerDiagram.canonical(n, (), (), through)


def e_diagram(n: int, i: int) -> BrauerDiagram:
    through = [(p, p) for p in range(1, n + 1) if p not in (i, i + 1)]
    return BrauerDiagram.canonical(n, [(i, i + 1)], [(i, i + 1)], through)


def compose(d1: BrauerDiagram, d2: BrauerDiagram) -> BrauerDiagram:
    """Stack d1 on top of d2 and trace strands; interface cycles add loops."""
    if d1.strands != d2.strands:
        raise ValueError(f"strand mismatch: {d1.strands} vs {d2.strands}")
    n = d1.strands
    # Interface point p has exactly one edge on the d1 side and one on the
    # d2 side; boundary points have a single edge.
    up: dict[int, tuple[str, int]] = {}
    down: dict[int, tuple[str, int]] = {}
    top_edge: dict[int, tuple[str, int]] = {}
    bot_edge: dict[int, tuple[str, int]] = {}
    for a, b in d1.top:
        top_edge[a] = ("t", b)
        top_edge[b] = ("t", a)
    for a, b in d1.through:
        top_edge[a] = ("m", b)
        up[b] = ("t", a)
    for a, b in d1.bottom:
        up[a] = ("m", b)
        up[b] = ("m", a)
    for a, b in d2.bottom:
        bot_edge[a] = ("b", b)
        bot_edge[b] = ("b", a)
    for a, b in d2.through:
        bot_edge[b] = ("m", a)
        down[a] = ("b", b)
    for a, b in d2.top:
        down[a] = ("m", b)
        down[b] = ("m", a)

    def step(side: str, point: int, came_from_d1: bool) -> tuple[str, int, bool]:
        # came_from_d1: the edge just used was on the d1 side, so continue on
        # the d2 side (and vice versa); boundaries stop the walk.
        kind, nxt = (down if came_from_d1 else up)[point]
        return kind, nxt, not came_from_d1

    new_top: list[tuple[int, int]] = []
    new_bottom: list[tuple[int, int]] = []
    new_through: list[tuple[int, int]] = []
    visited_mid: set[tuple[int, bool]] = set()

    def walk(start_kind: str, start: int) -> tuple[str, int]:
        kind, point = (top_edge if start_kind == "t" else bot_edge)[start]
        came_from_d1 = start_kind == "t"
        while kind == "m":
            visited_mid.add((point, came_from_d1))
            kind, point, came_from_d1 = step(kind, point, came_from_d1)
            if kind == "m":
                visited_mid.add((point, not came_from_d1))
        return kind, point

    done: set[tuple[str, int]] = set()
    for p in range(1, n + 1):
        for boundary in ("t", "b"):
            if (boundary, p) in done:
                continue
            done.add((boundary, p))
            kind, q = walk(boundary, p)
            done.add((kind, q))
            if boundary == "t" and kind == "t":
                new_top.append((p, q))
            elif boundary == "b" and kind == "b":
                new_bottom.append((p, q))
            elif boundary == "t" and kind == "b":
                new_through.append((p, q))
            else:  # walked bottom-up along a through strand
                new_through.append((q, p))

    # Interface cycles: every middle point carries one d1-side and one
    # d2-side edge end; unvisited ones close up into cycles.
    loops = d1.loops + d2.loops
    pending = {
        p for p in range(1, n + 1) if (p, True) not in visited_mid and (p, False) not in visited_mid
    }
    while pending:
        start = pending.pop()
        came_from_d1 = True  # leave via the d2 side first
        point = start
        while True:
            kind, point, came_from_d1 = step("m", point, came_from_d1)
            assert kind == "m"
            if point == start and came_from_d1:
                break
            pending.discard(point)
        loops += 1
    return BrauerDiagram.canonical(n, new_top, new_bottom, new_through, loops)


def token_diagram(n: int, token: Token) -> BrauerDiagram:
    kind, arg = token
    if kind == "r":
        return r_diagram(n, arg)
    if kind == "e":
        return e_diagram(n, arg)
    if kind == "d":
        base = identity_diagram(n)
        return BrauerDiagram(base.strands, base.top, base.bottom, base.through, arg)
    raise ValueError(f"unknown token {token!r}")


def word_to_diagram(n: int, word: Sequence[Token]) -> BrauerDiagram:
    acc = identity_diagram(n)
    for token in word:
        acc = compose(acc, token_diagram(n, token))
    return acc


def root_pair(coeffs: Sequence[int]) -> Pair:
    """Coordinate pair (i, j) of the type-A positive root e_i - e_j."""
    support = [k for k, c in enumerate(coeffs) if c != 0]
    return (support[0] + 1, support[-1] + 2)


def set_pairs(monoid: BrauerMonoid, roots: RootSet) -> tuple[Pair, ...]:
    return tuple(sorted(root_pair(monoid.rs.root(i)) for i in roots))


def nf_to_diagram(monoid: BrauerMonoid, nf: NormalForm) -> BrauerDiagram:
    """Diagram of a normal form over A_{n-1}; inverse of the word oracle."""
    if monoid.graph.kind != "A":
        raise InvalidGraph("diagrams are defined for type A only")
    n = monoid.graph.rank + 1
    orbit = nf.orbit
    top = set_pairs(monoid, nf.left_set)
    bottom = set_pairs(monoid, nf.right_set)
    covered_top = {p for pair in top for p in pair}
    covered_bot = {p for pair in bottom for p in pair}
    base_pairs = set_pairs(monoid, orbit.base)
    covered_base = {p for pair in base_pairs for p in pair}
    free_top = [p for p in range(1, n + 1) if p not in covered_top]
    free_bot = [p for p in range(1, n + 1) if p not in covered_bot]
    free_base = [p for p in range(1, n + 1) if p not in covered_base]
    # z as a stack of crossing diagrams over the free coordinates of X: each
    # crossing swaps the strand VALUES at i, i+1 (identity when C is empty).
    perm = list(range(n + 1))
    vpos = list(range(n + 1))
    for i in nf.z_word():
        x1, x2 = vpos[i], vpos[i + 1]
        perm[x1], perm[x2] = i + 1, i
        vpos[i], vpos[i + 1] = x2, x1
    pos_in_base = {p: a for a, p in enumerate(free_base)}
    through = []
    for a, p in enumerate(free_top):
        through.append((p, free_bot[pos_in_base[perm[free_base[a]]]]))
    return BrauerDiagram.canonical(n, top, bottom, through, nf.k)


def render_diagram(d: BrauerDiagram) -> str:
    lines = [f"strands: {d.strands}"]
    lines.append("top:     " + (" ".join(f"({a},{b})" for a, b in d.top) or "-"))
    lines.append("bottom:  " + (" ".join(f"({a},{b})" for a, b in d.bottom) or "-"))
    lines.append("through: " + (" ".join(f"{a}->{b}" for a, b in d.through) or "-"))
    lines.append(f"loops:   {d.loops}")
    return "\n".join(lines)
