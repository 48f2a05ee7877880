"""The Brauer monoid core: normalization to the canonical form
``u e_X z v delta^k``, multiplication, opposition and equality.

Words are normalized by the two-sided scheme: the admissible-set action
applied to the empty set from both ends of the word locates the orbit and
the pair (L, R); evaluating the decorated-vector representation of
``u^{-1} a v^{-1}`` on the base vector of the orbit then yields the inner
element z of W(C) and the delta exponent.

The decorated-vector action is realized by transport along the stored
minimal coset representatives: a group element w sends the vector indexed
by B to the one indexed by wB, decorated by the W(C)-component of
``u_{wB}^{-1} w u_B`` under the split N_W(X) = A_X x| W(C).  The split is
established per orbit when the catalog selects its base element; here it is
used through :meth:`OrbitEngine.project`.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .admissible import (
    OrbitCatalog,
    Orbit,
    RootSet,
    Token,
    enumerate_catalog,
    sigma_word,
)
from .coxeter import CoxeterGraph, RootSystem, WElement, root_system
from .errors import InternalConsistency, NotOrthogonal, StructureError
from .subgroups import (
    DEFAULT_CLOSURE_BOUND,
    ax_generators,
    enumerate_parabolic,
    group_closure,
)

_TOKEN_RE = re.compile(r"^(?:([re])(\d+)|d|D)$")

DecoratedVector = tuple[int, WElement, int] | None
# (member position, W(C) element, delta exponent); None is the zero vector.


def parse_word(text: str) -> tuple[Token, ...]:
    """Parse the word grammar: whitespace-separated ``r<i>``, ``e<i>``,
    ``d`` (delta) and ``D`` (delta inverse)."""
    out: list[Token] = []
    for piece in text.split():
        m = _TOKEN_RE.match(piece)
        if not m:
            raise ValueError(f"bad token {piece!r} (expected r<i>, e<i>, d or D)")
        if m.group(1):
            out.append((m.group(1), int(m.group(2))))
        else:
            out.append(("d", 1 if piece == "d" else -1))
    return tuple(out)


def format_word(word: Iterable[Token]) -> str:
    parts = []
    for kind, arg in word:
        if kind == "d":
            parts.append("d" if arg > 0 else "D")
        else:
            parts.append(f"{kind}{arg}")
    return " ".join(parts)


def check_word(graph: CoxeterGraph, word: Sequence[Token]) -> None:
    for kind, arg in word:
        if kind in ("r", "e") and not 1 <= arg <= graph.rank:
            raise ValueError(f"token {kind}{arg} out of range for {graph.name}")
        if kind == "d" and arg not in (1, -1):
            raise ValueError("delta token must have exponent +1 or -1")
        if kind not in ("r", "e", "d"):
            raise ValueError(f"unknown token kind {kind!r}")


class NormalForm:
    """The canonical quadruple (orbit, u, v, z) with delta exponent k,
    standing for ``u e_X z v delta^k``.

    ``left``/``right`` are the member positions of L = uX and R = v^{-1}X
    inside the orbit; u and v are recovered from the stored coset words.
    """

    __slots__ = ("monoid", "orbit_id", "left", "right", "z", "k", "_hash")

    def __init__(self, monoid: "BrauerMonoid", orbit_id: int, left: int, right: int, z: WElement, k: int):
        self.monoid = monoid
        self.orbit_id = orbit_id
        self.left = left
        self.right = right
        self.z = z
        self.k = k
        self._hash: int | None = None

    def data(self) -> tuple[int, int, int, bytes, int]:
        return (self.orbit_id, self.left, self.right, self.z.key(), self.k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.data() == other.data()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.data())
        return self._hash

    @property
    def orbit(self) -> Orbit:
        return self.monoid.catalog.orbits[self.orbit_id]

    @property
    def left_set(self) -> RootSet:
        return self.orbit.members[self.left]

    @property
    def right_set(self) -> RootSet:
        return self.orbit.members[self.right]

    def z_word(self) -> tuple[int, ...]:
        word = self.monoid.rs.parabolic_factor(self.z, self.orbit.c_nodes)
        if word is None:  # pragma: no cover - z is constructed inside W(C)
            raise InternalConsistency("stored z lies outside W(C)")
        return word

    def __repr__(self) -> str:
        rs = self.monoid.rs
        ls = ",".join(rs.root_name(i) for i in self.left_set)
        vs = ",".join(rs.root_name(i) for i in self.right_set)
        return (
            f"NormalForm(orbit={self.orbit_id}, L=[{ls}], R=[{vs}], "
            f"z={self.z_word()}, k={self.k})"
        )


class OrbitEngine:
    """Per-orbit machinery: coset representatives as group elements, the
    annihilator group, and the transport action on decorated vectors."""

    def __init__(self, monoid: "BrauerMonoid", orbit: Orbit):
        self.monoid = monoid
        self.rs = monoid.rs
        self.orbit = orbit
        self.c_nodes = orbit.c_nodes
        self.c_is_all = len(orbit.c_nodes) == monoid.graph.rank
        self.wc_order = monoid.graph.parabolic_order(orbit.c_nodes)
        self._u: list[WElement | None] = [None] * orbit.size
        self._u_inv: list[WElement | None] = [None] * orbit.size
        self._a_group: dict[bytes, WElement] | None = None
        self._a_pairs: list[tuple[WElement, WElement]] | None = None
        self._wc: list[WElement] | None = None
        self._wc_index: dict[bytes, int] | None = None
        self._wc_inv: list[WElement] | None = None
        self._step_cache: dict[tuple[str, int, int], object] = {}

    # -- coset representatives ------------------------------------------

    def u_elem(self, pos: int) -> WElement:
        w = self._u[pos]
        if w is None:
            w = self.rs.word_to_element(self.orbit.u_words[pos])
            self._u[pos] = w
        return w

    def u_inv(self, pos: int) -> WElement:
        w = self._u_inv[pos]
        if w is None:
            w = self.u_elem(pos).inverse()
            self._u_inv[pos] = w
        return w

    # -- A_X and W(C) -----------------------------------------------------

    def a_group(self) -> dict[bytes, WElement]:
        if self._a_group is None:
            gens = ax_generators(self.rs, self.orbit.base)
            self._a_group = group_closure(self.rs, gens, self.monoid.closure_bound)
        return self._a_group

    def a_pairs(self) -> list[tuple[WElement, WElement]]:
        if self._a_pairs is None:
            self._a_pairs = [(a, a.inverse()) for a in self.a_group().values()]
        return self._a_pairs

    def wc_elements(self) -> list[WElement]:
        if self._wc is None:
            self._wc = enumerate_parabolic(
                self.rs, self.c_nodes, max(self.wc_order, 1)
            )
            self._wc_index = {w.key(): i for i, w in enumerate(self._wc)}
        return self._wc

    def wc_index(self, w: WElement) -> int:
        self.wc_elements()
        assert self._wc_index is not None
        return self._wc_index[w.key()]

    def wc_inverses(self) -> list[WElement]:
        if self._wc_inv is None:
            self._wc_inv = [w.inverse() for w in self.wc_elements()]
        return self._wc_inv

    # -- the semidirect projection ---------------------------------------

    def project(self, n: WElement) -> tuple[WElement, WElement]:
        """Factor a stabilizer element as ``n = a * c`` with a in A_X and
        c in W(C).  Unique by the semidirect split of the base element."""
        if self.c_is_all:
            return (self.rs.identity(), n)
        if not self.c_nodes:
            return (n, self.rs.identity())
        if self.rs.in_parabolic(n, self.c_nodes):
            return (self.rs.identity(), n)
        a_order = len(self.a_group())
        if a_order <= self.wc_order:
            for a, a_inv in self.a_pairs():
                c = a_inv * n
                if self.rs.in_parabolic(c, self.c_nodes):
                    return (a, c)
        else:
            group = self.a_group()
            for c, c_inv in zip(self.wc_elements(), self.wc_inverses()):
                a = n * c_inv
                if a.key() in group:
                    return (a, c)
        raise InternalConsistency(
            f"{self.monoid.graph.name}: orbit {self.orbit.orbit_id}: stabilizer "
            "element admits no A_X * W(C) factorization"
        )

    # -- transport action --------------------------------------------------

    def act(self, w: WElement, pos: int) -> tuple[int, WElement]:
        """Image position and W(C) decoration of w acting on the B-th basis
        vector: ``w . xi_B = xi_{wB} c``."""
        target = w.act_set(self.orbit.members[pos])
        pos2 = self.orbit.member_pos[target]
        n = self.u_inv(pos2) * w * self.u_elem(pos)
        _, c = self.project(n)
        return pos2, c

    def step_r(self, node: int, pos: int) -> tuple[int, WElement]:
        key = ("r", node, pos)
        hit = self._step_cache.get(key)
        if hit is None:
            hit = self.act(self.rs.simple_reflection(node), pos)
            self._step_cache[key] = hit
        return hit  # type: ignore[return-value]

    def step_e(self, node: int, pos: int):
        """Action of e_<node> on the B-th basis vector: the string "delta"
        (fixes the vector, adds a loop), None (zero), or (pos2, c)."""
        key = ("e", node, pos)
        hit = self._step_cache.get(key)
        if hit is None:
            rs = self.rs
            alpha = rs.simple_index[node - 1]
            b = self.orbit.members[pos]
            if alpha in b:
                hit = "delta"
            else:
                moved = [x for x in b if rs.gram[alpha, x] != 0]
                if not moved:
                    hit = None
                else:
                    w = rs.reflection(moved[0]) * rs.simple_reflection(node)
                    hit = self.act(w, pos)
            self._step_cache[key] = hit
        return hit

    def rho_token(self, token: Token, vec: DecoratedVector) -> DecoratedVector:
        if vec is None:
            return None
        pos, z, k = vec
        kind, arg = token
        if kind == "d":
            return (pos, z, k + arg)
        if kind == "r":
            pos2, c = self.step_r(arg, pos)
            return (pos2, c * z, k)
        if kind == "e":
            hit = self.step_e(arg, pos)
            if hit is None:
                return None
            if hit == "delta":
                return (pos, z, k + 1)
            pos2, c = hit
            return (pos2, c * z, k)
        raise ValueError(f"unknown token {token!r}")

    def rho_element(self, w: WElement, vec: DecoratedVector) -> DecoratedVector:
        if vec is None:
            return None
        pos, z, k = vec
        pos2, c = self.act(w, pos)
        return (pos2, c * z, k)


class BrauerMonoid:
    """Handle tying a graph, its root system, the orbit catalog and the
    per-orbit engines together; the public face of normalization."""

    def __init__(
        self,
        graph: CoxeterGraph | str,
        catalog: OrbitCatalog | None = None,
        closure_bound: int = DEFAULT_CLOSURE_BOUND,
    ):
        if isinstance(graph, str):
            graph = CoxeterGraph.from_spec(graph)
        self.graph = graph
        self.rs = root_system(graph.name)
        self.catalog = catalog if catalog is not None else enumerate_catalog(self.rs, closure_bound)
        self.closure_bound = closure_bound
        self._engines: dict[int, OrbitEngine] = {}
        self._e_words: dict[int, tuple[Token, ...]] = {}

    def engine(self, orbit_id: int) -> OrbitEngine:
        eng = self._engines.get(orbit_id)
        if eng is None:
            eng = OrbitEngine(self, self.catalog.orbits[orbit_id])
            self._engines[orbit_id] = eng
        return eng

    # -- normalization ----------------------------------------------------

    def normalize(self, word: Sequence[Token] | str) -> NormalForm:
        """Rewrite an arbitrary generator word to its normal form."""
        if isinstance(word, str):
            word = parse_word(word)
        word = tuple(word)
        check_word(self.graph, word)
        rs = self.rs
        left = sigma_word(rs, word, ())
        right = sigma_word(rs, tuple(reversed(word)), ())
        oid, left_pos = self.catalog.locate(left)
        oid2, right_pos = self.catalog.locate(right)
        if oid != oid2:
            raise InternalConsistency(
                f"L and R of {format_word(word)!r} fall in different orbits"
            )
        eng = self.engine(oid)
        base_pos = eng.orbit.base_pos
        vec: DecoratedVector = (base_pos, rs.identity(), 0)
        vec = eng.rho_element(eng.u_elem(right_pos), vec)
        for token in reversed(word):
            vec = eng.rho_token(token, vec)
            if vec is None:
                raise InternalConsistency(
                    f"rho evaluation of {format_word(word)!r} hit zero"
                )
        vec = eng.rho_element(eng.u_inv(left_pos), vec)
        assert vec is not None
        pos, z, s = vec
        if pos != base_pos:
            raise InternalConsistency(
                f"rho evaluation of {format_word(word)!r} missed the base vector"
            )
        return NormalForm(self, oid, left_pos, right_pos, z, s - eng.orbit.size_x)

    def identity_nf(self) -> NormalForm:
        return self.normalize(())

    # -- canonical words ----------------------------------------------------

    def e_root_word(self, root_index: int) -> tuple[Token, ...]:
        """Generator word for e_beta = w e_j w^{-1} with w alpha_j = beta."""
        hit = self._e_words.get(root_index)
        if hit is None:
            wword, node = self.rs.simple_root_word(root_index)
            hit = (
                tuple(("r", i) for i in wword)
                + (("e", node),)
                + tuple(("r", i) for i in reversed(wword))
            )
            self._e_words[root_index] = hit
        return hit

    def canonical_word(self, nf: NormalForm) -> tuple[Token, ...]:
        """A defining word for the normal form:
        u-word, e_beta factors over X, z-word, v-word, delta tokens."""
        orbit = nf.orbit
        out: list[Token] = [("r", i) for i in orbit.u_words[nf.left]]
        for beta in orbit.base:
            out.extend(self.e_root_word(beta))
        out.extend(("r", i) for i in nf.z_word())
        out.extend(("r", i) for i in reversed(orbit.u_words[nf.right]))
        out.extend([("d", 1 if nf.k > 0 else -1)] * abs(nf.k))
        return tuple(out)

    # -- monoid operations ------------------------------------------------

    def multiply(self, x: NormalForm, y: NormalForm) -> NormalForm:
        return self.normalize(self.canonical_word(x) + self.canonical_word(y))

    def opposite(self, x: NormalForm) -> NormalForm:
        return self.normalize(tuple(reversed(self.canonical_word(x))))

    def equal(self, a: Sequence[Token] | str, b: Sequence[Token] | str) -> bool:
        return self.normalize(a) == self.normalize(b)

    # -- distinguished elements ---------------------------------------------

    def e_beta_nf(self, root_index: int) -> NormalForm:
        return self.normalize(self.e_root_word(root_index))

    def e_set_nf(self, roots: Sequence[int]) -> NormalForm:
        """Normal form of e_X = prod e_beta over a set of mutually orthogonal
        positive roots (factor order is immaterial)."""
        roots = tuple(sorted(roots))
        for a in roots:
            for b in roots:
                if a < b and self.rs.gram[a, b] != 0:
                    raise NotOrthogonal(
                        f"{self.rs.root_name(a)} and {self.rs.root_name(b)} are not orthogonal"
                    )
        word: list[Token] = []
        for beta in roots:
            word.extend(self.e_root_word(beta))
        return self.normalize(word)


# -- spec-level operation wrappers ------------------------------------------


def enumerate_ax(
    rs: RootSystem, roots: Sequence[int], max_size: int = DEFAULT_CLOSURE_BOUND
) -> list[WElement]:
    """Closure of the annihilator generating set for a set of mutually
    orthogonal positive roots."""
    return list(group_closure(rs, ax_generators(rs, tuple(roots)), max_size).values())


def project_to_wc(monoid: BrauerMonoid, orbit_id: int, n: WElement) -> tuple[WElement, WElement]:
    """Factor n = a * c over the orbit's base element split."""
    eng = monoid.engine(orbit_id)
    if n.act_set(eng.orbit.base) != eng.orbit.base:
        raise StructureError("element does not stabilize the base element")
    return eng.project(n)


def h_transport(monoid: BrauerMonoid, orbit_id: int, pos: int, node: int) -> WElement:
    """The W(C)-valued factor in ``r_i xi_B = xi_{r_i B} h``; identity by
    convention when alpha_i is not orthogonal to B."""
    eng = monoid.engine(orbit_id)
    rs = monoid.rs
    alpha = rs.simple_index[node - 1]
    b = eng.orbit.members[pos]
    if any(rs.gram[alpha, x] != 0 for x in b):
        return rs.identity()
    _, c = eng.step_r(node, pos)
    return c
