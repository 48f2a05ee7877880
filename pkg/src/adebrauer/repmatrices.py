"""Explicit monomial matrices of the orbit representations, matricial
relation verification, and the semisimple block accounting.

A matrix over Laurent monomials in delta with at most one nonzero entry per
column is stored column-wise as two integer arrays: the row index (-1 for a
zero column) and the delta exponent.  Products of generator matrices stay
monomial, so composition is a pair of gather operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterator, Sequence

import numpy as np

from .admissible import OrbitCatalog, Token
from .coxeter import format_cartan_type
from .dimension import closed_form
from .errors import DimensionGuard
from .normalform import BrauerMonoid, OrbitEngine
from .relations import ALL_RELATIONS, Relation, relation_instances

DEFAULT_MAX_DIM = 65536


@dataclass(frozen=True)
class RepMatrix:
    """Monomial matrix, column-major: column j maps basis vector j to
    delta^exp[j] times basis vector row[j], or to zero when row[j] < 0."""

    dim: int
    row: np.ndarray
    exp: np.ndarray

    @classmethod
    def identity(cls, dim: int) -> "RepMatrix":
        return cls(dim, np.arange(dim, dtype=np.int64), np.zeros(dim, dtype=np.int64))

    def compose(self, other: "RepMatrix") -> "RepMatrix":
        """self o other: apply ``other`` first (matrix product self * other)."""
        row = np.where(other.row >= 0, self.row[other.row], -1)
        exp = np.where(row >= 0, other.exp + self.exp[other.row], 0)
        return RepMatrix(self.dim, row, exp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RepMatrix):
            return NotImplemented
        if self.dim != other.dim or not np.array_equal(self.row, other.row):
            return False
        live = self.row >= 0
        return bool(np.array_equal(self.exp[live], other.exp[live]))

    def __hash__(self):  # pragma: no cover - not used as dict key
        raise TypeError("RepMatrix is unhashable")

    def is_monomial(self) -> bool:
        """At most one nonzero entry per column holds by construction; this
        checks the dual property (at most one per row)."""
        live = self.row[self.row >= 0]
        return len(np.unique(live)) == len(live)

    def triplets(self) -> Iterator[tuple[int, int, int]]:
        """(row, column, exponent) for the nonzero entries."""
        for col in range(self.dim):
            r = int(self.row[col])
            if r >= 0:
                yield (r, col, int(self.exp[col]))


class OrbitRepresentation:
    """The decorated-vector module of one orbit materialized over the basis
    (member, W(C) element), with cached generator matrices."""

    def __init__(self, monoid: BrauerMonoid, orbit_id: int, max_dim: int = DEFAULT_MAX_DIM):
        self.monoid = monoid
        self.engine: OrbitEngine = monoid.engine(orbit_id)
        orbit = self.engine.orbit
        wc = self.engine.wc_order
        self.dim = orbit.size * wc
        if self.dim > max_dim:
            raise DimensionGuard(
                f"orbit {orbit_id} module has dimension {orbit.size} * {wc} = "
                f"{self.dim} > limit {max_dim}"
            )
        self.orbit = orbit
        self.wc = self.engine.wc_elements()
        self._gen_cache: dict[Token, RepMatrix] = {}

    def basis_index(self, pos: int, w_idx: int) -> int:
        return pos * len(self.wc) + w_idx

    def basis_label(self, col: int) -> tuple[int, int]:
        return divmod(col, len(self.wc))

    def generator_matrix(self, token: Token) -> RepMatrix:
        mat = self._gen_cache.get(token)
        if mat is not None:
            return mat
        eng = self.engine
        nwc = len(self.wc)
        row = np.empty(self.dim, dtype=np.int64)
        exp = np.zeros(self.dim, dtype=np.int64)
        kind, arg = token
        for pos in range(self.orbit.size):
            base = pos * nwc
            if kind == "d":
                row[base : base + nwc] = np.arange(base, base + nwc)
                exp[base : base + nwc] = arg
                continue
            if kind == "r":
                pos2, c = eng.step_r(arg, pos)
                shift = 0
            else:
                hit = eng.step_e(arg, pos)
                if hit is None:
                    row[base : base + nwc] = -1
                    continue
                if hit == "delta":
                    pos2, c = pos, self.monoid.rs.identity()
                    shift = 1
                else:
                    pos2, c = hit
                    shift = 0
            for w_idx, w in enumerate(self.wc):
                row[base + w_idx] = self.basis_index(pos2, eng.wc_index(c * w))
                exp[base + w_idx] = shift
        mat = RepMatrix(self.dim, row, exp)
        self._gen_cache[token] = mat
        return mat

    def matrix_of_word(self, word: Sequence[Token]) -> RepMatrix:
        acc = RepMatrix.identity(self.dim)
        for token in word:
            acc = acc.compose(self.generator_matrix(token))
        return acc


def matrix_of_word(
    monoid: BrauerMonoid,
    orbit_id: int,
    word: Sequence[Token] | str,
    max_dim: int = DEFAULT_MAX_DIM,
) -> RepMatrix:
    from .normalform import parse_word

    if isinstance(word, str):
        word = parse_word(word)
    return OrbitRepresentation(monoid, orbit_id, max_dim).matrix_of_word(word)


@dataclass(frozen=True)
class RelationViolation:
    orbit_id: int
    label: str
    binding: dict
    column: int


@dataclass(frozen=True)
class RelationReport:
    graph: str
    orbit_ids: tuple[int, ...]
    instances: int
    violations: tuple[RelationViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_relations(
    monoid: BrauerMonoid,
    orbit_ids: Sequence[int] | None = None,
    relations: Sequence[Relation] = ALL_RELATIONS,
    max_dim: int = DEFAULT_MAX_DIM,
) -> RelationReport:
    """Check every relation instance as an equality of matrices in each
    orbit representation.  Violations are reported, not raised."""
    if orbit_ids is None:
        orbit_ids = tuple(o.orbit_id for o in monoid.catalog.orbits)
    instances = list(relation_instances(monoid.graph, relations))
    violations: list[RelationViolation] = []
    for oid in orbit_ids:
        rep = OrbitRepresentation(monoid, oid, max_dim)
        for rel, binding, lhs, rhs in instances:
            ml = rep.matrix_of_word(lhs)
            mr = rep.matrix_of_word(rhs)
            if ml != mr:
                bad = _first_mismatch(ml, mr)
                violations.append(RelationViolation(oid, rel.label, binding, bad))
    return RelationReport(
        graph=monoid.graph.name,
        orbit_ids=tuple(orbit_ids),
        instances=len(instances),
        violations=tuple(violations),
    )


def _first_mismatch(a: RepMatrix, b: RepMatrix) -> int:
    diff = a.row != b.row
    live = (a.row >= 0) & (b.row >= 0)
    diff |= live & (a.exp != b.exp)
    return int(np.nonzero(diff)[0][0])


# -- semisimple block structure ----------------------------------------------


def partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n in reverse-lexicographic order."""
    if n == 0:
        yield ()
        return
    def rec(remaining: int, largest: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for part in range(min(remaining, largest), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))
    yield from rec(n, n, ())


def hook_dimension(shape: tuple[int, ...]) -> int:
    """Dimension of the symmetric-group irreducible for a partition, by the
    hook length formula."""
    n = sum(shape)
    conj = [sum(1 for r in shape if r > i) for i in range(shape[0])] if shape else []
    denom = 1
    for i, row in enumerate(shape):
        for j in range(row):
            denom *= row - j + conj[j] - i - 1
    return math.factorial(n) // denom


def symmetric_group_dimensions(m: int) -> tuple[int, ...]:
    """Irreducible dimensions of Sym(m), sorted ascending."""
    return tuple(sorted(hook_dimension(p) for p in partitions(m)))


@dataclass(frozen=True)
class BlockRow:
    orbit_id: int
    size_x: int
    orbit_size: int
    c_type: str
    wc_order: int
    contribution: int
    irreducible_dims: tuple[int, ...] | None  # per-tau |orbit| * tau(1); None if non-A factor
    dims_note: str = ""


@dataclass(frozen=True)
class BlockReport:
    graph: str
    rows: tuple[BlockRow, ...]
    total: int
    closed_form: int

    @property
    def match(self) -> bool:
        return self.total == self.closed_form


def block_report(catalog: OrbitCatalog) -> BlockReport:
    """Matrix-block sizes |orbit| * tau(1) per orbit and irreducible tau of
    W(C); dimension lists are produced for type-A factors of C via hook
    lengths (with the square-sum check), other factors only contribute
    their group order."""
    graph = catalog.graph
    rows: list[BlockRow] = []
    total = 0
    for orbit in catalog.orbits:
        wc = orbit.wc_order(graph)
        contribution = orbit.size * orbit.size * wc
        total += contribution
        if all(kind == "A" for kind, _ in orbit.c_type):
            factor_dims = [symmetric_group_dimensions(m + 1) for _, m in orbit.c_type]
            taus = sorted(
                math.prod(combo) for combo in iproduct(*factor_dims)
            ) if factor_dims else [1]
            if sum(t * t for t in taus) != wc:
                raise AssertionError(
                    f"hook dimensions for orbit {orbit.orbit_id} do not square-sum to |W(C)|"
                )
            blocks = tuple(orbit.size * t for t in taus)
            note = ""
        else:
            blocks = None
            note = "dimension list omitted (non type-A factor in C)"
        rows.append(
            BlockRow(
                orbit_id=orbit.orbit_id,
                size_x=orbit.size_x,
                orbit_size=orbit.size,
                c_type=format_cartan_type(orbit.c_type),
                wc_order=wc,
                contribution=contribution,
                irreducible_dims=blocks,
                dims_note=note,
            )
        )
    return BlockReport(
        graph=graph.name,
        rows=tuple(rows),
        total=total,
        closed_form=closed_form(graph),
    )
