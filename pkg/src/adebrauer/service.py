"""FastAPI service exposing the engine, plus the handler layer the CLI
shares.  Monoids are built once per graph and kept warm in the registry, so
a long-running server amortizes catalog construction across requests.
"""

from __future__ import annotations

import math
import random
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .admissible import RootSet, random_mut_orth_set, admissible_closure, sigma_word
from .cache import load_or_build
from .coxeter import format_cartan_type
from .diagrams import nf_to_diagram, render_diagram, word_to_diagram
from .dimension import brute_force_dim, closed_form, orbit_sum
from .errors import (
    ClosureBound,
    DimensionGuard,
    InternalConsistency,
    InvalidGraph,
    NotOrthogonal,
    StructureError,
)
from .normalform import BrauerMonoid, NormalForm, format_word, parse_word
from .repmatrices import (
    DEFAULT_MAX_DIM,
    OrbitRepresentation,
    block_report,
    verify_relations,
)
from .subgroups import ax_generators, group_closure

import numpy as np


class MonoidRegistry:
    """Graph spec -> warm monoid, with optional catalog caching on disk."""

    def __init__(self, cache_dir: Path | None = None, use_cache: bool = True):
        self.cache_dir = cache_dir
        self.use_cache = use_cache
        self._monoids: dict[str, BrauerMonoid] = {}

    def get(self, spec: str) -> BrauerMonoid:
        name = spec.strip().upper().replace("_", "")
        monoid = self._monoids.get(name)
        if monoid is None:
            monoid = load_or_build(name, self.cache_dir, self.use_cache)
            self._monoids[monoid.graph.name] = monoid
        return monoid


# -- models -------------------------------------------------------------------


class WordRequest(BaseModel):
    graph: str = Field(examples=["A3"])
    word: str = Field(examples=["e1 r2 e1 d"])


class PairRequest(BaseModel):
    graph: str
    left: str
    right: str


class NormalFormModel(BaseModel):
    graph: str
    orbit: int
    size_x: int
    left_roots: list[str]
    right_roots: list[str]
    u_word: list[int]
    v_word: list[int]
    z_word: list[int]
    k: int
    canonical_word: str


class EqualityModel(BaseModel):
    graph: str
    equal: bool
    left: NormalFormModel
    right: NormalFormModel


class OrbitRowModel(BaseModel):
    orbit: int
    size_x: int
    orbit_size: int
    base_roots: list[str]
    c_nodes: list[int]
    c_type: str
    wc_order: int
    contribution: int


class CatalogModel(BaseModel):
    graph: str
    group_order: int
    admissible_sets: int
    orbits: list[OrbitRowModel]


class DimRowModel(BaseModel):
    orbit: int
    size_x: int
    orbit_size: int
    c_type: str
    wc_order: int
    contribution: int


class DimModel(BaseModel):
    graph: str
    closed_form: int
    orbit_sum: int
    match: bool
    rows: list[DimRowModel]


class ViolationModel(BaseModel):
    orbit: int
    label: str
    binding: dict[str, int]
    column: int


class RelationReportModel(BaseModel):
    graph: str
    orbits_checked: list[int]
    instances: int
    normal_form_checked: bool
    matrix_checked_orbits: list[int]
    skipped_orbits: list[int]
    violations: list[ViolationModel]
    ok: bool


class DiagramModel(BaseModel):
    graph: str
    strands: int
    top: list[tuple[int, int]]
    bottom: list[tuple[int, int]]
    through: list[tuple[int, int]]
    loops: int
    text: str


class RepExportModel(BaseModel):
    graph: str
    orbit: int
    dimension: int
    entries: list[tuple[int, int, int]]
    text: str


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class SelftestModel(BaseModel):
    graph: str
    checks: list[CheckModel]
    ok: bool


class BlockRowModel(BaseModel):
    orbit: int
    size_x: int
    orbit_size: int
    c_type: str
    wc_order: int
    contribution: int
    block_sizes: list[int] | None
    note: str


class BlockModel(BaseModel):
    graph: str
    total: int
    closed_form: int
    match: bool
    rows: list[BlockRowModel]


# -- handlers -----------------------------------------------------------------


def nf_model(monoid: BrauerMonoid, nf: NormalForm) -> NormalFormModel:
    rs = monoid.rs
    orbit = nf.orbit
    return NormalFormModel(
        graph=monoid.graph.name,
        orbit=nf.orbit_id,
        size_x=orbit.size_x,
        left_roots=[rs.root_name(i) for i in nf.left_set],
        right_roots=[rs.root_name(i) for i in nf.right_set],
        u_word=list(orbit.u_words[nf.left]),
        v_word=list(reversed(orbit.u_words[nf.right])),
        z_word=list(nf.z_word()),
        k=nf.k,
        canonical_word=format_word(monoid.canonical_word(nf)),
    )


def handle_normalize(registry: MonoidRegistry, req: WordRequest) -> NormalFormModel:
    monoid = registry.get(req.graph)
    return nf_model(monoid, monoid.normalize(req.word))


def handle_mul(registry: MonoidRegistry, req: PairRequest) -> NormalFormModel:
    monoid = registry.get(req.graph)
    product = monoid.multiply(monoid.normalize(req.left), monoid.normalize(req.right))
    return nf_model(monoid, product)


def handle_opposite(registry: MonoidRegistry, req: WordRequest) -> NormalFormModel:
    monoid = registry.get(req.graph)
    return nf_model(monoid, monoid.opposite(monoid.normalize(req.word)))


def handle_eq(registry: MonoidRegistry, req: PairRequest) -> EqualityModel:
    monoid = registry.get(req.graph)
    a = monoid.normalize(req.left)
    b = monoid.normalize(req.right)
    return EqualityModel(
        graph=monoid.graph.name,
        equal=a == b,
        left=nf_model(monoid, a),
        right=nf_model(monoid, b),
    )


def handle_orbits(registry: MonoidRegistry, spec: str) -> CatalogModel:
    monoid = registry.get(spec)
    graph = monoid.graph
    rows = []
    total_sets = 0
    for orbit in monoid.catalog.orbits:
        total_sets += orbit.size
        wc = orbit.wc_order(graph)
        rows.append(
            OrbitRowModel(
                orbit=orbit.orbit_id,
                size_x=orbit.size_x,
                orbit_size=orbit.size,
                base_roots=[monoid.rs.root_name(i) for i in orbit.base],
                c_nodes=list(orbit.c_nodes),
                c_type=format_cartan_type(orbit.c_type),
                wc_order=wc,
                contribution=orbit.size * orbit.size * wc,
            )
        )
    return CatalogModel(
        graph=graph.name,
        group_order=graph.group_order(),
        admissible_sets=total_sets,
        orbits=rows,
    )


def handle_dims(registry: MonoidRegistry, spec: str) -> DimModel:
    monoid = registry.get(spec)
    report = orbit_sum(monoid.catalog)
    return DimModel(
        graph=report.graph,
        closed_form=report.closed_form,
        orbit_sum=report.orbit_sum,
        match=report.match,
        rows=[
            DimRowModel(
                orbit=c.orbit_id,
                size_x=c.size_x,
                orbit_size=c.orbit_size,
                c_type=c.c_type,
                wc_order=c.wc_order,
                contribution=c.contribution,
            )
            for c in report.contributions
        ],
    )


def handle_blocks(registry: MonoidRegistry, spec: str) -> BlockModel:
    monoid = registry.get(spec)
    report = block_report(monoid.catalog)
    return BlockModel(
        graph=report.graph,
        total=report.total,
        closed_form=report.closed_form,
        match=report.match,
        rows=[
            BlockRowModel(
                orbit=r.orbit_id,
                size_x=r.size_x,
                orbit_size=r.orbit_size,
                c_type=r.c_type,
                wc_order=r.wc_order,
                contribution=r.contribution,
                block_sizes=list(r.irreducible_dims) if r.irreducible_dims else None,
                note=r.dims_note,
            )
            for r in report.rows
        ],
    )


def handle_verify_relations(
    registry: MonoidRegistry, spec: str, max_dim: int = DEFAULT_MAX_DIM
) -> RelationReportModel:
    """Relation suite, both as normal-form equalities and as matrix
    equalities per orbit; orbits whose module exceeds max_dim are listed as
    skipped."""
    from .relations import relation_instances

    monoid = registry.get(spec)
    violations: list[ViolationModel] = []
    instances = 0
    for rel, binding, lhs, rhs in relation_instances(monoid.graph):
        instances += 1
        if monoid.normalize(lhs) != monoid.normalize(rhs):
            violations.append(
                ViolationModel(orbit=-1, label=rel.label, binding=binding, column=-1)
            )
    checkable = []
    skipped = []
    for orbit in monoid.catalog.orbits:
        if orbit.size * orbit.wc_order(monoid.graph) <= max_dim:
            checkable.append(orbit.orbit_id)
        else:
            skipped.append(orbit.orbit_id)
    report = verify_relations(monoid, checkable, max_dim=max_dim)
    violations.extend(
        ViolationModel(orbit=v.orbit_id, label=v.label, binding=v.binding, column=v.column)
        for v in report.violations
    )
    return RelationReportModel(
        graph=monoid.graph.name,
        orbits_checked=[o.orbit_id for o in monoid.catalog.orbits],
        instances=instances,
        normal_form_checked=True,
        matrix_checked_orbits=checkable,
        skipped_orbits=skipped,
        violations=violations,
        ok=not violations,
    )


def handle_diagram(registry: MonoidRegistry, req: WordRequest) -> DiagramModel:
    monoid = registry.get(req.graph)
    nf = monoid.normalize(req.word)
    diagram = nf_to_diagram(monoid, nf)
    oracle = word_to_diagram(monoid.graph.rank + 1, parse_word(req.word))
    if oracle != diagram:  # pragma: no cover - oracle equivalence is tested
        raise InternalConsistency("normal-form diagram disagrees with the word oracle")
    return DiagramModel(
        graph=monoid.graph.name,
        strands=diagram.strands,
        top=list(diagram.top),
        bottom=list(diagram.bottom),
        through=list(diagram.through),
        loops=diagram.loops,
        text=render_diagram(diagram),
    )


def handle_rep_export(
    registry: MonoidRegistry, req: WordRequest, orbit: int, max_dim: int = DEFAULT_MAX_DIM
) -> RepExportModel:
    monoid = registry.get(req.graph)
    rep = OrbitRepresentation(monoid, orbit, max_dim)
    matrix = rep.matrix_of_word(parse_word(req.word))
    entries = list(matrix.triplets())
    text = "\n".join(f"{r} {c} {e}" for r, c, e in entries)
    return RepExportModel(
        graph=monoid.graph.name,
        orbit=orbit,
        dimension=matrix.dim,
        entries=entries,
        text=text,
    )


def handle_selftest(
    registry: MonoidRegistry,
    spec: str,
    samples: int = 25,
    seed: int = 0,
    max_dim: int = DEFAULT_MAX_DIM,
) -> SelftestModel:
    """Invariant suites for one graph: relations (normal forms and
    matrices), dimension agreement, the stabilizer split per orbit, the
    closure-idempotent law, and sigma monotonicity."""
    monoid = registry.get(spec)
    graph = monoid.graph
    rs = monoid.rs
    checks: list[CheckModel] = []

    rel = handle_verify_relations(registry, spec, max_dim)
    checks.append(
        CheckModel(
            name="relations",
            passed=rel.ok,
            detail=f"{rel.instances} instances on {len(rel.orbits_checked)} orbits"
            + (f", {len(rel.skipped_orbits)} matrix-skipped" if rel.skipped_orbits else ""),
        )
    )

    dims = orbit_sum(monoid.catalog)
    checks.append(
        CheckModel(
            name="dimension",
            passed=dims.match,
            detail=f"closed {dims.closed_form} vs orbit sum {dims.orbit_sum}",
        )
    )

    split_ok = True
    split_notes = []
    for orbit in monoid.catalog.orbits:
        n_order = graph.group_order() // orbit.size
        wc = orbit.wc_order(graph)
        if n_order // max(wc, 1) > monoid.closure_bound:
            split_notes.append(f"orbit {orbit.orbit_id} skipped (|A| out of bound)")
            continue
        try:
            a_group = group_closure(
                rs, ax_generators(rs, orbit.base), monoid.closure_bound
            )
        except ClosureBound:
            split_notes.append(f"orbit {orbit.orbit_id} skipped (closure bound)")
            continue
        if len(a_group) * wc != n_order:
            split_ok = False
            split_notes.append(f"orbit {orbit.orbit_id}: |A||W(C)| != |N|")
            continue
        for a in a_group.values():
            if not a.is_identity() and rs.in_parabolic(a, orbit.c_nodes):
                split_ok = False
                split_notes.append(f"orbit {orbit.orbit_id}: A meets W(C)")
                break
        gens = ax_generators(rs, orbit.base)
        for i in orbit.c_nodes:
            ri = rs.simple_reflection(i)
            if any((ri * g * ri).key() not in a_group for g in gens):
                split_ok = False
                split_notes.append(f"orbit {orbit.orbit_id}: A not normal under W(C)")
                break
    checks.append(
        CheckModel(
            name="stabilizer-split",
            passed=split_ok,
            detail="; ".join(split_notes) if split_notes else "all orbits",
        )
    )

    rng = np.random.default_rng(seed)
    law_ok = True
    tried = 0
    while tried < samples:
        x = random_mut_orth_set(rs, rng)
        cl = admissible_closure(rs, x)
        if cl == x:
            continue
        tried += 1
        lhs = monoid.e_set_nf(cl)
        rhs = monoid.e_set_nf(x)
        same_triple = (lhs.orbit_id, lhs.left, lhs.right, lhs.z.key()) == (
            rhs.orbit_id,
            rhs.left,
            rhs.right,
            rhs.z.key(),
        )
        if not (same_triple and lhs.k == rhs.k + (len(cl) - len(x))):
            law_ok = False
            break
    checks.append(
        CheckModel(
            name="closure-idempotents",
            passed=law_ok,
            detail=f"{tried} non-closed samples"
            if tried
            else "no non-closed sets exist at this rank",
        )
    )

    mono_ok = True
    pyrng = random.Random(seed)
    tokens = [(k, i) for k in ("r", "e") for i in graph.nodes]
    for _ in range(samples):
        x = random_mut_orth_set(rs, rng)
        x = admissible_closure(rs, x)
        size = pyrng.randint(0, len(x))
        y = tuple(sorted(pyrng.sample(x, size)))
        y = admissible_closure(rs, y)
        word = tuple(pyrng.choice(tokens) for _ in range(pyrng.randint(0, 12)))
        ax = sigma_word(rs, word, x)
        ay = sigma_word(rs, word, y)
        if not set(ay) <= set(ax):
            mono_ok = False
            break
    checks.append(
        CheckModel(name="sigma-monotone", passed=mono_ok, detail=f"{samples} samples")
    )

    return SelftestModel(graph=graph.name, checks=checks, ok=all(c.passed for c in checks))


def handle_bruteforce(registry: MonoidRegistry, spec: str, bound: int) -> dict:
    monoid = registry.get(spec)
    count = brute_force_dim(monoid, bound)
    expected = closed_form(monoid.graph)
    return {
        "graph": monoid.graph.name,
        "count": count,
        "closed_form": expected,
        "match": count == expected,
    }


# -- application ---------------------------------------------------------------


def create_app(cache_dir: Path | None = None, use_cache: bool = True) -> FastAPI:
    registry = MonoidRegistry(cache_dir, use_cache)
    app = FastAPI(
        title="adebrauer",
        version=__version__,
        description="Exact Brauer monoid engine for simply laced spherical types",
    )

    def wrap(fn, *args):
        try:
            return fn(*args)
        except (InvalidGraph, NotOrthogonal, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (ClosureBound, DimensionGuard) as exc:
            raise HTTPException(status_code=413, detail=str(exc))
        except (StructureError, InternalConsistency) as exc:  # pragma: no cover
            raise HTTPException(status_code=500, detail=str(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/normalize", response_model=NormalFormModel)
    def normalize(req: WordRequest):
        return wrap(handle_normalize, registry, req)

    @app.post("/mul", response_model=NormalFormModel)
    def mul(req: PairRequest):
        return wrap(handle_mul, registry, req)

    @app.post("/op", response_model=NormalFormModel)
    def op(req: WordRequest):
        return wrap(handle_opposite, registry, req)

    @app.post("/eq", response_model=EqualityModel)
    def eq(req: PairRequest):
        return wrap(handle_eq, registry, req)

    @app.get("/orbits/{spec}", response_model=CatalogModel)
    def orbits(spec: str):
        return wrap(handle_orbits, registry, spec)

    @app.get("/dims/{spec}", response_model=DimModel)
    def dims(spec: str):
        return wrap(handle_dims, registry, spec)

    @app.get("/blocks/{spec}", response_model=BlockModel)
    def blocks(spec: str):
        return wrap(handle_blocks, registry, spec)

    @app.post("/verify-relations/{spec}", response_model=RelationReportModel)
    def verify(spec: str):
        return wrap(handle_verify_relations, registry, spec)

    @app.post("/diagram", response_model=DiagramModel)
    def diagram(req: WordRequest):
        return wrap(handle_diagram, registry, req)

    @app.post("/rep-export/{orbit}", response_model=RepExportModel)
    def rep_export(orbit: int, req: WordRequest):
        return wrap(handle_rep_export, registry, req, orbit)

    @app.post("/selftest/{spec}", response_model=SelftestModel)
    def selftest(spec: str):
        return wrap(handle_selftest, registry, spec)

    return app


app = create_app()
