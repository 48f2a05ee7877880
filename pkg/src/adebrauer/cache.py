"""Catalog caching so large orbit enumerations run once per machine.

Cache files are versioned JSON, one per graph, holding the orbit members,
base positions, orthogonal node sets and coset words; everything else is
recomputed on load.  The default location is ``$ADEBRAUER_CACHE`` or
``~/.cache/adebrauer``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .admissible import Orbit, OrbitCatalog
from .coxeter import CoxeterGraph, root_system
from .normalform import BrauerMonoid

CACHE_FORMAT = 1


def default_cache_dir() -> Path:
    env = os.environ.get("ADEBRAUER_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "adebrauer"


def cache_path(cache_dir: Path, graph: CoxeterGraph) -> Path:
    return cache_dir / f"catalog-{graph.name}-v{CACHE_FORMAT}.json"


def save_catalog(catalog: OrbitCatalog, cache_dir: Path | None = None) -> Path:
    cache_dir = cache_dir or default_cache_dir()
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_path(cache_dir, catalog.graph)
    payload = {
        "format": CACHE_FORMAT,
        "graph": catalog.graph.name,
        "positive_roots": root_system(catalog.graph.name).num_positive,
        "orbits": [
            {
                "size_x": o.size_x,
                "members": [list(m) for m in o.members],
                "base_pos": o.base_pos,
                "c_nodes": list(o.c_nodes),
                "u_words": [list(w) for w in o.u_words],
            }
            for o in catalog.orbits
        ],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)
    return path


def load_catalog(graph: CoxeterGraph, cache_dir: Path | None = None) -> OrbitCatalog | None:
    cache_dir = cache_dir or default_cache_dir()
    path = cache_path(cache_dir, graph)
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if payload.get("format") != CACHE_FORMAT or payload.get("graph") != graph.name:
        return None
    if payload.get("positive_roots") != root_system(graph.name).num_positive:
        return None
    orbits: list[Orbit] = []
    lookup: dict[tuple[int, ...], tuple[int, int]] = {}
    for oid, row in enumerate(payload["orbits"]):
        members = [tuple(m) for m in row["members"]]
        c_nodes = tuple(row["c_nodes"])
        orbit = Orbit(
            orbit_id=oid,
            size_x=row["size_x"],
            members=members,
            base_pos=row["base_pos"],
            c_nodes=c_nodes,
            c_type=graph.component_types(c_nodes),
            u_words=[tuple(w) for w in row["u_words"]],
            member_pos={m: i for i, m in enumerate(members)},
        )
        orbits.append(orbit)
        for pos, m in enumerate(members):
            lookup[m] = (oid, pos)
    return OrbitCatalog(graph=graph, orbits=orbits, lookup=lookup)


def load_or_build(
    spec: str, cache_dir: Path | None = None, use_cache: bool = True
) -> BrauerMonoid:
    """Monoid for a graph spec, with the catalog loaded from cache when
    available and written back after a fresh build."""
    graph = CoxeterGraph.from_spec(spec)
    catalog = load_catalog(graph, cache_dir) if use_cache else None
    monoid = BrauerMonoid(graph, catalog=catalog)
    if use_cache and catalog is None:
        try:
            save_catalog(monoid.catalog, cache_dir)
        except OSError:
            pass
    return monoid
