"""Bundled figure catalogs and certificates.

Fixture JSON files transcribe drawn edge lists with 1-indexed vertices; the
loaders here translate to the 0-indexed kernel, attach flag types, and map
named flags onto canonical flag-family indices.  Everything is cross-checked
by tests against exhaustive enumeration (pairwise non-isomorphic, admissible,
complete).
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .. import graphs
from ..flags import Flag, TypeGraph, flag_from_fixture
from ..graphs import SmallGraph


def _load(name: str) -> dict:
    ref = resources.files(__package__).joinpath("data").joinpath(name)
    return json.loads(ref.read_text())


def certificate_path(name: str):
    """Filesystem path of a bundled certificate JSON."""
    return resources.files(__package__).joinpath("data", "certificates", name)


@lru_cache(maxsize=None)
def graph_catalog(l: int) -> dict[str, SmallGraph]:
    """Named 5-vertex admissible graphs G1..Gk for forbidden size l."""
    data = _load(f"graphs_size5_l{l}.json")
    return {e["name"]: graphs.from_fixture_entry(e) for e in data["graphs"]}


@lru_cache(maxsize=None)
def named_graph(name: str) -> SmallGraph:
    data = _load("named_graphs.json")
    for e in data["graphs"]:
        if e["name"] == name:
            return graphs.from_fixture_entry(e)
    raise KeyError(name)


@lru_cache(maxsize=None)
def type_catalog(l: int) -> dict[str, TypeGraph]:
    data = _load(f"flags_l{l}.json")
    out = {}
    for name, entry in data["types"].items():
        g = graphs.from_fixture_entry(entry)
        out[name] = TypeGraph(g, l)
    return out


@lru_cache(maxsize=None)
def flag_catalog(l: int, type_name: str) -> dict[str, Flag]:
    """Named flags of one type, keyed by figure name (Z1, M1, N1, rho, ...)."""
    data = _load(f"flags_l{l}.json")
    type_ = type_catalog(l)[type_name]
    out = {}
    for entry in data["flags"][type_name]:
        out[entry["name"]] = flag_from_fixture(entry, l, type_)
    return out
