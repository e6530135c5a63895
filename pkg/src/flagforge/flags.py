"""Types, labeled flags, and isomorph-free enumeration.

A type is a fully labeled admissible graph on [k]; distinct labelings are
distinct types.  A flag is an admissible graph with an ordered tuple of
labeled vertices inducing its type; flag isomorphisms must fix labels, so
the canonical form of a flag pins the labeled vertices in label order and
minimizes only over orderings of the unlabeled tail.

Enumeration proceeds by orderly augmentation: grow one vertex at a time
through every adjacency mask, keep admissible graphs, and deduplicate by
canonical code.  Families are sorted by code, so member order is stable
across runs and insertion orders.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels, graphs
from .graphs import GraphError, SmallGraph


class FlagTypeError(ValueError):
    """Flag/type mismatch or invalid labeled structure."""


@dataclass(frozen=True)
class TypeGraph:
    """A fully labeled admissible graph on [k]; vertex i carries label i+1."""

    sigma: SmallGraph | None  # None encodes the trivial (size-0) type
    l: int

    def __post_init__(self):
        if self.l < 2:
            raise FlagTypeError("forbidden independent-set size must be >= 2")
        if self.sigma is not None and not graphs.is_admissible(self.sigma, self.l):
            raise FlagTypeError("type graph is not admissible")

    @property
    def k(self) -> int:
        return 0 if self.sigma is None else self.sigma.n

    def key(self) -> tuple:
        rows = () if self.sigma is None else self.sigma.adj
        return (self.k, rows, self.l)

    def __repr__(self):
        if self.sigma is None:
            return f"TypeGraph(trivial, l={self.l})"
        return f"TypeGraph(k={self.k}, edges={self.sigma.edges()}, l={self.l})"


def trivial_type(l: int) -> TypeGraph:
    return TypeGraph(None, l)


def dot_type(l: int) -> TypeGraph:
    return TypeGraph(graphs.empty_graph(1), l)


@dataclass(frozen=True)
class Flag:
    """An admissible graph with an ordered labeled tuple inducing the type."""

    graph: SmallGraph
    labeled: tuple[int, ...]
    type: TypeGraph

    def __post_init__(self):
        k = self.type.k
        if len(self.labeled) != k:
            raise FlagTypeError("labeled tuple length does not match type size")
        if len(set(self.labeled)) != k:
            raise FlagTypeError("labeled vertices must be distinct")
        if any(not 0 <= v < self.graph.n for v in self.labeled):
            raise FlagTypeError("labeled vertex out of range")
        if k and self.graph.induced(self.labeled).adj != self.type.sigma.adj:
            raise FlagTypeError("labeled vertices do not induce the type")
        if not graphs.is_admissible(self.graph, self.type.l):
            raise FlagTypeError("flag graph is not admissible")

    @property
    def n(self) -> int:
        return self.graph.n

    def canonical_code(self) -> tuple[int, int, int]:
        """(n, k, code) with labeled positions pinned; the flag-iso key."""
        code, _ = _kernels.canonical_search(
            self.graph.adj_array(), self.graph.n,
            np.array(self.labeled, dtype=np.int64))
        return (self.graph.n, self.type.k, int(code))

    def canonical(self) -> "Flag":
        """Representative with labels at positions 0..k-1 and minimal code."""
        _, order = _kernels.canonical_search(
            self.graph.adj_array(), self.graph.n,
            np.array(self.labeled, dtype=np.int64))
        g = self.graph.relabel([int(v) for v in order])
        return Flag(g, tuple(range(self.type.k)), self.type)

    def __repr__(self):
        return (f"Flag(n={self.n}, labeled={self.labeled}, "
                f"edges={self.graph.edges()})")


def underlying(f: Flag) -> SmallGraph:
    """The flag's graph with all labels discarded."""
    return f.graph


def flag_isomorphic(f1: Flag, f2: Flag) -> bool:
    """Label-fixing isomorphism test; both flags must share one type."""
    if f1.type.key() != f2.type.key():
        raise FlagTypeError("flags have different types")
    if f1.n != f2.n:
        return False
    return f1.canonical_code() == f2.canonical_code()


@dataclass(frozen=True)
class FlagFamily:
    """All flags of one type and size, canonical and deduplicated, sorted."""

    type: TypeGraph
    size: int
    members: tuple[Flag, ...]

    def index_of(self, f: Flag) -> int:
        code = f.canonical_code()
        for i, m in enumerate(self.members):
            if m.canonical_code() == code:
                return i
        raise FlagTypeError("flag is not a member of this family")

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.type.key()).encode())
        h.update(str(self.size).encode())
        for m in self.members:
            h.update(repr(m.canonical_code()).encode())
        return h.hexdigest()[:16]

    def __len__(self):
        return len(self.members)


def enumerate_admissible(n: int, l: int, rng: Optional[random.Random] = None
                         ) -> list[SmallGraph]:
    """Canonical representatives of admissible graphs of size n, sorted.

    ``rng`` shuffles the augmentation exploration order; it exists so tests
    can confirm the output does not depend on it.
    """
    if not 1 <= n <= graphs.MAX_VERTICES:
        raise GraphError(f"size {n} outside 1..{graphs.MAX_VERTICES}")
    if l < 2:
        raise GraphError("forbidden independent-set size must be >= 2")
    level = {graphs.canonical_graph6(graphs.empty_graph(1)):
             graphs.empty_graph(1)}
    for m in range(2, n + 1):
        nxt: dict[str, SmallGraph] = {}
        parents = list(level.values())
        if rng is not None:
            rng.shuffle(parents)
        for g in parents:
            masks = list(range(1 << g.n))
            if rng is not None:
                rng.shuffle(masks)
            for mask in masks:
                rows = [row | (((mask >> v) & 1) << g.n)
                        for v, row in enumerate(g.adj)]
                rows.append(mask)
                cand = SmallGraph(m, tuple(rows))
                if not graphs.is_admissible(cand, l):
                    continue
                key = graphs.canonical_graph6(cand)
                if key not in nxt:
                    nxt[key] = graphs.canonical_graph(cand)
        level = nxt
    return [level[key] for key in sorted(level)]


def enumerate_types(k: int, l: int) -> list[TypeGraph]:
    """All labeled admissible graphs on [k]; distinct labelings distinct."""
    if k < 0:
        raise GraphError("type size must be nonnegative")
    if k == 0:
        return [trivial_type(l)]
    out = []
    npairs = k * (k - 1) // 2
    pairs = [(u, v) for v in range(k) for u in range(v)]
    for bits in range(1 << npairs):
        edges = [pairs[i] for i in range(npairs) if (bits >> i) & 1]
        g = graphs.from_edge_list(k, edges)
        if graphs.is_admissible(g, l):
            out.append(TypeGraph(g, l))
    return out


def enumerate_flags(type_: TypeGraph, size: int,
                    rng: Optional[random.Random] = None) -> FlagFamily:
    """Isomorph-free exhaustive family of flags of the given type and size."""
    k = type_.k
    if size < k:
        raise FlagTypeError("flag size smaller than type size")
    if size > graphs.MAX_VERTICES:
        raise GraphError(f"size {size} outside kernel bound")
    if k == 0:
        members = [Flag(g, (), type_) for g in enumerate_admissible(size, type_.l, rng)]
        return FlagFamily(type_, size, tuple(members))
    base = Flag(type_.sigma, tuple(range(k)), type_)
    level = {base.canonical_code(): base}
    for m in range(k + 1, size + 1):
        nxt: dict[tuple, Flag] = {}
        parents = list(level.values())
        if rng is not None:
            rng.shuffle(parents)
        for f in parents:
            g = f.graph
            masks = list(range(1 << g.n))
            if rng is not None:
                rng.shuffle(masks)
            for mask in masks:
                rows = [row | (((mask >> v) & 1) << g.n)
                        for v, row in enumerate(g.adj)]
                rows.append(mask)
                cand_graph = SmallGraph(m, tuple(rows))
                if not graphs.is_admissible(cand_graph, type_.l):
                    continue
                cand = Flag(cand_graph, f.labeled, type_)
                key = cand.canonical_code()
                if key not in nxt:
                    nxt[key] = cand.canonical()
        level = nxt
    members = [level[key] for key in sorted(level)]
    return FlagFamily(type_, size, tuple(members))


def flag_from_fixture(entry: dict, l: int,
                      type_: Optional[TypeGraph] = None) -> Flag:
    """Build a flag from a fixture entry {name, n, labeled, edges} (1-based).

    ``labeled`` lists the labeled vertices in label order.  When ``type_``
    is omitted it is inferred from the induced labeled subgraph.
    """
    g = graphs.from_fixture_entry(entry)
    labeled = tuple(v - 1 for v in entry.get("labeled", []))
    if type_ is None:
        sigma = g.induced(labeled) if labeled else None
        type_ = TypeGraph(sigma, l) if labeled else trivial_type(l)
    return Flag(g, labeled, type_)
