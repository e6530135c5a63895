"""Small-graph kernel: representation, isomorphism, canonical labeling,
independence number, induced-subgraph and clique counting.

Graphs live on at most 10 vertices and are immutable values; adjacency is a
tuple of bitmask rows.  Canonical labeling is exhaustive (with twin and
prefix pruning) rather than delegated to an external library, so codes are
bit-reproducible.  The canonical code orders the upper triangle column by
column, matching graph6 bit order, and two graphs are isomorphic iff their
codes (at equal n) coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

MAX_VERTICES = 10


class GraphError(ValueError):
    """Invalid graph construction or operation."""


@dataclass(frozen=True)
class SmallGraph:
    """Undirected graph on 1..10 vertices with bitmask adjacency rows."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency row count does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError("adjacency row references vertex out of range")
            if (row >> v) & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in range(self.n):
                if ((row >> u) & 1) != ((self.adj[u] >> v) & 1):
                    raise GraphError("adjacency is not symmetric")

    # -- basic accessors ---------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if self.has_edge(u, v)]

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def adj_array(self) -> np.ndarray:
        return np.array(self.adj, dtype=np.int64)

    def induced(self, vertices: Sequence[int]) -> "SmallGraph":
        """Subgraph induced by the given vertices, renumbered in list order."""
        vs = list(vertices)
        rows = []
        for a in vs:
            row = 0
            for j, b in enumerate(vs):
                if a != b and self.has_edge(a, b):
                    row |= 1 << j
            rows.append(row)
        return SmallGraph(len(vs), tuple(rows))

    def relabel(self, order: Sequence[int]) -> "SmallGraph":
        """Graph with vertex ``order[i]`` moved to position i."""
        return self.induced(order)


@dataclass(frozen=True)
class CanonicalForm:
    """Minimal upper-triangle code with one witnessing relabeling.

    ``perm[i]`` is the original vertex placed at canonical position i;
    relabeling by ``perm`` yields exactly the coded adjacency.
    """

    n: int
    code: int
    perm: tuple[int, ...]

    @property
    def graph6(self) -> str:
        return _code_to_graph6(self.n, self.code)


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> SmallGraph:
    """Build a graph from an edge list; duplicate edges collapse."""
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(f"vertex count {n} outside 1..{MAX_VERTICES}")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"loop edge at {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return SmallGraph(n, tuple(rows))


def complete_graph(n: int) -> SmallGraph:
    full = (1 << n) - 1
    return SmallGraph(n, tuple(full & ~(1 << v) for v in range(n)))


def empty_graph(n: int) -> SmallGraph:
    return SmallGraph(n, (0,) * n)


def cycle_graph(n: int) -> SmallGraph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def complement(g: SmallGraph) -> SmallGraph:
    full = (1 << g.n) - 1
    return SmallGraph(g.n, tuple((full & ~row) & ~(1 << v)
                                 for v, row in enumerate(g.adj)))


def independence_number(g: SmallGraph) -> int:
    return int(_kernels.independence_number_small(g.adj_array(), g.n))


def is_admissible(g: SmallGraph, l: int) -> bool:
    """True iff the graph has no independent set of size l."""
    if l < 2:
        raise GraphError("forbidden independent-set size must be at least 2")
    return independence_number(g) < l


def canonical_form(g: SmallGraph) -> CanonicalForm:
    code, order = _kernels.canonical_search(
        g.adj_array(), g.n, np.empty(0, dtype=np.int64))
    return CanonicalForm(g.n, int(code), tuple(int(v) for v in order))


def canonical_graph(g: SmallGraph) -> SmallGraph:
    """The canonical representative of g's isomorphism class."""
    return g.relabel(canonical_form(g).perm)


def are_isomorphic(g: SmallGraph, h: SmallGraph) -> bool:
    if g.n != h.n:
        return False
    return canonical_form(g).code == canonical_form(h).code


def count_induced(h: SmallGraph, g: SmallGraph) -> int:
    """Number of |H|-subsets of V(G) inducing a copy of H."""
    if h.n > g.n:
        raise GraphError("pattern larger than host")
    hcode = canonical_form(h).code
    return int(_kernels.count_induced_small(g.adj_array(), g.n, hcode, h.n))


def induced_density(h: SmallGraph, g: SmallGraph) -> Fraction:
    """p(H; G): probability a random |H|-subset of G induces H."""
    return Fraction(count_induced(h, g), comb(g.n, h.n))


def count_cliques(g: SmallGraph, k: int) -> int:
    if k < 1:
        raise GraphError("clique size must be at least 1")
    return int(_kernels.count_cliques_small(g.adj_array(), g.n, k))


def automorphisms(g: SmallGraph) -> list[tuple[int, ...]]:
    """All adjacency-preserving permutations (vertex -> image)."""
    n = g.n
    out: list[tuple[int, ...]] = []
    img = [0] * n

    def extend(i: int, used: int):
        if i == n:
            out.append(tuple(img))
            return
        for v in range(n):
            if (used >> v) & 1:
                continue
            ok = True
            for j in range(i):
                if g.has_edge(j, i) != g.has_edge(img[j], v):
                    ok = False
                    break
            if ok:
                img[i] = v
                extend(i + 1, used | (1 << v))

    extend(0, 0)
    return out


# -- graph6 ----------------------------------------------------------------
#
# Standard 6-bit encoding: one size byte chr(63+n) for n <= 62, then the
# upper triangle column by column, packed big-endian into 6-bit groups,
# zero-padded, each group offset by 63.


def _code_to_graph6(n: int, code: int) -> str:
    nbits = n * (n - 1) // 2
    bits = [(code >> (nbits - 1 - i)) & 1 for i in range(nbits)]
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(63 + n)]
    for i in range(0, len(bits), 6):
        v = 0
        for b in bits[i:i + 6]:
            v = (v << 1) | b
        chars.append(chr(63 + v))
    return "".join(chars)


def upper_triangle_code(g: SmallGraph) -> int:
    """Column-stacked upper-triangle bits of g as-labeled (not canonical)."""
    code = 0
    for v in range(g.n):
        for u in range(v):
            code = (code << 1) | ((g.adj[u] >> v) & 1)
    return code


def to_graph6(g: SmallGraph) -> str:
    return _code_to_graph6(g.n, upper_triangle_code(g))


def from_graph6(s: str) -> SmallGraph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise GraphError("empty graph6 string")
    n = ord(s[0]) - 63
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(f"graph6 size {n} outside 1..{MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(s) - 1 != need:
        raise GraphError("graph6 payload has wrong length")
    bits = []
    for ch in s[1:]:
        v = ord(ch) - 63
        if not 0 <= v < 64:
            raise GraphError(f"invalid graph6 character {ch!r}")
        for i in range(5, -1, -1):
            bits.append((v >> i) & 1)
    rows = [0] * n
    idx = 0
    for v in range(n):
        for u in range(v):
            if bits[idx]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            idx += 1
    if any(bits[idx:]):
        raise GraphError("nonzero padding bits in graph6 string")
    return SmallGraph(n, tuple(rows))


def canonical_graph6(g: SmallGraph) -> str:
    """graph6 string of the canonical representative; the isomorphism key."""
    return canonical_form(g).graph6


def from_fixture_entry(entry: dict) -> SmallGraph:
    """Build a graph from a JSON fixture entry with 1-indexed edge lists."""
    n = entry["n"]
    edges = [(u - 1, v - 1) for u, v in entry["edges"]]
    return from_edge_list(n, edges)
