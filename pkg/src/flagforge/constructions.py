"""Extremal constructions and exact counting: blow-ups, disjoint-clique
complements of Turán graphs, closed-form minimum values, the cyclic
part-size integer optimization, and the small-n exhaustive oracle.

Blow-ups are counted, never materialized, beyond an explicit small-n
materializer (<= 64 vertices) used as an oracle.  k-cliques of a blow-up map
onto cliques S of the base: a clique either sits inside one part or spreads
over a base clique of parts, giving the generating-function count

    t_k = sum over nonempty base cliques S of [x^k] prod_{i in S} ((1+x)^{n_i} - 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, floor
from typing import Optional, Sequence

import numpy as np

from . import _kernels, graphs
from .flags import enumerate_admissible
from .graphs import SmallGraph


class ConstructionError(ValueError):
    """Invalid blow-up or optimizer input."""


@dataclass(frozen=True)
class BlowupSpec:
    """A base graph and one integer part size per base vertex.

    Zero sizes are allowed (the extremal pentagon table produces an empty
    part at n = 6); an empty part simply contributes nothing.
    """

    base: SmallGraph
    sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.sizes) != self.base.n:
            raise ConstructionError("one part size per base vertex required")
        if any(s < 0 for s in self.sizes):
            raise ConstructionError("part sizes must be nonnegative")
        if not any(self.sizes):
            raise ConstructionError("at least one part must be nonempty")

    @property
    def n(self) -> int:
        return sum(self.sizes)


def _base_cliques(base: SmallGraph) -> list[tuple[int, ...]]:
    out = []
    n = base.n
    for s in range(1, 1 << n):
        vs = [v for v in range(n) if (s >> v) & 1]
        if all(base.has_edge(u, v) for i, u in enumerate(vs)
               for v in vs[i + 1:]):
            out.append(tuple(vs))
    return out


def _compositions(total: int, parts: int):
    """Ordered positive integer compositions of total into parts."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def count_cliques_blowup(spec: BlowupSpec, k: int) -> int:
    """Exact k-clique count of the blow-up, without materializing it."""
    if k < 1:
        raise ConstructionError("clique size must be at least 1")
    total = 0
    for clique in _base_cliques(spec.base):
        if len(clique) > k:
            continue
        for split in _compositions(k, len(clique)):
            term = 1
            for v, c in zip(clique, split):
                term *= comb(spec.sizes[v], c)
            total += term
    return total


def materialize(spec: BlowupSpec) -> tuple[int, list[int]]:
    """Explicit adjacency bitmasks of the blow-up (n <= 64): parts are
    cliques, cross edges follow the base."""
    n = spec.n
    if n > 64:
        raise ConstructionError("materialized blow-up capped at 64 vertices")
    part_of = []
    for p, s in enumerate(spec.sizes):
        part_of.extend([p] * s)
    masks = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            pi, pj = part_of[i], part_of[j]
            if pi == pj or spec.base.has_edge(pi, pj):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return n, masks


def materialize_small(spec: BlowupSpec) -> SmallGraph:
    n, masks = materialize(spec)
    if n > graphs.MAX_VERTICES:
        raise ConstructionError("blow-up too large for the small-graph kernel")
    return SmallGraph(n, tuple(masks))


def blowup_independence_number(spec: BlowupSpec) -> int:
    n, masks = materialize(spec)
    return int(_kernels.independence_number_large(
        np.array(masks, dtype=np.uint64), n))


def turan_complement(n: int, parts: int) -> BlowupSpec:
    """Disjoint union of `parts` near-equal cliques, as a blow-up of an
    empty base; larger parts come first."""
    if parts < 1:
        raise ConstructionError("need at least one part")
    if n < parts:
        raise ConstructionError("every part must be nonempty")
    q, r = divmod(n, parts)
    sizes = tuple([q + 1] * r + [q] * (parts - r))
    return BlowupSpec(graphs.empty_graph(parts), sizes)


def c5_extremal_sizes(n: int) -> tuple[int, int, int, int, int]:
    """Part sizes of the 4-clique-minimizing pentagon blow-up, by n mod 5."""
    if n < 5:
        raise ConstructionError("need n >= 5")
    k, r = divmod(n, 5)
    if r == 0:
        return (k, k, k, k, k)
    if r == 1:
        return (k, k, k + 1, k - 1, k + 1)
    if r == 2:
        return (k, k, k + 1, k, k + 1)
    if r == 3:
        return (k + 1, k + 1, k, k + 1, k)
    return (k + 1, k + 1, k, k + 2, k)


def f34_formula(n: int) -> int:
    """Closed-form minimum triangle count at independence number < 4."""
    if n < 1:
        raise ConstructionError("need n >= 1")
    return (comb(n // 3, 3) + comb((n + 1) // 3, 3) + comb((n + 2) // 3, 3))


def c5_blowup(n: int) -> BlowupSpec:
    return BlowupSpec(graphs.cycle_graph(5), c5_extremal_sizes(n))


def f43_construction_value(n: int) -> int:
    """4-clique count of the extremal pentagon blow-up on n vertices."""
    return count_cliques_blowup(c5_blowup(n), 4)


def g_objective(n: int, y: Sequence[int]) -> int:
    """Cyclic pair-sum objective: sum C(y_i,4) - sum C(n - y_i - y_{i+1}, 4).

    When y_i is the size of the union of parts 2i-1 and 2i of a pentagon
    blow-up (cyclically), this equals its 4-clique count.
    """
    y = list(y)
    if len(y) != 5:
        raise ConstructionError("y must have 5 entries")
    for i in range(5):
        if y[i] + y[(i + 1) % 5] > n:
            raise ConstructionError("pair sums must not exceed n")
    return (sum(comb(v, 4) for v in y)
            - sum(comb(n - y[i] - y[(i + 1) % 5], 4) for i in range(5)))


def _min_rotation(t: tuple[int, ...]) -> tuple[int, ...]:
    return min(tuple(t[i:] + t[:i]) for i in range(len(t)))


def intopt_bruteforce(n: int, epsilon: Fraction | float = Fraction(1, 5),
                      ) -> tuple[int, list[tuple[int, ...]]]:
    """Exhaustive minimization of g over integer 5-tuples with sum 2n and
    every entry within epsilon*n of 2n/5.

    Returns the minimum and the minimizing orbits, each reported as its
    lexicographically smallest rotation.
    """
    if n < 12:
        raise ConstructionError("scan supported for n >= 12")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ConstructionError("epsilon must be positive")
    center = Fraction(2 * n, 5)
    # strict window: smallest integer above center - eps*n, largest below
    # center + eps*n
    lo = floor(center - eps * n) + 1
    hi = ceil(center + eps * n) - 1
    lo = max(lo, 0)
    hi = min(hi, n)
    if lo > hi:
        raise ConstructionError("empty feasible window")
    combs = np.array([comb(v, 4) for v in range(n + 1)], dtype=np.int64)
    best, tuples = _kernels.intopt_scan(n, lo, hi, combs)
    orbits = sorted({_min_rotation(tuple(int(v) for v in row))
                     for row in np.asarray(tuples)})
    return int(best), orbits


def lemma_pattern(n: int) -> tuple[int, ...]:
    """Floor/ceil of 2n/5 in ascending order (the claimed minimizer orbit),
    as its lexicographically smallest rotation."""
    q, r = divmod(2 * n, 5)
    values = [q] * (5 - r) + [q + 1] * r
    return _min_rotation(tuple(values))


def bruteforce_min_cliques(n: int, k: int, l: int, allow_slow: bool = False
                           ) -> tuple[int, list[SmallGraph]]:
    """Exhaustive minimum of t_k over all admissible graphs of size n.

    Returns the minimum count and every achieving canonical graph.  Capped
    at n <= 8 unless ``allow_slow`` opts into the long-running n = 9 level
    (minutes at l = 4; seconds at l = 3).
    """
    if n > 9 or (n > 8 and not allow_slow):
        raise ConstructionError(
            "exhaustive oracle capped at n = 8; pass allow_slow for n = 9")
    best: Optional[int] = None
    witnesses: list[SmallGraph] = []
    for g in enumerate_admissible(n, l):
        c = graphs.count_cliques(g, k)
        if best is None or c < best:
            best = c
            witnesses = [g]
        elif c == best:
            witnesses.append(g)
    return best, witnesses


def blowup_ratio_comparison(k: int) -> tuple[Fraction, Fraction, bool]:
    """Asymptotic k-clique densities of the balanced pentagon blow-up versus
    two equal cliques, and whether the blow-up wins."""
    if k < 2:
        raise ConstructionError("need clique size k >= 2")
    pentagon = Fraction(2**k - 1, 5 ** (k - 1))
    two_cliques = Fraction(1, 2 ** (k - 1))
    return pentagon, two_cliques, pentagon < two_cliques
