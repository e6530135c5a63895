"""Hot integer kernels: canonical labeling, independence number, clique and
induced-subgraph counting, and the part-size scan of the blow-up optimizer.

Every kernel is written in a numba-compilable subset of Python over numpy
arrays and plain int64/uint64 scalars.  By default the functions are wrapped
with ``numba.njit(cache=True)``; setting the environment variable
``FLAGFORGE_PURE_PYTHON=1`` (or running without numba installed) selects the
uncompiled fallback, which computes bit-identical results.

Graphs enter as an int64 array of adjacency bitmask rows (``adj[v]`` has bit
``u`` set iff ``u ~ v``).  The canonical code of an n-vertex graph is the
lexicographically minimal upper-triangle bit-string over all relabelings,
read column by column ((0,1),(0,2),(1,2),(0,3),...) so that it matches the
bit order of the graph6 encoding.  With n <= 10 the code fits in 45 bits and
is carried as a single int64.
"""

import os

import numpy as np

_PURE = os.environ.get("FLAGFORGE_PURE_PYTHON", "") not in ("", "0")

if not _PURE:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _PURE = True

NUMBA_ENABLED = not _PURE


def _jit(fn):
    if NUMBA_ENABLED:
        return njit(cache=True)(fn)
    return fn


@_jit
def popcount64(x):
    x = np.uint64(x)
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@_jit
def canonical_search(adj, n, fixed):
    """Minimal-code search over vertex orderings.

    ``fixed`` pins the first ``len(fixed)`` positions to the given vertices
    (in order); the remaining positions range over all completions.  Pinning
    realizes flag canonicalization: labeled vertices keep their label order
    and only the unlabeled tail is permuted.

    Returns ``(code, order)`` where ``order[i]`` is the original vertex
    placed at canonical position i and ``code`` packs the relabeled upper
    triangle, earliest pair most significant.

    Vertices u, v with identical neighborhoods off {u, v} are interchangeable
    (swapping them is an automorphism fixing everything else), so at each
    search level only the first member of such a pair is tried.  This keeps
    dense symmetric graphs (cliques, blow-ups) from exploding the search.
    """
    k = len(fixed)
    totbits = n * (n - 1) // 2

    # Twin table: u, v interchangeable iff neighborhoods agree off {u, v}.
    twin = np.zeros((n, n), dtype=np.bool_)
    for u in range(n):
        for v in range(n):
            off = ~((1 << u) | (1 << v))
            twin[u, v] = (adj[u] & off) == (adj[v] & off)

    order = np.empty(n, dtype=np.int64)
    place = np.empty(n, dtype=np.int64)
    pcode = np.zeros(n + 1, dtype=np.int64)
    tried = np.zeros(n, dtype=np.int64)  # bitmask of candidates tried per level
    cand = np.zeros(n, dtype=np.int64)  # last candidate tried per level

    # Seed: fixed prefix followed by the remaining vertices ascending.
    used0 = 0
    for i in range(k):
        place[i] = fixed[i]
        used0 |= 1 << fixed[i]
    j = k
    for v in range(n):
        if not (used0 >> v) & 1:
            place[j] = v
            j += 1
    best = 0
    for pos in range(n):
        for i in range(pos):
            best = (best << 1) | ((adj[place[i]] >> place[pos]) & 1)
    for i in range(n):
        order[i] = place[i]
    if k >= n:
        return best, order

    # Prefix code of the pinned part is shared by every ordering.
    code0 = 0
    for pos in range(k):
        for i in range(pos):
            code0 = (code0 << 1) | ((adj[fixed[i]] >> fixed[pos]) & 1)
    pcode[k] = code0

    used = used0

    level = k
    cand[level] = -1
    tried[level] = 0
    while level >= k:
        # advance the candidate at this level
        v = cand[level] + 1
        found = -1
        while v < n:
            if not (used >> v) & 1:
                ok = True
                t = tried[level]
                for u in range(n):
                    if (t >> u) & 1 and twin[u, v]:
                        ok = False
                        break
                if ok:
                    found = v
                    break
            v += 1
        if found < 0:
            level -= 1
            if level >= k:
                used &= ~(1 << place[level])
            continue
        cand[level] = found
        tried[level] |= 1 << found

        bits = 0
        for i in range(level):
            bits = (bits << 1) | ((adj[place[i]] >> found) & 1)
        pc = (pcode[level] << level) | bits
        nbits = (level + 1) * level // 2
        if pc > (best >> (totbits - nbits)):
            continue
        place[level] = found
        pcode[level + 1] = pc
        if level == n - 1:
            if pc < best:
                best = pc
                for i in range(n):
                    order[i] = place[i]
            continue
        used |= 1 << found
        level += 1
        cand[level] = -1
        tried[level] = 0

    return best, order


@_jit
def independence_number_small(adj, n):
    """Exact independence number by full subset scan (n <= ~16)."""
    best = 0
    for s in range(1, 1 << n):
        ok = True
        for v in range(n):
            if (s >> v) & 1 and adj[v] & s:
                ok = False
                break
        if ok:
            c = 0
            t = s
            while t:
                t &= t - 1
                c += 1
            if c > best:
                best = c
    return best


@_jit
def independence_number_large(masks, n):
    """Branch-and-bound maximum independent set for up to 64 vertices."""
    if n == 0:
        return 0
    if n == 64:
        full = ~np.uint64(0)
    else:
        full = (np.uint64(1) << np.uint64(n)) - np.uint64(1)
    cap = 4 * n + 8
    stk_cand = np.empty(cap, dtype=np.uint64)
    stk_size = np.empty(cap, dtype=np.int64)
    stk_cand[0] = full
    stk_size[0] = 0
    sp = 1
    best = 0
    while sp > 0:
        sp -= 1
        cand = stk_cand[sp]
        size = stk_size[sp]
        while True:
            if size + popcount64(cand) <= best:
                break
            if cand == np.uint64(0):
                if size > best:
                    best = size
                break
            # lowest set bit as the branch vertex
            v = 0
            while not (cand >> np.uint64(v)) & np.uint64(1):
                v += 1
            bit = np.uint64(1) << np.uint64(v)
            # live stack holds at most one sibling per depth; cap covers n=64
            stk_cand[sp] = cand & ~bit  # branch: exclude v
            stk_size[sp] = size
            sp += 1
            cand = cand & ~bit & ~masks[v]  # branch: include v
            size += 1
    return best


@_jit
def count_cliques_small(adj, n, k):
    """Number of k-subsets inducing a clique (n <= ~16)."""
    if k > n:
        return 0
    count = 0
    for s in range(1 << n):
        c = 0
        t = s
        while t:
            t &= t - 1
            c += 1
        if c != k:
            continue
        ok = True
        for v in range(n):
            if (s >> v) & 1:
                if (adj[v] & s) != (s & ~(1 << v)):
                    ok = False
                    break
        if ok:
            count += 1
    return count


@_jit
def count_induced_small(gadj, gn, hcode, hn):
    """Number of hn-subsets of the host whose induced graph has code hcode."""
    if hn > gn:
        return 0
    count = 0
    sub = np.empty(hn, dtype=np.int64)
    sadj = np.empty(hn, dtype=np.int64)
    nofix = np.empty(0, dtype=np.int64)
    for s in range(1 << gn):
        c = 0
        t = s
        while t:
            t &= t - 1
            c += 1
        if c != hn:
            continue
        j = 0
        for v in range(gn):
            if (s >> v) & 1:
                sub[j] = v
                j += 1
        for a in range(hn):
            row = 0
            for b in range(hn):
                if a != b and (gadj[sub[a]] >> sub[b]) & 1:
                    row |= 1 << b
            sadj[a] = row
        code, _ = canonical_search(sadj, hn, nofix)
        if code == hcode:
            count += 1
    return count


@_jit
def intopt_scan(n, lo, hi, combs):
    """Exhaustive scan of the cyclic part-pair objective.

    Feasible tuples: integer y in [lo, hi]^5 with sum 2n and every
    consecutive pair satisfying y_i + y_{i+1} <= n.  The objective is
    sum C(y_i, 4) - sum C(n - y_i - y_{i+1}, 4) with cyclic indices.
    ``combs[v]`` must hold C(v, 4).  Returns the minimizing tuples.
    """
    best = np.int64(2**62)
    count = 0
    # two passes: first count minimizers, then collect
    for phase in range(2):
        if phase == 1:
            out = np.empty((count, 5), dtype=np.int64)
            idx = 0
        else:
            out = np.empty((0, 5), dtype=np.int64)
            idx = 0
        for y1 in range(lo, hi + 1):
            for y2 in range(lo, hi + 1):
                if y1 + y2 > n:
                    continue
                for y3 in range(lo, hi + 1):
                    if y2 + y3 > n:
                        continue
                    for y4 in range(lo, hi + 1):
                        if y3 + y4 > n:
                            continue
                        y5 = 2 * n - y1 - y2 - y3 - y4
                        if y5 < lo or y5 > hi:
                            continue
                        if y4 + y5 > n or y5 + y1 > n:
                            continue
                        g = (
                            combs[y1] + combs[y2] + combs[y3] + combs[y4] + combs[y5]
                            - combs[n - y1 - y2] - combs[n - y2 - y3]
                            - combs[n - y3 - y4] - combs[n - y4 - y5]
                            - combs[n - y5 - y1]
                        )
                        if phase == 0:
                            if g < best:
                                best = g
                                count = 1
                            elif g == best:
                                count += 1
                        else:
                            if g == best:
                                out[idx, 0] = y1
                                out[idx, 1] = y2
                                out[idx, 2] = y3
                                out[idx, 3] = y4
                                out[idx, 4] = y5
                                idx += 1
        if phase == 1:
            return best, out
    return best, np.empty((0, 5), dtype=np.int64)  # pragma: no cover


def warmup():
    """Force JIT compilation of every kernel (no-op on the pure backend)."""
    adj = np.array([2, 1, 0], dtype=np.int64)
    canonical_search(adj, 3, np.empty(0, dtype=np.int64))
    canonical_search(adj, 3, np.array([1], dtype=np.int64))
    independence_number_small(adj, 3)
    independence_number_large(adj.astype(np.uint64), 3)
    count_cliques_small(adj, 3, 2)
    code, _ = canonical_search(np.array([0], dtype=np.int64), 1, np.empty(0, dtype=np.int64))
    count_induced_small(adj, 3, code, 1)
    intopt_scan(12, 3, 7, np.array([int(v * (v - 1) * (v - 2) * (v - 3) // 24) for v in range(13)], dtype=np.int64))
