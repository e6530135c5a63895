"""Assembly and export of the clique-minimization semidefinite program,
symmetry reduction of flag blocks, and exact limit densities of weighted
blow-up constructions.

The program maximizes a bound y subject to one surplus constraint per
admissible graph H of the expansion size t:

    s_H = d(J; H) - sum_i <Q_i, P_i(H)> - y >= 0,      Q_i PSD,

where P_i(H) is the exact pairing matrix d_sigma_i(F_a, F_b; H) over the
i-th flag family.  Correctness claims never rest on the emitted solver file
(rationals are rendered to 30 significant digits there); exact verification
lives in the certify module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations, permutations, product as iproduct
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels, algebra, cache, graphs
from .algebra import ZERO, ONE, expand, flag_family, graph_basis, graph_vector
from .flags import Flag, FlagFamily, TypeGraph
from .graphs import SmallGraph


class ProblemError(ValueError):
    """Infeasible block sizes or malformed problem input."""


Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SDPBlock:
    type: TypeGraph
    flag_size: int
    family: FlagFamily
    # pairing[h][a][b] = d_sigma(F_a, F_b; H_h), symmetric in (a, b)
    pairing: tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.family)


@dataclass(frozen=True)
class SDPProblem:
    target: SmallGraph
    forbidden_l: int
    t: int
    basis: tuple[SmallGraph, ...]
    objective: tuple[Fraction, ...]  # d(J; H) per basis graph
    blocks: tuple[SDPBlock, ...]

    @property
    def num_free_variables(self) -> int:
        return 1 + sum(b.dim * (b.dim + 1) // 2 for b in self.blocks)


def pairing_matrix(type_: TypeGraph, flag_size: int, host: SmallGraph) -> Matrix:
    """Exact matrix d_sigma(F_a, F_b; host) over the flag family.

    One pass over label injections classifies every disjoint subset pair at
    once rather than calling the pairwise density for each entry.
    """
    k = type_.k
    s = flag_size - k
    if host.n < 2 * flag_size - k:
        raise ProblemError("host smaller than the paired flag expansion")
    fam = flag_family(type_, flag_size)
    dim = len(fam)
    code_to_idx = {m.canonical_code(): i for i, m in enumerate(fam.members)}
    counts = [[0] * dim for _ in range(dim)]
    pair_total = 0
    inj_total = 0
    labelings = permutations(range(host.n), k) if k else [()]
    for lab in labelings:
        inj_total += 1
        if k and host.induced(lab).adj != type_.sigma.adj:
            continue
        unlabeled = [v for v in range(host.n) if v not in lab]
        cls: dict[tuple, int] = {}

        def classify(pick, lab=lab) -> int:
            if pick not in cls:
                sub = Flag(host.induced(list(lab) + list(pick)),
                           tuple(range(k)), type_)
                cls[pick] = code_to_idx[sub.canonical_code()]
            return cls[pick]

        for x1 in combinations(unlabeled, s):
            i = classify(x1)
            rest = [v for v in unlabeled if v not in x1]
            for x2 in combinations(rest, s):
                counts[i][classify(x2)] += 1
                pair_total += 1
    # non-matching injections contribute zero, so only the denominator sees
    # them: every injection offers the same number of ordered disjoint pairs
    u = host.n - k
    per_inj = comb(u, s) * comb(u - s, s)
    denom = inj_total * per_inj
    return tuple(tuple(Fraction(counts[a][b], denom) for b in range(dim))
                 for a in range(dim))


def _pairing_job(args) -> Matrix:
    type_, flag_size, host = args
    return pairing_matrix(type_, flag_size, host)


def pairing_tensor(type_: TypeGraph, flag_size: int, t: int,
                   workers: int = 1) -> tuple[Matrix, ...]:
    """Pairing matrices for every basis graph of size t, disk-cached.

    With workers > 1 the per-host matrices are computed in a process pool;
    collection is ordered, so the result is identical either way.
    """
    basis = graph_basis(t, type_.l)
    fam = flag_family(type_, flag_size)
    disk_key = (f"pairing:v1:{type_.key()!r}:{flag_size}:{t}:"
                f"{fam.fingerprint()}:{basis.fingerprint()}")
    stored = cache.get_json(disk_key)
    if stored is not None:
        return tuple(
            tuple(tuple(Fraction(v) for v in row) for row in mat)
            for mat in stored["matrices"])
    jobs = [(type_, flag_size, h) for h in basis.members]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tensor = tuple(pool.map(_pairing_job, jobs))
    else:
        tensor = tuple(_pairing_job(j) for j in jobs)
    cache.put_json(disk_key, {
        "matrices": [[[str(v) for v in row] for row in mat]
                     for mat in tensor]})
    return tensor


def build_problem(target: SmallGraph, l: int, t: int,
                  blocks: Sequence[tuple[TypeGraph, int]],
                  workers: int = 1) -> SDPProblem:
    """Assemble objective and pairing tensors for the given block layout."""
    if not target.n <= t <= 7:
        raise ProblemError(f"expansion size {t} must satisfy |J| <= t <= 7")
    for type_, flag_size in blocks:
        if type_.l != l:
            raise ProblemError("block type built for a different l")
        if 2 * flag_size - type_.k > t:
            raise ProblemError(
                f"block (k={type_.k}, flag size {flag_size}) cannot expand "
                f"at t={t}")
    basis = graph_basis(t, l)
    objective = expand(graph_vector(target, l), t).coeffs
    built = []
    for type_, flag_size in blocks:
        fam = flag_family(type_, flag_size)
        pairing = pairing_tensor(type_, flag_size, t, workers=workers)
        built.append(SDPBlock(type_, flag_size, fam, pairing))
    return SDPProblem(target, l, t, basis.members, objective, tuple(built))


# -- symmetry reduction -------------------------------------------------------


@dataclass(frozen=True)
class SymmetryDecomposition:
    """Invariant / anti-invariant split of a flag family under the label
    automorphisms of its type."""

    type: TypeGraph
    flag_size: int
    group: tuple[tuple[int, ...], ...]  # label permutations
    orbits: tuple[tuple[int, ...], ...]  # flag-index orbits
    invariant: tuple[tuple[Fraction, ...], ...]
    anti_invariant: tuple[tuple[Fraction, ...], ...]


def _relabel_flag(f: Flag, gamma: tuple[int, ...]) -> Flag:
    """Apply a label permutation: label j+1 moves to the vertex that held
    label gamma^-1(j)+1."""
    inv = [0] * len(gamma)
    for i, gi in enumerate(gamma):
        inv[gi] = i
    labeled = tuple(f.labeled[inv[j]] for j in range(len(gamma)))
    return Flag(f.graph, labeled, f.type)


def split_invariant(type_: TypeGraph, flag_size: int) -> SymmetryDecomposition:
    """Orbit sums span the invariant part; within-orbit differences span the
    part whose group average vanishes.  Cross averages [[f*g]] are zero."""
    fam = flag_family(type_, flag_size)
    k = type_.k
    if k == 0:
        group: list[tuple[int, ...]] = [()]
    else:
        group = graphs.automorphisms(type_.sigma)
    code_to_idx = {m.canonical_code(): i for i, m in enumerate(fam.members)}
    n = len(fam)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, m in enumerate(fam.members):
        for gamma in group:
            j = code_to_idx[_relabel_flag(m, gamma).canonical_code()]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
    orbit_map: dict[int, list[int]] = {}
    for i in range(n):
        orbit_map.setdefault(find(i), []).append(i)
    orbits = tuple(tuple(sorted(v)) for _, v in sorted(orbit_map.items()))

    invariant = []
    anti = []
    for orb in orbits:
        vec = [ZERO] * n
        for i in orb:
            vec[i] = ONE
        invariant.append(tuple(vec))
        for j in orb[1:]:
            vec = [ZERO] * n
            vec[orb[0]] = ONE
            vec[j] = -ONE
            anti.append(tuple(vec))
    return SymmetryDecomposition(type_, flag_size, tuple(group), orbits,
                                 tuple(invariant), tuple(anti))


# -- weighted blow-ups and limit densities ------------------------------------


@dataclass(frozen=True)
class WeightedBlowup:
    """A base graph with nonnegative rational part weights summing to 1.
    Limit convention: two samples in the same part are adjacent (parts are
    cliques); across parts adjacency follows the base graph."""

    base: SmallGraph
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.base.n:
            raise ProblemError("one weight per base vertex required")
        if any(w < 0 for w in self.weights):
            raise ProblemError("weights must be nonnegative")
        if sum(self.weights) != 1:
            raise ProblemError("weights must sum to 1")

    def parts_adjacent(self, p: int, q: int) -> bool:
        return p == q or self.base.has_edge(p, q)


def balanced_blowup(base: SmallGraph) -> WeightedBlowup:
    w = Fraction(1, base.n)
    return WeightedBlowup(base, (w,) * base.n)


def limit_density(b: WeightedBlowup, embedding: Sequence[int],
                  flag: Flag) -> Fraction:
    """Limit probability that random unlabeled samples extend the embedded
    type to a copy of the given flag.

    Each sample independently lands in a part with that part's weight; the
    contribution of an assignment is its weight product when the induced
    flag (labels plus samples, adjacency per the blow-up convention) is
    flag-isomorphic to the target.  Isomorphism, not slot-order equality:
    asymmetric flags are reached by several assignments.
    """
    k = flag.type.k
    if len(embedding) != k:
        raise ProblemError("embedding length does not match type size")
    sigma = flag.type.sigma
    for i in range(k):
        for j in range(i + 1, k):
            if sigma.has_edge(i, j) != b.parts_adjacent(embedding[i],
                                                        embedding[j]):
                raise ProblemError("embedding does not induce the type")
    m = flag.n - k
    want = flag.canonical_code()
    fixed = np.arange(k, dtype=np.int64)
    total = ZERO
    for assign in iproduct(range(b.base.n), repeat=m):
        parts = list(embedding) + list(assign)
        rows = [0] * (k + m)
        for i in range(k + m):
            for j in range(i + 1, k + m):
                if b.parts_adjacent(parts[i], parts[j]):
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        code, _ = _kernels.canonical_search(
            np.array(rows, dtype=np.int64), k + m, fixed)
        if (k + m, k, int(code)) == want:
            weight = ONE
            for p in assign:
                weight *= b.weights[p]
            total += weight
    return total


def type_embeddings(b: WeightedBlowup, type_: TypeGraph,
                    up_to_automorphism: bool = True) -> list[tuple[int, ...]]:
    """Maps from type labels to base parts inducing the type, optionally
    deduplicated under base-graph automorphisms acting on parts."""
    k = type_.k
    valid = []
    for assign in iproduct(range(b.base.n), repeat=k):
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                if type_.sigma.has_edge(i, j) != b.parts_adjacent(
                        assign[i], assign[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok and all(b.weights[p] > 0 for p in assign):
            valid.append(assign)
    if not up_to_automorphism:
        return valid
    # keep automorphisms that preserve the weight profile
    autos = [a for a in graphs.automorphisms(b.base)
             if all(b.weights[a[v]] == b.weights[v] for v in range(b.base.n))]
    seen = set()
    out = []
    for assign in valid:
        if assign in seen:
            continue
        out.append(assign)
        for a in autos:
            seen.add(tuple(a[p] for p in assign))
    return out


def zero_eigenvector_candidates(b: WeightedBlowup, type_: TypeGraph,
                                flag_size: int) -> list[tuple[Fraction, ...]]:
    """Limit density profiles over the flag family, one per embedding of the
    type into the blow-up parts (up to base automorphism).  On an extremal
    construction these profiles are null directions of any tight block."""
    fam = flag_family(type_, flag_size)
    out = []
    for emb in type_embeddings(b, type_):
        out.append(tuple(limit_density(b, emb, f) for f in fam.members))
    return out


# -- change of basis ----------------------------------------------------------


def _mat_invert(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [ONE if i == j else ZERO
         for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ProblemError("basis matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [v / pv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    return [row[n:] for row in a]


def change_of_basis(prob: SDPProblem, block_index: int,
                    m: Sequence[Sequence[Fraction]]) -> SDPProblem:
    """Congruence-transform one block: with Y = M Q M^T ranging over PSD
    matrices exactly when Q does, the pairing matrices become
    (M^-1)^T P M^-1.  The transformed problem has the same optimum."""
    block = prob.blocks[block_index]
    if len(m) != block.dim or any(len(r) != block.dim for r in m):
        raise ProblemError("basis matrix has wrong dimensions")
    minv = _mat_invert(m)
    dim = block.dim

    def transform(p: Matrix) -> Matrix:
        # (M^-1)^T P M^-1
        tmp = [[sum(minv[i][a] * p[i][j] for i in range(dim))
                for j in range(dim)] for a in range(dim)]
        return tuple(tuple(sum(tmp[a][j] * minv[j][c] for j in range(dim))
                           for c in range(dim)) for a in range(dim))

    new_block = SDPBlock(block.type, block.flag_size, block.family,
                         tuple(transform(p) for p in block.pairing))
    blocks = list(prob.blocks)
    blocks[block_index] = new_block
    return SDPProblem(prob.target, prob.forbidden_l, prob.t, prob.basis,
                      prob.objective, tuple(blocks))


# -- export -------------------------------------------------------------------


def _fmt30(x: Fraction) -> str:
    """Decimal rendering at 30 significant digits, round-to-nearest."""
    with localcontext() as ctx:
        ctx.prec = 30
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "f") if -30 < d.adjusted() < 30 else format(d, "e")


def emit_sdpa(prob: SDPProblem, path) -> None:
    """Write SDPA sparse format (.dat-s).

    Free variables: y first, then each block's upper triangle row-major.
    Blocks: one PSD block per flag family, then a diagonal block holding the
    surplus variables.  SDPA's convention minimizes the objective row, so y
    carries coefficient -1 and the solver optimum is -y.  Output is
    deterministic: re-emission is byte-identical.
    """
    lines = []
    lines.append(f"* clique minimization: target {graphs.to_graph6(prob.target)} "
                 f"l={prob.forbidden_l} t={prob.t}")
    nH = len(prob.basis)
    m = prob.num_free_variables
    lines.append(f"{m}")
    lines.append(f"{len(prob.blocks) + 1}")
    sizes = [str(b.dim) for b in prob.blocks] + [str(-nH)]
    lines.append(" ".join(sizes))
    lines.append(" ".join(["-1"] + ["0"] * (m - 1)))

    diag_blk = len(prob.blocks) + 1
    entries: list[str] = []
    # F_0: constants; s_H = sum_k x_k F_k  -  F_0  on the diagonal block
    for h, c in enumerate(prob.objective):
        if c != 0:
            entries.append(f"0 {diag_blk} {h + 1} {h + 1} {_fmt30(-c)}")
    # y (variable 1): -1 on every surplus diagonal entry
    for h in range(nH):
        entries.append(f"1 {diag_blk} {h + 1} {h + 1} -1")
    var = 1
    for bi, block in enumerate(prob.blocks):
        for a in range(block.dim):
            for bcol in range(a, block.dim):
                var += 1
                entries.append(f"{var} {bi + 1} {a + 1} {bcol + 1} 1")
                mult = 2 if a != bcol else 1
                for h in range(nH):
                    val = block.pairing[h][a][bcol] * mult
                    if val != 0:
                        entries.append(
                            f"{var} {diag_blk} {h + 1} {h + 1} {_fmt30(-val)}")
    lines.extend(entries)
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def problem_to_json_obj(prob: SDPProblem) -> dict:
    return {
        "target": graphs.to_graph6(prob.target),
        "forbidden_l": prob.forbidden_l,
        "t": prob.t,
        "basis": [graphs.canonical_graph6(g) for g in prob.basis],
        "objective": [str(c) for c in prob.objective],
        "blocks": [
            {
                "type": graphs.to_graph6(b.type.sigma) if b.type.sigma else "",
                "flag_size": b.flag_size,
                "dim": b.dim,
                "family_fingerprint": b.family.fingerprint(),
                "pairing": [[[str(v) for v in row] for row in mat]
                            for mat in b.pairing],
            }
            for b in prob.blocks
        ],
    }


def dump_problem_json(prob: SDPProblem, path) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_json_obj(prob), fh, indent=1, sort_keys=True)
        fh.write("\n")
