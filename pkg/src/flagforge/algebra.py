"""Exact flag-algebra calculus: densities, normalizing factors, the
averaging operator, flag products, and expansion into a fixed-size basis.

Every quantity here is a ``fractions.Fraction`` obtained by exhaustive
enumeration of subset or injection choices; no floating point enters this
module.  Joint densities use the disjoint-subset convention: the probability
is over uniformly chosen pairwise-disjoint unlabeled subsets, so the product
formula for densities holds only asymptotically, not at finite host size.

Vectors over a basis carry a fingerprint of the basis contents and refuse
arithmetic against a differently-fingerprinted basis.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import Sequence

from . import cache, graphs
from .flags import Flag, FlagFamily, FlagTypeError, TypeGraph, enumerate_admissible, enumerate_flags
from .graphs import SmallGraph

ZERO = Fraction(0)
ONE = Fraction(1)


class BasisMismatchError(ValueError):
    """Arithmetic attempted between vectors over different bases."""


class GraphSizeError(ValueError):
    """Expansion size outside the small-graph kernel bound."""

    def __init__(self, t):
        super().__init__(f"expansion size {t} outside kernel bound")


# -- bases and vectors -------------------------------------------------------


@dataclass(frozen=True)
class GraphBasis:
    """Ordered canonical admissible graphs of one size; the expansion basis."""

    size: int
    l: int
    members: tuple[SmallGraph, ...]

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"graphs:{self.size}:{self.l}:".encode())
        for g in self.members:
            h.update(graphs.canonical_graph6(g).encode())
        return h.hexdigest()[:16]

    def index_by_code(self) -> dict[str, int]:
        return {graphs.canonical_graph6(g): i for i, g in enumerate(self.members)}

    def __len__(self):
        return len(self.members)


_BASIS_CACHE: dict[tuple[int, int], GraphBasis] = {}
_FAMILY_CACHE: dict[tuple, FlagFamily] = {}


def graph_basis(size: int, l: int) -> GraphBasis:
    key = (size, l)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = GraphBasis(size, l, tuple(enumerate_admissible(size, l)))
    return _BASIS_CACHE[key]


def flag_family(type_: TypeGraph, size: int) -> FlagFamily:
    key = (type_.key(), size)
    if key not in _FAMILY_CACHE:
        _FAMILY_CACHE[key] = enumerate_flags(type_, size)
    return _FAMILY_CACHE[key]


@dataclass(frozen=True)
class DensityVector:
    """Rational coefficients over a fixed-size basis of canonical graphs."""

    basis: GraphBasis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.basis):
            raise BasisMismatchError("coefficient count does not match basis")

    def _check(self, other: "DensityVector"):
        if self.basis.fingerprint() != other.basis.fingerprint():
            raise BasisMismatchError("vectors over different bases")

    def __add__(self, other):
        self._check(other)
        return DensityVector(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DensityVector(self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "DensityVector":
        c = Fraction(c)
        return DensityVector(self.basis, tuple(c * a for a in self.coeffs))

    def coefficient(self, g: SmallGraph) -> Fraction:
        code = graphs.canonical_graph6(g)
        idx = self.basis.index_by_code()
        if code not in idx:
            raise BasisMismatchError("graph not in basis")
        return self.coeffs[idx[code]]

    def to_json_obj(self) -> dict:
        return {
            "basis_fingerprint": self.basis.fingerprint(),
            "size": self.basis.size,
            "forbidden_l": self.basis.l,
            "entries": [
                {"canonical_code": graphs.canonical_graph6(g),
                 "num": c.numerator, "den": c.denominator}
                for g, c in zip(self.basis.members, self.coeffs) if c != 0
            ],
        }


def density_vector_from_json(obj: dict) -> DensityVector:
    basis = graph_basis(obj["size"], obj["forbidden_l"])
    if basis.fingerprint() != obj["basis_fingerprint"]:
        raise BasisMismatchError("stored fingerprint does not match basis")
    idx = basis.index_by_code()
    coeffs = [ZERO] * len(basis)
    for e in obj["entries"]:
        coeffs[idx[e["canonical_code"]]] = Fraction(e["num"], e["den"])
    return DensityVector(basis, tuple(coeffs))


def zero_vector(basis: GraphBasis) -> DensityVector:
    return DensityVector(basis, (ZERO,) * len(basis))


def graph_vector(g: SmallGraph, l: int) -> DensityVector:
    """The unit vector of g inside its own size basis."""
    basis = graph_basis(g.n, l)
    code = graphs.canonical_graph6(g)
    coeffs = [ONE if graphs.canonical_graph6(m) == code else ZERO for m in basis.members]
    if not any(coeffs):
        raise BasisMismatchError("graph is not admissible at this l")
    return DensityVector(basis, tuple(coeffs))


@dataclass(frozen=True)
class LinearCombination:
    """Rational coefficients over the flag family of one type and size."""

    family: FlagFamily
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.family):
            raise BasisMismatchError("coefficient count does not match family")

    def _check(self, other: "LinearCombination"):
        if self.family.fingerprint() != other.family.fingerprint():
            raise BasisMismatchError("combinations over different flag families")

    def __add__(self, other):
        self._check(other)
        return LinearCombination(self.family, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return LinearCombination(self.family, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "LinearCombination":
        c = Fraction(c)
        return LinearCombination(self.family, tuple(c * a for a in self.coeffs))


def flag_code_str(f: Flag) -> str:
    """Compact canonical key of a flag: size, labeled count, packed code."""
    n, k, code = f.canonical_code()
    return f"{n}:{k}:{code}"


def lincomb_to_json_obj(lin: LinearCombination) -> dict:
    fam = lin.family
    return {
        "type": graphs.to_graph6(fam.type.sigma) if fam.type.sigma else "",
        "forbidden_l": fam.type.l,
        "size": fam.size,
        "basis_fingerprint": fam.fingerprint(),
        "entries": [
            {"canonical_code": flag_code_str(m),
             "num": c.numerator, "den": c.denominator}
            for m, c in zip(fam.members, lin.coeffs) if c != 0
        ],
    }


def lincomb_from_json(obj: dict) -> LinearCombination:
    from .flags import TypeGraph

    sigma = graphs.from_graph6(obj["type"]) if obj["type"] else None
    type_ = TypeGraph(sigma, obj["forbidden_l"])
    fam = flag_family(type_, obj["size"])
    if fam.fingerprint() != obj["basis_fingerprint"]:
        raise BasisMismatchError("stored fingerprint does not match family")
    idx = {flag_code_str(m): i for i, m in enumerate(fam.members)}
    coeffs = [ZERO] * len(fam)
    for e in obj["entries"]:
        coeffs[idx[e["canonical_code"]]] = Fraction(e["num"], e["den"])
    return LinearCombination(fam, tuple(coeffs))


def flag_vector(f: Flag) -> LinearCombination:
    """The unit vector of one flag inside its family."""
    fam = flag_family(f.type, f.n)
    i = fam.index_of(f)
    coeffs = [ZERO] * len(fam)
    coeffs[i] = ONE
    return LinearCombination(fam, tuple(coeffs))


def combination(family: FlagFamily, entries: Sequence[tuple[Flag, Fraction]]
                ) -> LinearCombination:
    coeffs = [ZERO] * len(family)
    for f, c in entries:
        coeffs[family.index_of(f)] += Fraction(c)
    return LinearCombination(family, tuple(coeffs))


def unit_combination(type_: TypeGraph, size: int) -> LinearCombination:
    """The multiplicative unit expanded at the given size: sum of the family."""
    fam = flag_family(type_, size)
    return LinearCombination(fam, (ONE,) * len(fam))


# -- densities ----------------------------------------------------------------


def _check_same_type(targets: Sequence[Flag]):
    if not targets:
        raise FlagTypeError("need at least one target flag")
    key = targets[0].type.key()
    for f in targets[1:]:
        if f.type.key() != key:
            raise FlagTypeError("target flags have different types")


def p_density(targets: Sequence[Flag], host: Flag) -> Fraction:
    """Joint flag density of the targets in a host flag.

    Uniformly choose pairwise-disjoint unlabeled subsets X_i of sizes
    |F_i| - k; the value is the probability that every T u X_i induces a
    flag isomorphic to F_i.  Exact: enumerates all ordered disjoint choices.
    """
    _check_same_type(targets)
    if host.type.key() != targets[0].type.key():
        raise FlagTypeError("host flag has a different type")
    k = host.type.k
    sizes = [f.n - k for f in targets]
    unlabeled = [v for v in range(host.n) if v not in host.labeled]
    if sum(sizes) > len(unlabeled):
        raise FlagTypeError("host too small for the requested targets")
    codes = [f.canonical_code() for f in targets]

    total = 0
    favorable = 0

    def rec(i: int, remaining: tuple[int, ...], ok: bool, ways: int):
        nonlocal total, favorable
        if i == len(targets):
            total += ways
            if ok:
                favorable += ways
            return
        for pick in combinations(remaining, sizes[i]):
            good = ok
            if ok:
                sub = Flag(host.graph.induced(list(host.labeled) + list(pick)),
                           tuple(range(k)), host.type)
                good = sub.canonical_code() == codes[i]
            rest = tuple(v for v in remaining if v not in pick)
            rec(i + 1, rest, good, ways)

    # all choice tuples are equally likely, so ways stays 1 per leaf
    rec(0, tuple(unlabeled), True, 1)
    if total == 0:
        return ZERO
    return Fraction(favorable, total)


def d_density(targets: Sequence[Flag], host: SmallGraph) -> Fraction:
    """Average of p_density over uniform injective labelings of the host."""
    _check_same_type(targets)
    type_ = targets[0].type
    k = type_.k
    if not graphs.is_admissible(host, type_.l):
        raise FlagTypeError("host graph is not admissible")
    need = k + sum(f.n - k for f in targets)
    if host.n < need:
        raise FlagTypeError("host too small")
    if k == 0:
        return p_density(targets, Flag(host, (), type_))
    total = ZERO
    count = 0
    for lab in permutations(range(host.n), k):
        count += 1
        if host.induced(lab).adj != type_.sigma.adj:
            continue
        total += p_density(targets, Flag(host, lab, type_))
    return total / count


def q_factor(f: Flag) -> Fraction:
    """Probability that a random labeling of the underlying graph gives f."""
    k = f.type.k
    if k == 0:
        return ONE
    code = f.canonical_code()
    hits = 0
    total = 0
    for lab in permutations(range(f.n), k):
        total += 1
        if f.graph.induced(lab).adj != f.type.sigma.adj:
            continue
        if Flag(f.graph, lab, f.type).canonical_code() == code:
            hits += 1
    return Fraction(hits, total)


def average(lin: LinearCombination) -> DensityVector:
    """Averaging operator: each flag maps to q_factor(F) times F's graph."""
    l = lin.family.type.l
    basis = graph_basis(lin.family.size, l)
    idx = basis.index_by_code()
    coeffs = [ZERO] * len(basis)
    for f, c in zip(lin.family.members, lin.coeffs):
        if c == 0:
            continue
        coeffs[idx[graphs.canonical_graph6(f.graph)]] += c * q_factor(f)
    return DensityVector(basis, tuple(coeffs))


def product(f1: Flag, f2: Flag, l_out: int) -> LinearCombination:
    """Flag product expanded at size l_out: coefficients p([F1,F2]; F)."""
    if f1.type.key() != f2.type.key():
        raise FlagTypeError("flags have different types")
    k = f1.type.k
    if l_out < f1.n + f2.n - k:
        raise FlagTypeError("output size too small for the product")
    fam = flag_family(f1.type, l_out)
    coeffs = tuple(p_density([f1, f2], host) for host in fam.members)
    return LinearCombination(fam, coeffs)


_PRODUCT_TABLE_CACHE: dict[tuple, tuple] = {}


def product_table(type_: TypeGraph, flag_size: int, l_out: int) -> tuple:
    """Joint pair densities p([Fa, Fb]; host) for every host at size l_out.

    Returns, per host in family order, a symmetric matrix of Fractions over
    the size-``flag_size`` family.  One enumeration pass per host classifies
    all disjoint subset pairs at once, so the table costs no more than a
    single product; results are cached per (type, flag_size, l_out).
    """
    key = (type_.key(), flag_size, l_out)
    if key in _PRODUCT_TABLE_CACHE:
        return _PRODUCT_TABLE_CACHE[key]
    k = type_.k
    s = flag_size - k
    if l_out < 2 * flag_size - k:
        raise FlagTypeError("output size too small for the product")
    fam = flag_family(type_, flag_size)
    hosts = flag_family(type_, l_out)

    disk_key = (f"product_table:v1:{type_.key()!r}:{flag_size}:{l_out}:"
                f"{fam.fingerprint()}:{hosts.fingerprint()}")
    stored = cache.get_json(disk_key)
    if stored is not None:
        result = tuple(
            tuple(tuple(Fraction(v) for v in row) for row in mat)
            for mat in stored["matrices"])
        _PRODUCT_TABLE_CACHE[key] = result
        return result
    code_to_idx = {m.canonical_code(): i for i, m in enumerate(fam.members)}
    dim = len(fam)
    out = []
    for host in hosts.members:
        unlabeled = [v for v in range(host.n) if v not in host.labeled]
        cls: dict[tuple, int] = {}

        def classify(pick) -> int:
            if pick not in cls:
                sub = Flag(host.graph.induced(list(host.labeled) + list(pick)),
                           tuple(range(k)), host.type)
                cls[pick] = code_to_idx[sub.canonical_code()]
            return cls[pick]

        counts = [[0] * dim for _ in range(dim)]
        total = 0
        for x1 in combinations(unlabeled, s):
            i = classify(x1)
            rest = [v for v in unlabeled if v not in x1]
            for x2 in combinations(rest, s):
                counts[i][classify(x2)] += 1
                total += 1
        out.append(tuple(tuple(Fraction(c, total) for c in row)
                         for row in counts))
    result = tuple(out)
    _PRODUCT_TABLE_CACHE[key] = result
    cache.put_json(disk_key, {
        "matrices": [[[str(v) for v in row] for row in mat]
                     for mat in result]})
    return result


def product_combinations(a: LinearCombination, b: LinearCombination,
                         l_out: int) -> LinearCombination:
    """Bilinear extension of the flag product to linear combinations."""
    if a.family.type.key() != b.family.type.key():
        raise FlagTypeError("combinations have different types")
    fam = flag_family(a.family.type, l_out)
    if a.family.size == b.family.size:
        table = product_table(a.family.type, a.family.size, l_out)
        out = []
        for h in range(len(fam)):
            mat = table[h]
            s = ZERO
            for i, ca in enumerate(a.coeffs):
                if ca == 0:
                    continue
                row = mat[i]
                for j, cb in enumerate(b.coeffs):
                    if cb != 0:
                        s += ca * cb * row[j]
            out.append(s)
        return LinearCombination(fam, tuple(out))
    out = [ZERO] * len(fam)
    for fa, ca in zip(a.family.members, a.coeffs):
        if ca == 0:
            continue
        for fb, cb in zip(b.family.members, b.coeffs):
            if cb == 0:
                continue
            term = product(fa, fb, l_out)
            for i, c in enumerate(term.coeffs):
                out[i] += ca * cb * c
    return LinearCombination(fam, tuple(out))


def expand(vec: DensityVector, t: int) -> DensityVector:
    """Chain-rule expansion into the basis of size t >= vec size."""
    if t < vec.basis.size:
        raise BasisMismatchError("target size smaller than source size")
    if t > graphs.MAX_VERTICES:
        raise GraphSizeError(t)
    if t == vec.basis.size:
        return vec
    target = graph_basis(t, vec.basis.l)
    coeffs = []
    for h in target.members:
        s = ZERO
        for j, c in zip(vec.basis.members, vec.coeffs):
            if c != 0:
                s += c * graphs.induced_density(j, h)
        coeffs.append(s)
    return DensityVector(target, tuple(coeffs))


def expand_flag(lin: LinearCombination, l_out: int) -> LinearCombination:
    """Chain-rule expansion of a flag combination into size l_out."""
    if l_out < lin.family.size:
        raise FlagTypeError("target size smaller than source size")
    if l_out == lin.family.size:
        return lin
    fam = flag_family(lin.family.type, l_out)
    out = []
    for host in fam.members:
        s = ZERO
        for f, c in zip(lin.family.members, lin.coeffs):
            if c != 0:
                s += c * p_density([f], host)
        out.append(s)
    return LinearCombination(fam, tuple(out))


def graph_density(vec: DensityVector, host: SmallGraph) -> Fraction:
    """Evaluate sum_J vec(J) p(J; host) for a host of size >= basis size."""
    s = ZERO
    for j, c in zip(vec.basis.members, vec.coeffs):
        if c != 0:
            s += c * graphs.induced_density(j, host)
    return s
