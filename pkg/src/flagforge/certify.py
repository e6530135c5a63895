"""Exact verification of rational sum-of-squares certificates.

A certificate claims that the density of a target graph J, among admissible
graphs, exceeds a bound b: subtracting nonnegative multiples of averaged
squares from the expansion of J must leave every size-t basis coefficient at
least b.  Everything here is checked coefficient-by-coefficient in exact
rationals; there is no floating-point verification mode.

Also provided: an exact PSD decision for rational symmetric matrices (with a
sum-of-squares witness on success and a negative-direction witness on
failure) and the specialized solver for the degenerate local profile system
of the 4-clique problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from . import algebra, graphs
from .algebra import (DensityVector, LinearCombination, ZERO, ONE,
                      expand, flag_family, graph_basis, graph_vector,
                      zero_vector)
from .flags import TypeGraph
from .graphs import SmallGraph


class CertificateError(ValueError):
    """Malformed certificate or infeasible square sizes."""


@dataclass(frozen=True)
class SquareExpression:
    """Sum of multiplier-weighted squares of flag combinations of one type."""

    type: TypeGraph
    flag_size: int
    terms: tuple[tuple[Fraction, tuple[Fraction, ...]], ...]

    def __post_init__(self):
        dim = len(flag_family(self.type, self.flag_size))
        for mult, vec in self.terms:
            if len(vec) != dim:
                raise CertificateError(
                    "term vector length does not match flag family")

    @property
    def product_size(self) -> int:
        return 2 * self.flag_size - self.type.k


@dataclass(frozen=True)
class Certificate:
    target: SmallGraph
    forbidden_l: int
    t: int
    squares: tuple[SquareExpression, ...]
    coeffs: tuple[Fraction, ...]
    bound: Fraction

    def __post_init__(self):
        if len(self.coeffs) != len(self.squares):
            raise CertificateError("one coefficient required per square")
        if any(c < 0 for c in self.coeffs):
            raise CertificateError("square coefficients must be nonnegative")
        for sq in self.squares:
            if sq.type.l != self.forbidden_l:
                raise CertificateError("square type built for a different l")
            if sq.product_size > self.t:
                raise CertificateError(
                    f"square of flags of size {sq.flag_size} over a type of "
                    f"size {sq.type.k} cannot expand at t={self.t}")


@dataclass(frozen=True)
class VerificationReport:
    residual: DensityVector
    min_coefficient: Fraction
    bound: Fraction
    passed: bool
    per_square: tuple[DensityVector, ...]

    def to_json_obj(self) -> dict:
        return {
            "passed": self.passed,
            "bound": str(self.bound),
            "min_residual": str(self.min_coefficient),
            "residuals": [
                {"graph": graphs.canonical_graph6(g), "value": str(c)}
                for g, c in zip(self.residual.basis.members,
                                self.residual.coeffs)
            ],
        }

    def table(self) -> str:
        lines = [f"{'graph':<10} residual"]
        for g, c in zip(self.residual.basis.members, self.residual.coeffs):
            lines.append(f"{graphs.canonical_graph6(g):<10} {c}")
        lines.append(f"min residual: {self.min_coefficient}  "
                     f"bound: {self.bound}  "
                     f"{'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def expand_square(sq: SquareExpression, t: int) -> DensityVector:
    """Average each squared combination and expand into the size-t basis."""
    if sq.product_size > t:
        raise CertificateError("expansion size too small for this square")
    fam = flag_family(sq.type, sq.flag_size)
    total = zero_vector(graph_basis(t, sq.type.l))
    for mult, vec in sq.terms:
        lin = LinearCombination(fam, vec)
        prod = algebra.product_combinations(lin, lin, sq.product_size)
        total = total + expand(algebra.average(prod), t).scale(mult)
    return total


def verify(cert: Certificate) -> VerificationReport:
    """Exact residual check: expansion of the target minus the certificate."""
    target = expand(graph_vector(cert.target, cert.forbidden_l), cert.t)
    per_square = tuple(expand_square(sq, cert.t) for sq in cert.squares)
    residual = target
    for c, ev in zip(cert.coeffs, per_square):
        residual = residual - ev.scale(c)
    min_c = min(residual.coeffs)
    return VerificationReport(residual, min_c, cert.bound,
                              min_c >= cert.bound, per_square)


# -- exact PSD decision ------------------------------------------------------


@dataclass(frozen=True)
class PSDResult:
    is_psd: bool
    # on success: Q = sum d_i * u_i u_i^T with d_i > 0
    sos_terms: Optional[tuple[tuple[Fraction, tuple[Fraction, ...]], ...]]
    # on failure: x with x^T Q x < 0
    negative_witness: Optional[tuple[Fraction, ...]]


def check_psd(q: Sequence[Sequence[Fraction]]) -> PSDResult:
    """Fraction-free symmetric decomposition with pivoting.

    Eliminates nonzero diagonal pivots; a negative pivot, or a zero diagonal
    facing a nonzero off-diagonal entry, yields an explicit direction of
    negative curvature, lifted back through the eliminations.
    """
    n = len(q)
    a = [[Fraction(q[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise CertificateError("matrix is not symmetric")

    steps: list[tuple[int, list[Fraction], Fraction]] = []  # (pivot, col, d)
    remaining = list(range(n))

    def lift(z: list[Fraction]) -> tuple[Fraction, ...]:
        x = z[:]
        for p, col, d in reversed(steps):
            s = sum(col[i] * x[i] for i in range(n))
            x[p] -= s / d
        return tuple(x)

    while remaining:
        pivot = None
        for p in remaining:
            if a[p][p] != 0:
                pivot = p
                break
        if pivot is None:
            off = None
            for i in remaining:
                for j in remaining:
                    if i < j and a[i][j] != 0:
                        off = (i, j)
                        break
                if off:
                    break
            if off is None:
                break  # residual is zero: done
            i, j = off
            z = [ZERO] * n
            z[i] = ONE
            z[j] = -ONE if a[i][j] > 0 else ONE
            return PSDResult(False, None, lift(z))
        d = a[pivot][pivot]
        if d < 0:
            z = [ZERO] * n
            z[pivot] = ONE
            return PSDResult(False, None, lift(z))
        col = [a[i][pivot] for i in range(n)]
        steps.append((pivot, col, d))
        for i in remaining:
            for j in remaining:
                a[i][j] -= col[i] * col[j] / d
        remaining.remove(pivot)

    sos = tuple((d, tuple(c / d for c in col)) for _, col, d in steps)
    return PSDResult(True, sos, None)


def square_from_psd(q: Sequence[Sequence[Fraction]], type_: TypeGraph,
                    flag_size: int) -> SquareExpression:
    """Convert a PSD block matrix into an equivalent sum-of-squares."""
    res = check_psd(q)
    if not res.is_psd:
        raise CertificateError("matrix is not positive semidefinite")
    return SquareExpression(type_, flag_size, res.sos_terms)


# -- local profile system ----------------------------------------------------


class SystemRankError(ValueError):
    """The linear part of the profile system is rank deficient."""


class IrrationalRootError(ValueError):
    """The eliminated quadratic has an irrational discriminant."""

    def __init__(self, disc: Fraction):
        self.discriminant = disc
        super().__init__(f"discriminant {disc} is not a rational square")


@dataclass(frozen=True)
class LocalProfileSystem:
    """Four linear conditions plus one quadratic over a 5-flag profile.

    ``linear`` holds rows (c_1..c_5, rhs); ``quadratic`` is a symmetric
    matrix M with the condition p^T M p = 0.
    """

    linear: tuple[tuple[Fraction, ...], ...]
    quadratic: tuple[tuple[Fraction, ...], ...]


def default_profile_system() -> LocalProfileSystem:
    """Vanishing conditions satisfied by vertex profiles of asymptotically
    optimal graphs in the 4-clique problem: the three square roots of the
    dot-type certificate block, normalization, and the degree-two identity
    4*Z2*(Z3+Z5) = (Z4+Z1)^2 applied to the profile."""
    F = Fraction
    lin = (
        (F(1), F(-2), F(0), F(0), F(0), F(0)),
        (F(0), F(6), F(-7), F(8), F(-6), F(0)),
        (F(0), F(2), F(3), F(0), F(-2), F(0)),
        (F(1), F(1), F(1), F(1), F(1), F(1)),
    )
    m = [[F(0)] * 5 for _ in range(5)]
    # 4 p2 (p3 + p5) - (p4 + p1)^2
    m[1][2] = m[2][1] = F(2)
    m[1][4] = m[4][1] = F(2)
    m[0][0] = F(-1)
    m[3][3] = F(-1)
    m[0][3] = m[3][0] = F(-1)
    quad = tuple(tuple(row) for row in m)
    return LocalProfileSystem(lin, quad)


def _sqrt_fraction(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def solve_local_profile(system: Optional[LocalProfileSystem] = None
                        ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Eliminate the linear conditions to one parameter and solve the
    quadratic exactly; returns both root profiles, lexicographically sorted.
    """
    if system is None:
        system = default_profile_system()
    rows = [list(r) for r in system.linear]
    if len(rows) != 4 or any(len(r) != 6 for r in rows):
        raise CertificateError("profile system needs 4 linear rows over 5 vars")

    # Gauss-Jordan over the 5 unknowns; rank must be 4.
    piv_cols = []
    r = 0
    for c in range(5):
        sel = None
        for i in range(r, 4):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(4):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == 4:
            break
    if r < 4:
        raise SystemRankError("linear part has rank below 4")
    free = next(c for c in range(5) if c not in piv_cols)

    # affine line p = base + t * direction
    base = [ZERO] * 5
    direction = [ZERO] * 5
    direction[free] = ONE
    for i, c in enumerate(piv_cols):
        base[c] = rows[i][5]
        direction[c] = -rows[i][free]

    m = system.quadratic
    def qform(u, v):
        return sum(m[i][j] * u[i] * v[j] for i in range(5) for j in range(5))

    qa = qform(direction, direction)
    qb = 2 * qform(base, direction)
    qc = qform(base, base)
    if qa == 0:
        raise CertificateError("eliminated equation is not quadratic")
    disc = qb * qb - 4 * qa * qc
    root = _sqrt_fraction(disc)
    if root is None:
        raise IrrationalRootError(disc)
    sols = []
    for s in (root, -root):
        t = (-qb + s) / (2 * qa)
        sols.append(tuple(b + t * d for b, d in zip(base, direction)))
    sols.sort()
    return sols[0], sols[1]


def degree_of_profile(profile: Sequence[Fraction]) -> Fraction:
    """Limiting degree fraction of a vertex with the given dot-flag profile,
    via the edge-flag expansion rho = Z1/2 + Z3 + Z4/2 + Z5."""
    p = [Fraction(x) for x in profile]
    if len(p) != 5:
        raise CertificateError("profile must have 5 entries")
    return p[0] / 2 + p[2] + p[3] / 2 + p[4]


# -- JSON interchange ---------------------------------------------------------


def certificate_to_json_obj(cert: Certificate) -> dict:
    return {
        "target": graphs.to_graph6(cert.target),
        "forbidden_l": cert.forbidden_l,
        "t": cert.t,
        "squares": [
            {
                "type": graphs.to_graph6(sq.type.sigma) if sq.type.sigma
                        else "",
                "flag_size": sq.flag_size,
                "terms": [
                    {"mult": str(mult), "vector": [str(c) for c in vec]}
                    for mult, vec in sq.terms
                ],
            }
            for sq in cert.squares
        ],
        "coeffs": [str(c) for c in cert.coeffs],
        "bound": str(cert.bound),
    }


def certificate_from_json_obj(obj: dict) -> Certificate:
    l = obj["forbidden_l"]
    squares = []
    for s in obj["squares"]:
        sigma = graphs.from_graph6(s["type"]) if s["type"] else None
        type_ = TypeGraph(sigma, l)
        terms = tuple(
            (Fraction(t["mult"]), tuple(Fraction(c) for c in t["vector"]))
            for t in s["terms"])
        squares.append(SquareExpression(type_, s["flag_size"], terms))
    return Certificate(
        target=graphs.from_graph6(obj["target"]),
        forbidden_l=l,
        t=obj["t"],
        squares=tuple(squares),
        coeffs=tuple(Fraction(c) for c in obj["coeffs"]),
        bound=Fraction(obj["bound"]),
    )


def load_certificate(path) -> Certificate:
    with open(path) as fh:
        return certificate_from_json_obj(json.load(fh))


def save_certificate(cert: Certificate, path):
    with open(path, "w") as fh:
        json.dump(certificate_to_json_obj(cert), fh, indent=1, sort_keys=True)
        fh.write("\n")
