"""Construction of the bundled certificates from the named-flag catalogs.

Each certificate is a nonnegative combination of averaged squares of flag
combinations; the square vectors are stated over named figure flags and are
mapped here onto canonical flag-family indices.  The JSON files shipped under
``data/certificates/`` are generated from these constructors (see the
``make-cert`` CLI subcommand) and tests assert they stay in sync.
"""

from __future__ import annotations

from fractions import Fraction

from .. import fixtures
from ..algebra import flag_family
from ..certify import Certificate, SquareExpression
from ..graphs import complete_graph

F = Fraction


def _vector(l: int, type_name: str, size: int, coeffs: dict[str, Fraction]):
    type_ = fixtures.type_catalog(l)[type_name]
    fam = flag_family(type_, size)
    named = fixtures.flag_catalog(l, type_name)
    vec = [F(0)] * len(fam)
    for name, c in coeffs.items():
        vec[fam.index_of(named[name])] += F(c)
    return type_, tuple(vec)


def _square(l, type_name, size, *weighted_vectors):
    terms = []
    type_ = None
    for mult, coeffs in weighted_vectors:
        type_, vec = _vector(l, type_name, size, coeffs)
        terms.append((F(mult), vec))
    return SquareExpression(type_, size, tuple(terms))


def triangles_l3() -> Certificate:
    """Triangle minimization with independence number < 3; bound 1/4."""
    sq = _square(3, "dot", 2, (F(3, 4), {"rho": 1, "rhobar": -1}))
    return Certificate(
        target=complete_graph(3), forbidden_l=3, t=3,
        squares=(sq,), coeffs=(F(1),), bound=F(1, 4))


def cliques4_l3() -> Certificate:
    """4-clique minimization with independence number < 3; bound 3/25."""
    d1 = _square(3, "tau1", 4,
                 (F(1), {"M2": 1, "M4": 1, "M1": -1, "M3": -1}))
    d2 = _square(3, "tau2", 4,
                 (F(1), {"N1": -3, "N2": -3, "N3": -3, "N4": -3,
                         "N5": 2, "N6": 2, "N7": 2, "N8": 2}))
    d3 = _square(3, "dot", 3,
                 (F(1), {"Z1": 1, "Z2": -2}),
                 (F(1, 16), {"Z2": 6, "Z3": -7, "Z4": 8, "Z5": -6}),
                 (F(11, 80), {"Z2": 2, "Z3": 3, "Z5": -2}))
    return Certificate(
        target=complete_graph(4), forbidden_l=3, t=5,
        squares=(d1, d2, d3),
        coeffs=(F(2), F(2, 25), F(1, 5)),
        bound=F(3, 25))


def triangles_l4() -> Certificate:
    """Triangle minimization with independence number < 4; bound 1/9.

    The last square is (rho - 1/3)^2; the constant expands at flag size 2 as
    (rho + rhobar)/3, giving the vector (2/3) rho - (1/3) rhobar.
    """
    squares = (
        _square(4, "tau1", 4, (F(1), {"M1": 1, "M2": -1})),
        _square(4, "tau1", 4,
                (F(1), {"M1": 3, "M2": -3, "M3": -10, "M4": 10})),
        _square(4, "tau2", 4, (F(1), {"N1": -3, "N2": -1, "N3": 3, "N4": 3})),
        _square(4, "tau2", 4,
                (F(1), {"N1": -20, "N2": -20, "N3": 11, "N4": 11,
                        "N5": 9, "N6": 9})),
        _square(4, "tau2", 4,
                (F(1), {"N1": -19, "N2": -15, "N3": 15, "N4": 15,
                        "N5": 4, "N6": 4, "N7": 15})),
        _square(4, "tau2", 4,
                (F(1), {"N1": -6, "N2": -14, "N3": -2, "N4": -2,
                        "N5": 8, "N6": 8, "N7": -5, "N8": 10})),
        _square(4, "dot", 3, (F(1), {"Z1": -2, "Z2": 1})),
        _square(4, "dot", 3, (F(1), {"Z1": -2, "Z2": -1, "Z3": 4})),
        _square(4, "dot", 3, (F(1), {"Z1": 7, "Z2": -4, "Z3": 1, "Z4": 3})),
        _square(4, "dot", 3, (F(1), {"Z1": 8, "Z2": -2, "Z3": -9, "Z5": 10})),
        _square(4, "dot", 2, (F(1), {"rho": F(2, 3), "rhobar": F(-1, 3)})),
    )
    scale = F(1, 2**5 * 3 * 1009)
    raw = (F(263984), F(4720), F(4432), F(412192, 371), F(72789, 112),
           F(4655105, 3392), F(1185), F(8437), F(3440), F(856), F(1128))
    return Certificate(
        target=complete_graph(3), forbidden_l=4, t=5,
        squares=squares,
        coeffs=tuple(scale * c for c in raw),
        bound=F(1, 9))


BUILDERS = {
    "triangles_l3": triangles_l3,
    "cliques4_l3": cliques4_l3,
    "triangles_l4": triangles_l4,
}
