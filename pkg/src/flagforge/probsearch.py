"""Certified evaluation of the random-blow-up counterexample conditions.

A parameter tuple (l, m, p, s, t) is suitable when a random graph argument
produces, with positive probability, an m-vertex graph whose balanced
blow-up beats the disjoint-clique construction.  Two checks are required:

  mass:        C(m,2) p + C(m,3) p^3 + s + t  <=  m^3/(6(l-1)^2) - m/6,
               decided in exact rational arithmetic;

  probability: B1 + B2 + B3 (1 - B2) < 1, where
               B1 = (m e (1-p)^((l-1)/2) / l)^l        (union bound),
               B2 = sig2_e / (s^2 + sig2_e),            sig2_e = C(m,2) p (1-p),
               B3 = sig2_t / (t^2 + sig2_t),
               sig2_t = C(m,3) p^3 [(1-p^3) + 3(m-3) p^2 (1-p)].

B2 and B3 are exact rationals.  B1 involves a half-integer power of 1-p and
the constant e, so it is bounded from above in mpfr arithmetic with all
roundings directed upward (default 256 bits); the certified upper bound is
then converted exactly to a rational before the final comparison with 1.
Raising the precision can only shrink the bound, never flip true to false.
This policy is stricter than plain evaluation and may reject tuples very
close to the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Optional

import gmpy2

DEFAULT_PRECISION = 256

# 60 significant digits, final digit rounded up, so this exceeds e.
_E_UPPER = Fraction(
    271828182845904523536028747135266249775724709369995957496697,
    10**59)


class PrecisionError(ArithmeticError):
    """The directed-rounding evaluation produced a non-finite value."""


class ParameterError(ValueError):
    """Parameter tuple violates the domain constraints."""


@dataclass(frozen=True)
class SearchParams:
    l: int
    m: int
    p: Fraction
    s: int
    t: int

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ParameterError("edge probability must lie in (0,1)")
        if self.l < 3:
            raise ParameterError("independence target must be at least 3")
        if self.m <= self.l:
            raise ParameterError("base order must exceed the target")
        if self.s <= 0 or self.t <= 0:
            raise ParameterError("deviation allowances must be positive")


@dataclass(frozen=True)
class BoundReport:
    params: SearchParams
    mass_ok: bool
    mass_margin: Fraction
    b1_upper: Optional[Fraction]
    b2_exact: Optional[Fraction]
    b3_exact: Optional[Fraction]
    prob_upper: Optional[Fraction]
    prob_ok: Optional[bool]

    @property
    def suitable(self) -> bool:
        return self.mass_ok and bool(self.prob_ok)

    def to_json_obj(self) -> dict:
        def dec20(x: Optional[Fraction]) -> Optional[str]:
            if x is None:
                return None
            return mpfr_str(x, 20)

        return {
            "params": {"l": self.params.l, "m": self.params.m,
                       "p": str(self.params.p), "s": self.params.s,
                       "t": self.params.t},
            "mass_ok": self.mass_ok,
            "mass_margin": str(self.mass_margin),
            "mass_margin_decimal": dec20(self.mass_margin),
            "b1_upper_decimal": dec20(self.b1_upper),
            "b2_decimal": dec20(self.b2_exact),
            "b3_decimal": dec20(self.b3_exact),
            "prob_upper_decimal": dec20(self.prob_upper),
            "prob_ok": self.prob_ok,
            "suitable": self.suitable,
        }


def mpfr_str(x: Fraction, digits: int) -> str:
    with gmpy2.context(precision=4 * digits):
        v = gmpy2.mpfr(x.numerator) / gmpy2.mpfr(x.denominator)
        return f"{v:.{digits}g}"


def check_mass(params: SearchParams) -> tuple[bool, Fraction]:
    """Exact comparison of expected mass plus allowances with the budget."""
    m, p = params.m, params.p
    lhs = comb(m, 2) * p + comb(m, 3) * p**3 + params.s + params.t
    rhs = Fraction(m**3, 6 * (params.l - 1) ** 2) - Fraction(m, 6)
    margin = rhs - lhs
    return margin >= 0, margin


def _b2_exact(params: SearchParams) -> Fraction:
    var = comb(params.m, 2) * params.p * (1 - params.p)
    return var / (params.s**2 + var)


def _b3_exact(params: SearchParams) -> Fraction:
    m, p = params.m, params.p
    var = comb(m, 3) * p**3 * ((1 - p**3) + 3 * (m - 3) * p**2 * (1 - p))
    return var / (params.t**2 + var)


def _b1_upper(params: SearchParams, precision: int) -> Fraction:
    """Certified upper bound of (m e (1-p)^((l-1)/2) / l)^l.

    All operations run under round-toward-plus-infinity; every factor is
    positive and the power is increasing, so upward rounding is safe.  The
    result, a dyadic mpfr value, converts exactly to a Fraction.
    """
    with gmpy2.context(precision=precision, round=gmpy2.RoundUp):
        q = 1 - params.p
        base = gmpy2.mpfr(q.numerator) / gmpy2.mpfr(q.denominator)
        expo = gmpy2.mpfr(params.l - 1) / gmpy2.mpfr(2)
        powered = base ** expo
        e_up = (gmpy2.mpfr(_E_UPPER.numerator)
                / gmpy2.mpfr(_E_UPPER.denominator))
        inner = gmpy2.mpfr(params.m) * e_up * powered / gmpy2.mpfr(params.l)
        value = inner ** params.l
        if not gmpy2.is_finite(value):
            raise PrecisionError(
                "directed-rounding evaluation overflowed; raise precision")
        num, den = value.as_integer_ratio()
    return Fraction(num, den)


def check_probability(params: SearchParams,
                      precision: int = DEFAULT_PRECISION
                      ) -> tuple[bool, Fraction, Fraction, Fraction, Fraction]:
    """Certified upper bound of the failure probability.

    Returns (ok, total_upper, b1_upper, b2, b3) where the events' bounds are
    combined as B1 + B2 + B3 (1 - B2); the combination is increasing in each
    bound, so plugging in upper bounds is sound.
    """
    if precision < 64:
        raise PrecisionError("precision below 64 bits is not certified")
    b1 = _b1_upper(params, precision)
    b2 = _b2_exact(params)
    b3 = _b3_exact(params)
    total = b1 + b2 + b3 * (1 - b2)
    return total < 1, total, b1, b2, b3


def verify_params(params: SearchParams,
                  precision: int = DEFAULT_PRECISION) -> BoundReport:
    """Both checks with full diagnostics; the probability check is skipped
    when the mass check already fails."""
    mass_ok, margin = check_mass(params)
    if not mass_ok:
        return BoundReport(params, False, margin, None, None, None, None, None)
    ok, total, b1, b2, b3 = check_probability(params, precision)
    return BoundReport(params, True, margin, b1, b2, b3, total, ok)


def paper_params() -> SearchParams:
    """The published suitable tuple for the triangle problem."""
    return SearchParams(l=2074, m=164397, p=Fraction(51707, 10**7),
                        s=14000, t=35000)


@dataclass(frozen=True)
class SearchGrid:
    l: tuple[int, ...]
    m: tuple[int, ...]
    p: tuple[Fraction, ...]
    s: tuple[int, ...]
    t: tuple[int, ...]

    def __iter__(self) -> Iterator[SearchParams]:
        # lexicographic in the declared order of each range
        for l in self.l:
            for m in self.m:
                for p in self.p:
                    for s in self.s:
                        for t in self.t:
                            yield SearchParams(l, m, p, s, t)

    def size(self) -> int:
        return (len(self.l) * len(self.m) * len(self.p)
                * len(self.s) * len(self.t))


def _int_range(spec) -> tuple[int, ...]:
    """Accept either an explicit list or {"start", "stop", "step"} with an
    inclusive stop."""
    if isinstance(spec, dict):
        step = int(spec.get("step", 1))
        if step <= 0:
            raise ParameterError("range step must be positive")
        return tuple(range(int(spec["start"]), int(spec["stop"]) + 1, step))
    return tuple(int(x) for x in spec)


def grid_from_json_obj(obj: dict) -> SearchGrid:
    return SearchGrid(
        l=_int_range(obj["l"]),
        m=_int_range(obj["m"]),
        p=tuple(Fraction(str(x)) for x in obj["p"]),
        s=_int_range(obj["s"]),
        t=_int_range(obj["t"]),
    )


class BudgetExhausted(RuntimeError):
    def __init__(self, examined: int):
        self.examined = examined
        super().__init__(f"search budget exhausted after {examined} tuples")


def _search_job(args) -> BoundReport:
    params, precision = args
    return verify_params(params, precision)


def search(grid: SearchGrid, budget: Optional[int] = None,
           precision: int = DEFAULT_PRECISION, workers: int = 1
           ) -> Optional[tuple[SearchParams, BoundReport]]:
    """Returns the first suitable tuple in grid order with its report, or
    None when the grid contains none.

    With workers > 1, batches are evaluated in a process pool but "first"
    still means first in grid order (ordered reduction), so the result is
    identical to the sequential scan.
    """
    from itertools import islice

    examined = 0
    it = iter(grid)
    if workers <= 1:
        for params in it:
            if budget is not None and examined >= budget:
                raise BudgetExhausted(examined)
            examined += 1
            report = verify_params(params, precision)
            if report.suitable:
                return params, report
        return None
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        while True:
            batch = list(islice(it, 8 * workers))
            if not batch:
                return None
            if budget is not None and examined + len(batch) > budget:
                batch = batch[:budget - examined]
                if not batch:
                    raise BudgetExhausted(examined)
            reports = list(pool.map(_search_job,
                                    [(p, precision) for p in batch]))
            for params, report in zip(batch, reports):
                examined += 1
                if report.suitable:
                    return params, report
            if budget is not None and examined >= budget:
                raise BudgetExhausted(examined)
