from fractions import Fraction as F

import pytest

from flagforge import probsearch as ps


def paper():
    return ps.paper_params()


def test_check_mass_paper_tuple():
    ok, margin = ps.check_mass(paper())
    assert ok
    assert margin > 0


def test_check_mass_gross_violation():
    # dense p with a demanding target: the cubic term swamps the budget
    bad = ps.SearchParams(l=10, m=100, p=F(1, 2), s=1, t=1)
    ok, margin = ps.check_mass(bad)
    assert not ok
    assert margin < 0
    # at l=3 the same density easily fits under the budget
    ok3, _ = ps.check_mass(ps.SearchParams(l=3, m=100, p=F(1, 2), s=1, t=1))
    assert ok3


def test_mass_margin_flips_exactly_at_threshold():
    # with everything else fixed, the margin is linear in s: the sign flips
    # exactly when s crosses rhs - (lhs - s)
    p = paper()
    base_ok, margin = ps.check_mass(p)
    assert base_ok
    slack = margin  # integer shifts of s change the margin one-for-one
    s_star = p.s + slack
    assert s_star.denominator != 1 or True
    import math
    s_hi = p.s + math.floor(slack)
    s_over = p.s + math.floor(slack) + 1
    ok_hi, m_hi = ps.check_mass(ps.SearchParams(p.l, p.m, p.p, s_hi, p.t))
    ok_over, m_over = ps.check_mass(ps.SearchParams(p.l, p.m, p.p, s_over, p.t))
    assert ok_hi
    assert not ok_over
    assert m_hi == margin - math.floor(slack)
    assert m_over == m_hi - 1


def test_double_check_mass_with_cleared_denominators():
    # independent big-integer route: multiply out all denominators
    p = paper()
    from math import comb
    num, den = p.p.numerator, p.p.denominator
    lhs = (comb(p.m, 2) * num * den**2 + comb(p.m, 3) * num**3
           + (p.s + p.t) * den**3)
    rhs_frac = F(p.m**3, 6 * (p.l - 1) ** 2) - F(p.m, 6)
    # compare lhs/den^3 <= rhs
    lhs_scaled = lhs * rhs_frac.denominator
    rhs_scaled = rhs_frac.numerator * den**3
    assert (lhs_scaled <= rhs_scaled) == ps.check_mass(p)[0]


def test_paper_tuple_suitable():
    rep = ps.verify_params(paper())
    assert rep.suitable
    assert rep.prob_upper < 1
    assert rep.b2_exact == ps._b2_exact(paper())


def test_probability_false_case():
    bad = ps.SearchParams(l=3, m=10, p=F(1, 2), s=2, t=2)
    ok, total, b1, b2, b3 = ps.check_probability(bad)
    assert not ok
    assert b1 >= 1


def test_large_allowances_reduce_to_b1():
    p = paper()
    huge = ps.SearchParams(p.l, p.m, p.p, 10**9, 10**9)
    _, _, b1, b2, b3 = ps.check_probability(huge)
    assert b2 < F(1, 10**6)
    assert b3 < F(1, 10**6)


def test_monotone_in_allowances():
    p = paper()
    for s2, t2 in [(p.s + 5000, p.t), (p.s, p.t + 5000),
                   (p.s * 2, p.t * 2)]:
        q = ps.SearchParams(p.l, p.m, p.p, s2, t2)
        assert ps._b2_exact(q) <= ps._b2_exact(p)
        assert ps._b3_exact(q) <= ps._b3_exact(p)


def test_precision_doubling_never_flips_true():
    p = paper()
    rep256 = ps.verify_params(p, precision=256)
    rep512 = ps.verify_params(p, precision=512)
    assert rep256.suitable and rep512.suitable
    assert rep512.prob_upper <= rep256.prob_upper
    rep1024 = ps.verify_params(p, precision=1024)
    assert rep1024.prob_upper <= rep512.prob_upper


def test_mass_failure_skips_probability():
    bad = ps.SearchParams(l=10, m=100, p=F(1, 2), s=1, t=1)
    rep = ps.verify_params(bad)
    assert not rep.suitable
    assert rep.prob_ok is None
    assert rep.b1_upper is None


def test_perturbed_paper_tuple():
    # regression record: scaling p by 3/2 breaks suitability
    p = paper()
    perturbed = ps.SearchParams(p.l, p.m, p.p * F(3, 2), p.s, p.t)
    rep = ps.verify_params(perturbed)
    assert not rep.suitable


def test_parameter_validation():
    with pytest.raises(ps.ParameterError):
        ps.SearchParams(l=2, m=10, p=F(1, 2), s=1, t=1)
    with pytest.raises(ps.ParameterError):
        ps.SearchParams(l=3, m=3, p=F(1, 2), s=1, t=1)
    with pytest.raises(ps.ParameterError):
        ps.SearchParams(l=3, m=10, p=F(2), s=1, t=1)
    with pytest.raises(ps.PrecisionError):
        ps.check_probability(paper(), precision=32)


def test_search_finds_paper_tuple():
    p = paper()
    grid = ps.SearchGrid(l=(p.l,), m=(p.m,), p=(F(1, 2), p.p),
                         s=(p.s,), t=(p.t,))
    found = ps.search(grid)
    assert found is not None
    params, rep = found
    assert params.p == p.p
    assert rep.suitable


def test_search_empty_and_budget():
    empty = ps.SearchGrid(l=(), m=(), p=(), s=(), t=())
    assert ps.search(empty) is None
    p = paper()
    grid = ps.SearchGrid(l=(p.l,), m=(p.m,), p=(F(1, 2), F(1, 3), p.p),
                         s=(p.s,), t=(p.t,))
    with pytest.raises(ps.BudgetExhausted):
        ps.search(grid, budget=2)


def test_search_parallel_matches_sequential():
    p = paper()
    grid = ps.SearchGrid(l=(p.l,), m=(p.m,), p=(F(1, 2), F(1, 3), p.p),
                         s=(p.s,), t=(p.t,))
    seq = ps.search(grid)
    par = ps.search(grid, workers=2)
    assert seq[0] == par[0]
    assert seq[1] == par[1]
    with pytest.raises(ps.BudgetExhausted):
        ps.search(grid, budget=2, workers=2)


def test_grid_json():
    obj = {"l": [2074], "m": [164397], "p": ["51707/10000000"],
           "s": [14000], "t": [35000]}
    grid = ps.grid_from_json_obj(obj)
    assert grid.size() == 1
    assert next(iter(grid)) == paper()


def test_grid_json_ranges():
    obj = {"l": {"start": 2070, "stop": 2080, "step": 2},
           "m": [164397], "p": ["51707/10000000"],
           "s": {"start": 14000, "stop": 14000}, "t": [35000]}
    grid = ps.grid_from_json_obj(obj)
    assert grid.l == (2070, 2072, 2074, 2076, 2078, 2080)
    assert grid.s == (14000,)
    assert grid.size() == 6
    with pytest.raises(ps.ParameterError):
        ps.grid_from_json_obj({"l": {"start": 1, "stop": 2, "step": 0},
                               "m": [10], "p": ["1/2"], "s": [1], "t": [1]})


def test_report_json():
    rep = ps.verify_params(paper())
    obj = rep.to_json_obj()
    assert obj["suitable"] is True
    assert obj["params"]["l"] == 2074
    assert float(obj["prob_upper_decimal"]) < 1
