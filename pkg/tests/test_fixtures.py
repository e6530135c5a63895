"""Proofreading of the bundled figure transcriptions against exhaustive
enumeration: completeness, distinctness, and admissibility; and consistency
of the shipped certificate files with their programmatic constructors."""

import json

import pytest

from flagforge import algebra as alg
from flagforge import certify, flags, graphs
from flagforge.fixtures import (certificate_path, flag_catalog, graph_catalog,
                                named_graph, type_catalog)
from flagforge.fixtures import certificates as certs


@pytest.mark.parametrize("l,count", [(3, 14), (4, 29)])
def test_graph_catalogs_complete_and_distinct(l, count):
    cat = graph_catalog(l)
    assert len(cat) == count
    codes = {name: graphs.canonical_graph6(g) for name, g in cat.items()}
    assert len(set(codes.values())) == count
    enumerated = {graphs.canonical_graph6(g)
                  for g in flags.enumerate_admissible(5, l)}
    assert set(codes.values()) == enumerated
    for name, g in cat.items():
        assert graphs.independence_number(g) < l, name


def test_l3_catalog_alpha_exactly_two_or_less():
    for name, g in graph_catalog(3).items():
        assert graphs.independence_number(g) <= 2


def test_l4_catalog_restored_entry_alpha():
    # the restored tenth entry has an independent triple, like its immediate
    # neighbors in the figure, while the duplicated drawing does not
    cat = graph_catalog(4)
    assert graphs.independence_number(cat["G9"]) == 3
    assert graphs.independence_number(cat["G10"]) == 3
    assert graphs.independence_number(cat["G11"]) == 3
    assert graphs.independence_number(cat["G25"]) == 2


def test_restored_entry_is_the_unique_missing_class():
    # dropping the restored entry and re-adding the duplicated drawing must
    # leave exactly one enumeration class uncovered, the restored one
    cat = graph_catalog(4)
    printed_duplicate = cat["G25"]
    covered = {graphs.canonical_graph6(g)
               for name, g in cat.items() if name != "G10"}
    all_codes = {graphs.canonical_graph6(g)
                 for g in flags.enumerate_admissible(5, 4)}
    missing = all_codes - covered
    assert missing == {graphs.canonical_graph6(cat["G10"])}
    assert graphs.canonical_graph6(cat["G10"]) != \
        graphs.canonical_graph6(printed_duplicate)


def test_w_graph():
    w = named_graph("W")
    assert w.n == 5
    assert len(w.edges()) == 7
    assert graphs.independence_number(w) == 2


@pytest.mark.parametrize("l,names", [
    (3, {"dot": 7, "tau1": 4, "tau2": 8}),
    (4, {"dot": 7, "tau1": 4, "tau2": 8}),
])
def test_flag_catalogs_are_valid_and_injective(l, names):
    for type_name, expected in names.items():
        cat = flag_catalog(l, type_name)
        assert len(cat) == expected
        by_size = {}
        for name, f in cat.items():
            by_size.setdefault(f.n, []).append((name, f))
        for size, entries in by_size.items():
            fam = alg.flag_family(type_catalog(l)[type_name], size)
            idx = [fam.index_of(f) for _, f in entries]
            assert len(set(idx)) == len(idx), (l, type_name, size)


def test_named_tau2_flags_cover_family_l3():
    tau2 = type_catalog(3)["tau2"]
    fam = alg.flag_family(tau2, 4)
    cat = flag_catalog(3, "tau2")
    covered = {fam.index_of(f) for f in cat.values()}
    assert covered == set(range(8))


def test_named_dot_flags_l4_cover_five_of_six():
    dot4 = type_catalog(4)["dot"]
    fam = alg.flag_family(dot4, 3)
    cat = flag_catalog(4, "dot")
    covered = {fam.index_of(f) for f in cat.values() if f.n == 3}
    assert len(covered) == 5
    assert len(fam) == 6
    # the uncovered member is the path labeled at its center
    (uncovered,) = set(range(6)) - covered
    m = fam.members[uncovered]
    assert len(m.graph.edges()) == 2
    assert m.graph.degree(m.labeled[0]) == 2


def test_shipped_certificates_match_builders():
    for name, builder in certs.BUILDERS.items():
        shipped = json.loads(certificate_path(f"{name}.json").read_text())
        assert shipped == certify.certificate_to_json_obj(builder()), name


def test_shipped_certificates_verify():
    for name in certs.BUILDERS:
        cert = certify.certificate_from_json_obj(
            json.loads(certificate_path(f"{name}.json").read_text()))
        assert certify.verify(cert).passed, name
