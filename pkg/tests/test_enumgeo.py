import json
from fractions import Fraction

import pytest

from qmodular.enumgeo import (GAMMA1_GRAPH, GAMMA2_GRAPH, THETA_GRAPH, HurwitzCache,
                              HurwitzRecord, Multigraph, abelian_series, amplitude_poly,
                              compare_mirror_oracle, graph_amplitude, hirzebruch_series,
                              hurwitz_cost, hurwitz_oracle, hurwitz_tuple_count,
                              iter_hurwitz_tuples, k3_series, mirror_F, mirror_F_poly,
                              multigraph_automorphisms, propagator_coeffs, validate_trivalent)
from qmodular.errors import BudgetExceeded
from qmodular.forms import eisenstein, sigma
from qmodular.ringstruct import decompose_quasimodular


def test_graph_data():
    assert THETA_GRAPH.genus == 2 and validate_trivalent(THETA_GRAPH, 2)
    for G in (GAMMA1_GRAPH, GAMMA2_GRAPH):
        assert G.genus == 3 and validate_trivalent(G, 3)
    assert not validate_trivalent(Multigraph(2, ((0, 0), (0, 1), (1, 1))), 3)


def test_automorphism_counts():
    assert multigraph_automorphisms(THETA_GRAPH) == 12
    assert multigraph_automorphisms(GAMMA1_GRAPH) == 16
    assert multigraph_automorphisms(GAMMA2_GRAPH) == 24


def test_automorphisms_of_loops():
    # dumbbell: two loops joined by an edge; swap ends (2) and flip each loop (2 * 2)
    dumbbell = Multigraph(2, ((0, 0), (0, 1), (1, 1)))
    assert multigraph_automorphisms(dumbbell) == 8
    assert dumbbell.genus == 2


def test_multigraph_rejects_bad_vertex():
    with pytest.raises(ValueError):
        Multigraph(2, ((0, 2),))


def test_propagator_coefficients():
    principal, terms = propagator_coeffs(3, 5)
    assert principal == -1
    (p0, c1), (p2, c2), (p4, c3) = terms
    assert (p0, p2, p4) == (0, 2, 4)
    assert c1.coeff(0) == Fraction(1, 12) and c1.coeff(1) == -2
    assert c2.coefficients(0, 3) == [Fraction(-1, 240) * c for c in (1, 240, 2160)]
    assert c3.coeff(0) == Fraction(1, 6048)


def test_theta_amplitude_polynomial():
    p = amplitude_poly("theta")
    assert p.weight == 6
    assert p.terms == {(3, 0, 0): Fraction(10, 103680), (1, 1, 0): Fraction(-6, 103680),
                       (0, 0, 1): Fraction(-4, 103680)}


def test_amplitude_variants_differ_only_in_one_term():
    a = amplitude_poly("gamma1", "printed")
    b = amplitude_poly("gamma1", "alternate")
    diff = (a - b).terms
    scale = Fraction(1, 2 ** 7 * 3 ** 6)
    assert diff == {(0, 3, 0): 6 * scale, (4, 1, 0): -6 * scale}
    with pytest.raises(ValueError):
        amplitude_poly("gamma1", "other")


def test_mirror_genus2_coefficients():
    F = mirror_F(2, 6)
    assert F.coefficients(0, 6) == [0, 0, Fraction(1, 12), Fraction(2, 3), Fraction(5, 2),
                                    Fraction(20, 3)]


def test_mirror_genus3_alternate_reading():
    F = mirror_F(3, 5, "alternate")
    assert F.coefficients(0, 5) == [0, 0, 2, 160, 2448]


def test_mirror_genus3_printed_has_linear_term():
    F = mirror_F(3, 3, "printed")
    assert F.coeff(1) == Fraction(1, 432)


def test_graph_amplitude_is_series_of_poly():
    f = graph_amplitude("gamma2", 10)
    E2, E4 = eisenstein(2, order=10), eisenstein(4, order=10)
    g = (E4 - E2 ** 2) ** 3 / (2 ** 8 * 3 ** 4)
    assert f.coefficients(0, 10) == g.coefficients(0, 10)


def test_mirror_polys_decompose():
    for g, k in ((2, 6), (3, 12)):
        F = mirror_F(g, 40)
        assert decompose_quasimodular(F, k) == mirror_F_poly(g)


def test_hurwitz_small_counts():
    assert hurwitz_tuple_count(1, 1) == 1
    assert hurwitz_oracle(2, 2) == 2
    assert hurwitz_tuple_count(2, 2) == 4


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_genus_one_covers_count_sublattices(d):
    # connected degree-d covers of a torus, weighted by 1/|Aut|: sigma(d)/d
    assert hurwitz_oracle(d, 1) == Fraction(sigma(1, d), d)


@pytest.mark.parametrize("d,g", [(2, 2), (3, 2), (2, 3), (3, 1), (4, 1)])
def test_fast_oracle_matches_exhaustive_search(d, g):
    assert hurwitz_tuple_count(d, g) == sum(1 for _ in iter_hurwitz_tuples(d, g))


def test_genus2_oracle_values():
    assert [hurwitz_oracle(d, 2) for d in range(2, 6)] == [2, 16, 60, 160]


def test_budget():
    assert hurwitz_cost(3, 2) == 36 * 9
    with pytest.raises(BudgetExceeded):
        hurwitz_tuple_count(5, 2, budget=1000)


def test_mirror_oracle_ratio_genus2():
    rows = compare_mirror_oracle(2, range(2, 6))
    assert {r for *_, r in rows} == {Fraction(1, 24)}


def test_mirror_oracle_ratio_genus3_alternate():
    rows = compare_mirror_oracle(3, range(2, 5), "alternate")
    assert [r for *_, r in rows] == [1, 1, 1]


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.json"
    cache = HurwitzCache(path)
    rec = cache.lookup(3, 2)
    assert rec == HurwitzRecord(3, 2, Fraction(16), "oracle", 96)
    doc = json.loads(path.read_text())
    assert doc == {"3,2": {"v": 1, "tuples": 96, "count": "16"}}
    assert HurwitzCache(path).get(3, 2) == rec


def test_cache_version_mismatch_is_recomputed(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text(json.dumps({"2,2": {"v": 0, "tuples": 999, "count": "7"}}))
    cache = HurwitzCache(path)
    assert cache.get(2, 2) is None
    assert cache.lookup(2, 2).count == 2
    assert json.loads(path.read_text())["2,2"]["v"] == 1


def test_corrupt_cache_is_ignored(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text("{not json")
    assert HurwitzCache(path).lookup(2, 2).count == 2


def test_k3_series():
    assert k3_series(0, 3).coefficients(-1, 3) == [1, 24, 324, 3200]
    assert k3_series(1, 4).coefficients(0, 4) == [1, 30, 480, 5460]
    with pytest.raises(ValueError):
        k3_series(-1)


def test_abelian_series():
    f = abelian_series(2, 6)
    assert f.coefficients(0, 6) == [n * n * sigma(1, n) if n else 0 for n in range(6)]
    with pytest.raises(ValueError):
        abelian_series(1)


def test_hirzebruch_series():
    FC = hirzebruch_series("C", 3)
    assert FC.granularity == 2
    assert [FC.coeff(k) for k in range(3)] == [1, 252, 5130]
    FF = hirzebruch_series("F", 2)
    assert FF.coefficients(-1, 2) == [-2, 480, 282888]
    with pytest.raises(ValueError):
        hirzebruch_series("B")
