import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tuttemc.generators import (
    FamilySpec,
    InfeasibleSpecError,
    PLGSpec,
    gen_family,
    gen_plg,
    molloy_reed_closed_form,
    molloy_reed_from_counts,
    molloy_reed_q,
    plg_asymptotics,
    riemann_zeta,
)
from tuttemc.graph import complete_graph, min_degree


def test_plg_alpha2_beta1_degree_table():
    spec = PLGSpec(2, 1)
    assert spec.max_degree == 7
    assert spec.degree_counts == [math.floor(math.e ** 2 / i) for i in range(1, 8)] == [7, 3, 2, 1, 1, 1, 1]
    assert spec.n == 16
    assert spec.total_copies == 41
    g, meta = gen_plg(spec, 0)
    assert (g.n, g.m) == (16, 20)
    assert meta["dropped_copy"] == 15


def test_plg_tiny_is_perfect_matching():
    spec = PLGSpec(math.log(4), 10)
    assert spec.max_degree == 1
    assert spec.degree_counts == [4]
    g, meta = gen_plg(spec, 3)
    assert meta["dropped_copy"] is None
    assert sorted(v for e in g.edge_list for v in e) == [0, 1, 2, 3]
    assert g.degrees().tolist() == [1, 1, 1, 1]


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 4.5), st.floats(0.6, 4.0), st.integers(0, 2 ** 32))
def test_plg_realizes_prescribed_degrees(alpha, beta, seed):
    spec = PLGSpec(alpha, beta)
    g, meta = gen_plg(spec, seed)
    realized = g.degrees()
    prescribed = spec.degree_sequence()
    assert realized.sum() == 2 * g.m
    diff = prescribed - realized
    if meta["dropped_copy"] is None:
        assert not diff.any()
    else:
        assert diff[meta["dropped_copy"]] == 1
        assert np.count_nonzero(diff) == 1
        assert prescribed[meta["dropped_copy"]] == spec.max_degree


def test_plg_simple_flag_drops_loops_and_parallels():
    g, meta = gen_plg(PLGSpec(3, 1.2), 1, simple=True)
    assert meta["simple"]
    pairs = [tuple(sorted(e)) for e in g.edge_list]
    assert all(u != v for u, v in pairs)
    assert len(set(pairs)) == len(pairs)


def test_plg_seed_determinism():
    a, _ = gen_plg(PLGSpec(3, 2), 42)
    b, _ = gen_plg(PLGSpec(3, 2), 42)
    assert a == b


def test_superdense_zero_is_complete():
    g = gen_family(FamilySpec("superdense", 9, "0"), 0)
    assert g.same_multiset(complete_graph(9))


def test_subdense_min_degree():
    g = gen_family(FamilySpec("subdense", 100, 1.0), 5)
    assert math.ceil(100 / math.sqrt(math.log(100))) == 47
    assert min_degree(g) >= 47


def test_eps_dense_min_degree():
    assert min_degree(gen_family(FamilySpec("eps", 40, 0.25), 5)) >= 10


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([("eps", 0.3), ("eps", 0.7), ("subdense", 0.5), ("subdense", 1.5),
                        ("superdense", "n^0.5"), ("superdense", "n/log n"), ("superdense", "3")]),
       st.integers(8, 60), st.integers(0, 10 ** 6))
def test_family_output_passes_own_classification(fam, n, seed):
    spec = FamilySpec(fam[0], n, fam[1])
    try:
        g = gen_family(spec, seed)
    except InfeasibleSpecError:
        assert math.ceil(spec.threshold() - 1e-9) > n - 1
        return
    assert spec.accepts(g)
    assert all(u != v for u, v in g.edge_list)


def test_family_generation_is_seeded():
    spec = FamilySpec("subdense", 50, 1.0)
    assert gen_family(spec, 7) == gen_family(spec, 7)
    assert gen_family(spec, 7) != gen_family(spec, 8)


def test_family_errors():
    with pytest.raises(InfeasibleSpecError):
        gen_family(FamilySpec("subdense", 20, 5.0), 0)
    with pytest.raises(InfeasibleSpecError):
        gen_family(FamilySpec("eps", 3, 0.5), 0)
    with pytest.raises(ValueError):
        gen_family(FamilySpec("superdense", 20, "n^1.5"), 0)


@pytest.mark.parametrize("s", [1.1, 1.5, 2, 3, 4, 7.5])
def test_zeta_against_mpmath(s):
    assert riemann_zeta(s) == pytest.approx(float(mpmath.zeta(s)), abs=1e-9)


def test_zeta_rejects_divergent_arguments():
    with pytest.raises(ValueError):
        riemann_zeta(1)


def test_asymptotics_table():
    n_pred, _ = plg_asymptotics(PLGSpec(5, 3))
    assert n_pred == pytest.approx(1.2020569 * math.exp(5), rel=1e-7)
    assert abs(PLGSpec(5, 3).n - n_pred) / n_pred < 0.05
    assert plg_asymptotics(PLGSpec(5, 1))[0] == pytest.approx(5 * math.exp(5))
    assert plg_asymptotics(PLGSpec(5, 1))[0] == pytest.approx(742.1, abs=0.05)
    assert plg_asymptotics(PLGSpec(2, 0.5))[0] == pytest.approx(math.exp(4) / 0.5)
    assert plg_asymptotics(PLGSpec(2, 0.5))[0] == pytest.approx(109.2, abs=0.05)
    _, m_pred = plg_asymptotics(PLGSpec(4, 2))
    assert m_pred == pytest.approx(0.25 * 4 * math.exp(4))


def test_asymptotic_error_shrinks_with_alpha():
    errors = []
    for alpha in (5, 8, 11):
        spec = PLGSpec(alpha, 3)
        n_pred, m_pred = plg_asymptotics(spec)
        errors.append(abs(spec.n - n_pred) / n_pred)
    assert errors[0] > errors[1] > errors[2]


def test_molloy_reed_beta_four():
    expected = (1.6449341 - 2 * 1.2020569) / 1.0823232
    assert molloy_reed_closed_form(4) == pytest.approx(expected, abs=1e-6)
    assert molloy_reed_closed_form(4) == pytest.approx(-0.70144, abs=1e-5)
    assert molloy_reed_q(PLGSpec(5, 4)).closed_form == molloy_reed_closed_form(4)


def test_molloy_reed_degree_two_is_zero():
    assert molloy_reed_from_counts({2: 10}) == 0


@pytest.mark.parametrize("alpha", [2, 4, 6])
def test_molloy_reed_positive_for_small_beta(alpha):
    mr = molloy_reed_q(PLGSpec(alpha, 0.5))
    assert mr.closed_form is None
    assert mr.finite_sum > 0


def test_molloy_reed_closed_form_needs_beta_above_three():
    with pytest.raises(ValueError, match="beta > 3"):
        molloy_reed_closed_form(3)
