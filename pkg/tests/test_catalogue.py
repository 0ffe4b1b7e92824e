from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import count_simple_cycles_bipartite, octic_point, octic_product, quartic_point, quartic_product
from psdmin.catalogue import (
    Binomial,
    TemplateMismatch,
    binomial_check,
    binomial_report,
    build_class,
    condition_value,
    cycle_binomials,
    load_catalogue,
    load_templates,
    match_template,
    octic_14,
    quartic_12,
    record,
    template_hook,
    verify_all,
    verify_class,
)
from psdmin.catalogue.binomials import listed_generators
from psdmin.catalogue.conditions import condition_variables, evaluate_condition
from psdmin.exact import DomainError
from psdmin.polytope import VPolytope
from psdmin.slack import SlackMatrix, slack_matrix

F = Fraction


def test_records():
    cat = load_catalogue()
    assert sorted(cat) == list(range(1, 32))
    assert all(cat[k].id == k for k in cat)
    assert record(6).f_vector == (9, 18, 15, 6)
    assert record(3).dual == 3 and record(14).dual == 15
    with pytest.raises(DomainError):
        record(32)
    with pytest.raises(DomainError):
        record(0)


def test_build_class_examples():
    assert set(build_class(1).vertices) == {(-1, -1, -1, -1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}
    P12 = build_class(12)
    assert (0, 1, 4, 4) in P12.vertices and (F(1, 2), F(1, 2), 0, 0) in P12.vertices and P12.n == 9
    P30 = build_class(30)
    assert set(P30.vertices) == set(itertools.product((-1, 1), repeat=4))


def test_record_documents_are_complete():
    for r in load_catalogue().values():
        doc = r.to_document()
        assert set(doc) >= {"id", "vertices", "f_vector", "facet_types", "dual", "condition", "witness"}
        assert sum(doc["f_vector"][:1]) == len(doc["vertices"])


@pytest.mark.parametrize("k", [6, 24, 3])
def test_verify_class_examples(k):
    rep = verify_class(k)
    assert rep.ok, rep.failures
    if k == 6:
        assert rep.details["f_vector"] == [9, 18, 15, 6] and rep.details["facet_types"] == {"Pr": 6}
        assert rep.details["dual"] == 7
    if k == 24:
        assert rep.details["f_vector"] == [10, 30, 30, 10] and rep.details["facet_types"] == {"B": 10}
    if k == 3:
        assert rep.details["dual"] == 3


def test_verify_all_ordering(monkeypatch):
    monkeypatch.setenv("PSDMIN_THREADS", "2")
    reps = verify_all()
    assert [r.id for r in reps] == list(range(1, 32))
    assert all(r.ok for r in reps)


# ---------------------------------------------------------------------------
# condition polynomials


def test_quartic_examples():
    assert quartic_12(F(1, 9), F(4, 9)) == 0
    assert quartic_12(F(4, 9), F(1, 9)) == 0
    assert quartic_12(1, 0) == 0
    assert quartic_12(1, 1) != 0


def test_octic_examples():
    assert octic_14(1, 0, F(1, 4)) == 0
    assert octic_14(4, 4, 0) == 0
    assert octic_14(1, 1, 1) != 0


def test_quartic_equals_sign_product():
    prod = quartic_product()
    x1, x2 = prod.gens
    ours = sum(c * x1**e[0] * x2**e[1] for e, c in _terms("quartic-12/13"))
    ratio = sp.cancel(sp.expand(ours) / prod.as_expr())
    assert ratio.is_number and ratio != 0


def test_octic_equals_sign_product():
    prod = octic_product()
    x = prod.gens
    ours = sum(c * x[0]**e[0] * x[1]**e[1] * x[2]**e[2] for e, c in _terms("octic-14/15"))
    ratio = sp.cancel(sp.expand(ours) / prod.as_expr())
    assert ratio.is_number and ratio != 0


def _terms(name):
    from psdmin.catalogue.conditions import _terms as t
    return [(e, sp.Rational(c.numerator, c.denominator)) for e, c in t(name)]


def test_condition_variables():
    assert len(condition_variables("quartic-12/13")) == 2
    assert len(condition_variables("octic-14/15")) == 3
    assert evaluate_condition("quartic-12/13", F(1, 9), F(4, 9)) == 0


rats = st.fractions(min_value=-6, max_value=6, max_denominator=12)


@settings(max_examples=100, deadline=None)
@given(rats)
def test_quartic_vanishes_on_parametrized_points(t):
    if 1 + t + t * t == 0:
        return
    assert quartic_12(*quartic_point(t)) == 0


@settings(max_examples=100, deadline=None)
@given(rats, rats)
def test_octic_vanishes_on_parametrized_points(y1, y2):
    pt = octic_point(y1, y2)
    if pt is not None:
        assert octic_14(*pt) == 0


# ---------------------------------------------------------------------------
# templates


def segment_times_trapezoid(x) -> VPolytope:
    trap = [(0, 0), (1, 0), (0, 1), (x, 1)]
    return VPolytope.make(f"seg x trap({x})", [(a, b, c) for c in (0, 1) for a, b in trap])


def test_templates_load():
    fams = load_templates()
    assert {"cube", "class-12", "class-14", "class-28", "class-30"} <= set(fams)
    assert len(fams["class-28"]) == 2 and len(fams["class-30"]) == 2


def test_cube_match_segment_times_trapezoid():
    m = match_template(slack_matrix(segment_times_trapezoid(2)), "cube")
    assert m.params == {"x": 2}
    assert {s["x"] for s in m.solutions} == {2, F(1, 2)}


def test_class12_match_feeds_quartic():
    m = match_template(slack_matrix(build_class(12)), 12)
    assert condition_value(m) == 0
    assert quartic_12(m.params["x1"], m.params["x2"]) == 0


def test_class14_match_feeds_octic():
    m = match_template(slack_matrix(build_class(14)), 14)
    assert condition_value(m) == 0


def test_match_failures():
    from oracles import skew_cube
    assert match_template(slack_matrix(VPolytope.make("skew", skew_cube())), "cube") is None
    with pytest.raises(TemplateMismatch):
        match_template(slack_matrix(build_class(1)), 12)
    with pytest.raises(DomainError):
        match_template(slack_matrix(build_class(1)), 5)


@pytest.mark.parametrize("k", range(12, 32))
def test_every_template_class_matches(k):
    assert match_template(slack_matrix(build_class(k)), k, first=True) is not None


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([12, 16, 21, 29]), st.data())
def test_match_survives_scaling_and_permutation(k, data):
    S = slack_matrix(build_class(k))
    pos = st.fractions(min_value=F(1, 5), max_value=5, max_denominator=5)
    r = [data.draw(pos) for _ in range(S.rows)]
    c = [data.draw(pos) for _ in range(S.cols)]
    rows = data.draw(st.permutations(range(S.rows)))
    T = S.scaled(r, c).permuted(rows, list(range(S.cols)))
    assert match_template(T, k, first=True) is not None


def test_template_hook():
    S = load_templates()["class-12"][0].instantiate(x1=F(1, 9), x2=F(4, 9))
    found = template_hook(S)
    assert found is not None and found["class"] in (12, 13) and found["condition_value"] == "0"
    off = load_templates()["class-12"][0].instantiate(x1=F(1, 5), x2=F(1, 5))
    assert template_hook(off) is None
    assert template_hook(slack_matrix(build_class(30)))["class"] == 30


# ---------------------------------------------------------------------------
# binomials


def test_listed_generator_counts():
    assert len(listed_generators(3)[1]) == 9
    assert len(listed_generators(10)[1]) == 19
    assert Binomial.parse("x7*x9 - x6*x10") == Binomial((7, 9), (6, 10))


@pytest.mark.parametrize("ab, count", [((1, 1), 1), ((1, 3), 6), ((2, 2), 15), ((1, 2), 3), ((2, 3), None)])
def test_cycle_binomial_counts(ab, count):
    a, b = ab
    expected = count_simple_cycles_bipartite(a + 1, b + 1)
    if count is not None:
        assert expected == count
    gens = cycle_binomials(a, b)
    assert len(gens) == expected
    assert len(set(gens)) == len(gens)


def test_square_cycle_binomial():
    (g,) = cycle_binomials(1, 1)
    assert len(g.plus) == len(g.minus) == 4 and not set(g.plus) & set(g.minus)
    with pytest.raises(DomainError):
        cycle_binomials(0, 2)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7, 8, 9, 10, 11])
def test_binomials_vanish(k):
    S = slack_matrix(build_class(k))
    rep = binomial_report(k, S)
    assert rep.ok and rep.generators == rep.vanishing
    if k == 5:
        assert rep.generators == 6


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([3, 5, 10]), st.randoms(use_true_random=False))
def test_binomials_vanish_after_scaling(k, rnd):
    S = slack_matrix(build_class(k))
    r = [F(rnd.randint(1, 9), rnd.randint(1, 9)) for _ in range(S.rows)]
    c = [F(rnd.randint(1, 9), rnd.randint(1, 9)) for _ in range(S.cols)]
    assert binomial_check(k, S.scaled(r, c))


def test_binomials_detect_a_bad_matrix():
    S = slack_matrix(build_class(3))
    rows = [list(r) for r in S.matrix]
    i, j = next((i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if x)
    rows[i][j] *= 3
    assert not binomial_check(3, SlackMatrix.from_rows(rows, dim=4))
    with pytest.raises(DomainError):
        binomial_report(20, S)
