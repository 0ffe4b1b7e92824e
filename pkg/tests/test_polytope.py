from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_facets
from psdmin.catalogue import build_class
from psdmin.exact import DomainError
from psdmin.polytope import (
    DimensionError,
    GeometryError,
    RedundancyError,
    VPolytope,
    comb_equivalent,
    dumps_polytope,
    f_vector,
    face_lattice,
    facet_type_counts,
    facets,
    loads_polytope,
    polar,
)

SQUARE = VPolytope.make("square", [(0, 0), (1, 0), (0, 1), (1, 1)])
CUBE = VPolytope.make("cube", list(itertools.product((0, 1), repeat=3)))
OCTAHEDRON = VPolytope.make("octahedron", [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
TESSERACT = VPolytope.make("tesseract", list(itertools.product((-1, 1), repeat=4)))


def test_facet_counts():
    assert len(facets(build_class(1))) == 5
    assert len(facets(SQUARE)) == 4
    assert len(facets(TESSERACT)) == 8


@pytest.mark.parametrize("k, fv", [(3, (7, 17, 17, 7)), (25, (10, 30, 30, 10)), (1, (5, 10, 10, 5))])
def test_f_vector_catalogue(k, fv):
    assert f_vector(build_class(k)) == fv


def test_f_vector_small():
    assert f_vector(SQUARE) == (4, 4)
    assert f_vector(CUBE) == (8, 12, 6)
    assert f_vector(TESSERACT) == (16, 32, 24, 8)


@pytest.mark.parametrize("k, types", [(27, {"O": 2, "Pr": 8}), (1, {"S": 5}), (16, {"C": 1, "Py": 6})])
def test_facet_types(k, types):
    assert facet_type_counts(build_class(k)) == types


def test_facet_type_needs_dimension_four():
    with pytest.raises(DomainError):
        facet_type_counts(CUBE)


def test_polar_examples():
    assert comb_equivalent(polar(TESSERACT), build_class(31)) is not None
    assert comb_equivalent(polar(build_class(3)), build_class(3)) is not None
    assert comb_equivalent(polar(build_class(14)), build_class(15)) is not None
    assert comb_equivalent(polar(CUBE), OCTAHEDRON) is not None


@pytest.mark.parametrize("k", range(1, 32))
def test_bipolar(k):
    P = build_class(k)
    assert comb_equivalent(polar(polar(P)), P) is not None


def test_comb_equivalent_shuffled_and_distinct():
    P = build_class(12)
    order = list(range(P.n))
    random.Random(3).shuffle(order)
    assert comb_equivalent(P, P.relabel(order)) is not None
    assert comb_equivalent(CUBE, OCTAHEDRON) is None


def test_facets_against_brute_force():
    for P in (SQUARE, CUBE, OCTAHEDRON, build_class(2), build_class(12)):
        assert {f.incident for f in P.facets()} == brute_facets(P.vertices)


def test_face_lattice_euler():
    for k in (1, 7, 18, 30):
        fv = f_vector(build_class(k))
        assert fv[0] - fv[1] + fv[2] - fv[3] == 0
    dims = face_lattice(CUBE)
    assert dims[frozenset()] == -1 and dims[frozenset(range(8))] == 3


def test_errors():
    with pytest.raises(GeometryError):
        VPolytope.make("dup", [(0, 0), (1, 0), (0, 1), (0, 0)])
    with pytest.raises(RedundancyError):
        VPolytope.make("inner", [(0, 0), (2, 0), (0, 2), (Fraction(1, 2), Fraction(1, 2))])
    with pytest.raises(DimensionError):
        VPolytope.make("flat", [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])


def test_document_roundtrip():
    P = build_class(12)
    Q = loads_polytope(dumps_polytope(P))
    assert Q.vertices == P.vertices and Q.dim == 4
    with pytest.raises(ValueError):
        loads_polytope("{not json")


coords = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=5, max_size=9, unique=True))
def test_hull_properties(points):
    # hull of random points: keep only the extreme ones first
    try:
        P = VPolytope.make("p", points)
    except (RedundancyError, DimensionError):
        return
    fv = f_vector(P)
    assert fv[0] - fv[1] + fv[2] == 2
    for f in P.facets():
        assert all(f.slack(v) >= 0 for v in P.vertices)
        assert all(f.slack(P.vertices[i]) == 0 for i in f.incident)
