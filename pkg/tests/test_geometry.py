from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcloja.errors import DimensionMismatch, InputError
from dcloja.geometry import (
    Axis,
    Box,
    Hyperplane,
    PointSet,
    Union,
    distance,
    log_distance,
    on_zero_set,
    parse_grid_specs,
    validate_zero_set,
    zero_set_from_json,
    zero_set_to_json,
)
from dcloja.series import Polynomial

F = Fraction


def test_hyperplane_distance():
    assert distance((F(3, 4), F(5)), Hyperplane(1)) == F(3, 4)
    assert distance((F(-3, 4), F(5)), Hyperplane(2)) == 5


def test_point_distance_exact_when_square():
    d = distance((3, 4), PointSet([(0, 0)]))
    assert d == 5 and isinstance(d, Fraction)


def test_point_distance_irrational():
    d = distance((1, 1), PointSet([(0, 0)]))
    assert d == pytest.approx(math.sqrt(2), rel=1e-15)


def test_union_tie():
    Z = Union([Hyperplane(1), PointSet([(2, 0)])])
    assert distance((1, 0), Z) == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        distance((1, 2, 3), PointSet([(0, 0)]))
    with pytest.raises(DimensionMismatch):
        distance((1,), Hyperplane(2))


def test_empty_shapes_rejected():
    with pytest.raises(InputError):
        PointSet([])
    with pytest.raises(InputError):
        Union([])


def test_on_zero_set_iff_distance_zero():
    Z = Union([Hyperplane(2), PointSet([(1, 1)])])
    for x in [(0, 0), (5, 0), (1, 1), (1, F(1, 2)), (F(-1, 3), 2)]:
        assert on_zero_set(x, Z) == (distance(x, Z) == 0)
    assert log_distance((F(1, 2), 3), Hyperplane(1)) == pytest.approx(-math.log(2))


@pytest.mark.parametrize(
    "Z",
    [Hyperplane(1), PointSet([(0, 0), (F(1, 3), F(-2))]), Union([Hyperplane(2), PointSet([(1, 1)])])],
)
def test_json_round_trip(Z):
    assert zero_set_from_json(zero_set_to_json(Z)) == Z


def test_json_shapes():
    assert zero_set_to_json(Hyperplane(1)) == {"hyperplane": 1}
    assert zero_set_from_json({"points": [[0, 0]]}) == PointSet([(0, 0)])


coords = st.fractions(min_value=-5, max_value=5, max_denominator=20)


@settings(max_examples=200, deadline=None)
@given(st.tuples(coords, coords), st.tuples(coords, coords))
def test_triangle_sanity(x, y):
    Z = Union([Hyperplane(1), PointSet([(1, 2), (-3, F(1, 2))])])
    gap = abs(float(distance(x, Z)) - float(distance(y, Z)))
    assert gap <= math.dist([float(v) for v in x], [float(v) for v in y]) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.tuples(coords, coords))
def test_swap_symmetry(x):
    # swapping coordinates maps PointSet{(1,1),(0,0)} to itself
    Z = PointSet([(1, 1), (0, 0)])
    assert distance(x, Z) == distance((x[1], x[0]), Z)


def test_axis_points():
    ax = Axis(F(0), F(1), 5)
    assert ax.points() == [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
    assert ax.refine().count == 9


def test_geometric_refinement_is_nested():
    ax = Axis(F(1, 1000), F(1), 11, geometric=True)
    coarse, fine = set(ax.points()), set(ax.refine().points())
    assert coarse <= fine
    assert all(p.denominator <= 10**6 for p in fine)
    pts = ax.points()
    assert pts == sorted(pts) and pts[0] == F(1, 1000) and pts[-1] == 1


def test_box_refinement_nested():
    box = parse_grid_specs(["x1:1/64:1/2:5,geom", "x2:-1/2:1/2:5"])
    assert set(box.points()) <= set(box.refine().points())
    assert Box.from_json(box.to_json()) == box


@pytest.mark.parametrize(
    "specs",
    [["x1:0:1"], ["y1:0:1:3"], ["x1:0:1:3", "x3:0:1:3"], ["x1:1:0:3"], ["x1:-1:1:3,geom"], ["x1:0:1:3,log"]],
)
def test_bad_grid_specs(specs):
    with pytest.raises(InputError):
        parse_grid_specs(specs)


def test_validate_hyperplane_product():
    phi = Polynomial.parse("x1*(x1^2 + x2^4)")
    probe = parse_grid_specs(["x1:-1:1:9", "x2:-1:1:9"])
    rep = validate_zero_set(phi, Hyperplane(1), probe)
    assert rep.passes and rep.certified
    assert rep.extra_zeros == []
    assert rep.samples_on_set == 9 and rep.samples == 72


def test_validate_psi_origin():
    rep = validate_zero_set(Polynomial.parse("x1^2 + x2^4"), PointSet([(0, 0)]))
    assert rep.passes and rep.certified


def test_validate_wrong_point():
    rep = validate_zero_set(Polynomial.parse("x1", n=2), PointSet([(1, 1)]))
    assert not rep.passes
    assert any("!= 0" in f for f in rep.failures)


def test_validate_detects_missing_zeros():
    # x1*x2 also vanishes on x2 = 0, which the declared set omits
    phi = Polynomial.parse("x1*x2")
    rep = validate_zero_set(phi, Hyperplane(1), parse_grid_specs(["x1:-1:1:5", "x2:-1:1:5"]))
    assert not rep.passes
    assert rep.extra_zeros


def test_validate_flat_points_note():
    rep = validate_zero_set(Polynomial.parse("x1", n=2), Hyperplane(1))
    assert rep.passes
    assert any("flat" in n for n in rep.notes)


def test_validate_one_variable_point_equals_hyperplane():
    phi = Polynomial.parse("x1", n=1)
    assert validate_zero_set(phi, PointSet([(0,)])).certified
    assert validate_zero_set(phi, Hyperplane(1)).certified
    assert not validate_zero_set(Polynomial.parse("x1^2 + 1", n=1), PointSet([(0,)])).passes
