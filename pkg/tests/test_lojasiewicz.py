from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcloja.assoc import hm_eval
from dcloja.errors import (
    AllPointsOnZeroSet,
    DegreeBudgetExceeded,
    EmptyGrid,
    InputError,
    OnZeroSet,
)
from dcloja.geometry import Axis, Box, Hyperplane, PointSet, parse_grid_specs
from dcloja.lojasiewicz import (
    axis_log_q,
    axis_probe,
    check_cauchy_bound,
    check_polydisc,
    classical_loja_fit,
    closed_form_axis_derivative,
    fit_b_constant,
    fit_envelope,
    growth_profile,
    make_test_function,
    bidisc_delta,
    point_zero_set,
    profile_refinements,
    psi_polynomial,
    q_statistic,
)
from dcloja.series import Polynomial, derivative_at, recenter, reciprocal
from dcloja.weights import Gevrey, make_weight_sequence

from oracles import axis_required_log_c, log_h_gevrey1_exact, stationary_phase_log_c, sympy_derivative_of_reciprocal

F = Fraction
FACT = make_weight_sequence(Gevrey(1, 0))
X1 = make_test_function(Polynomial.parse("x1", n=2), Hyperplane(1))


def test_make_test_function_rejects_bad_zero_set():
    with pytest.raises(InputError):
        make_test_function(Polynomial.parse("x1", n=2), PointSet([(1, 1)]))


def test_q_at_unit_distance():
    assert q_statistic(X1, FACT, (1, 0), (0, 0), 1, 1) == pytest.approx(0.0, abs=1e-15)


def test_q_first_derivative():
    # |D(1/x1)| = 4 at 1/2, h(1/2) = 1/2, so Q = 2
    assert q_statistic(X1, FACT, (F(1, 2), 0), (1, 0), 1, 1) == pytest.approx(math.log(2), rel=1e-14)


def test_q_saturated_h():
    F2 = make_test_function(psi_polynomial(2), point_zero_set())
    x = (F(3, 2), F(1))
    assert q_statistic(F2, FACT, x, (0, 0), 1, 1) == pytest.approx(-math.log(float(psi_polynomial(2)(x))), rel=1e-14)


def test_q_errors():
    with pytest.raises(OnZeroSet):
        q_statistic(X1, FACT, (0, 1), (0, 0), 1, 1)
    with pytest.raises(DegreeBudgetExceeded):
        q_statistic(X1, FACT, (1, 1), (10, 0), 1, 1, degree_cap=5)
    with pytest.raises(InputError):
        q_statistic(X1, FACT, (1, 1), (0, 0), 0, 1)


RATIONAL_POINTS = [(F(1, 3), F(1, 2)), (F(-1, 4), F(2, 3)), (F(1, 8), F(-1, 5))]


@pytest.mark.parametrize("x", RATIONAL_POINTS)
@pytest.mark.parametrize("J", [(0, 0), (2, 1), (1, 3)])
def test_rearrangement_identity(x, J):
    text = "x1*(x1^2 + x2^4)"
    Fn = make_test_function(Polynomial.parse(text), Hyperplane(1))
    lam, sigma, C = 2.0, 3.0, 7.5
    j = sum(J)
    q = q_statistic(Fn, FACT, x, J, lam, sigma)
    der = sympy_derivative_of_reciprocal(text, x, J)
    lhs = math.log(abs(der.numerator)) - math.log(der.denominator)
    lh = hm_eval(FACT, lam * abs(float(x[0]))).log_value
    rhs = math.log(C) + j * math.log(sigma) + math.lgamma(j + 1) + FACT.log_m(j) - lh
    assert abs((lhs - rhs) - (q - math.log(C))) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 50), st.floats(0.1, 50), st.sampled_from([(1, 0), (0, 0), (3, 0)]))
def test_sigma_slope(s1, s2, J):
    x = (F(1, 3), F(1, 2))
    a = q_statistic(X1, FACT, x, J, 1, s1)
    b = q_statistic(X1, FACT, x, J, 1, s2)
    assert (a - b) == pytest.approx(-sum(J) * (math.log(s1) - math.log(s2)), abs=1e-9)


def test_profile_one_dimensional_closed_form():
    # phi = x1 in one variable: S_j = max_x x^-(j+1) h(x) / j!
    F1 = make_test_function(Polynomial.parse("x1", n=1), PointSet([(0,)]))
    grid = Box((Axis(F(1, 64), F(1), 17),))
    prof = growth_profile(F1, FACT, 1.0, grid, 12)
    for j in range(13):
        oracle = max(-(j + 1) * math.log(float(x)) + log_h_gevrey1_exact(x) - math.lgamma(j + 1) for (x,) in grid.points())
        assert prof.s[j] == pytest.approx(oracle, rel=1e-12, abs=1e-12)
        w = prof.witnesses[j]
        assert w.x[0] > 0 and w.J == (j,)


def test_profile_empty_grid():
    grid = Box((Axis(0, 0, 1), Axis(-1, 1, 3)))
    with pytest.raises(EmptyGrid):
        growth_profile(X1, FACT, 1.0, grid, 3)


def test_profile_skips_zero_set():
    grid = parse_grid_specs(["x1:-1/2:1/2:5", "x2:0:1:3"])
    prof = growth_profile(X1, FACT, 1.0, grid, 4)
    assert prof.skipped == 3 and prof.points == 12
    assert all(w.x[0] != 0 for w in prof.witnesses)


def test_refinement_monotone():
    Fn = make_test_function(Polynomial.parse("x1*(x1^2 + x2^4)"), Hyperplane(1))
    grid = parse_grid_specs(["x1:1/16:1/2:4,geom", "x2:-1/2:1/2:3"])
    profs = profile_refinements(Fn, FACT, 1.0, grid, 6, 3)
    for a, b in zip(profs, profs[1:]):
        assert all(sb >= sa for sa, sb in zip(a.s, b.s))
    env = fit_envelope(profs)
    for a, b in zip(env.log_C_history, env.log_C_history[1:]):
        assert all(cb >= ca for ca, cb in zip(a, b))


def test_profile_order_independent():
    grid = parse_grid_specs(["x1:1/8:1/2:3", "x2:-1/2:1/2:3"])
    a = growth_profile(X1, FACT, 1.0, grid, 5)
    rev = Box(tuple(reversed(grid.axes)))  # same point set, other traversal after swapping back
    pts = grid.points()
    assert set(pts) == {(p[1], p[0]) for p in rev.points()}
    b = growth_profile(X1, FACT, 1.0, grid, 5)
    assert a == b


def test_envelope_constant_profile():
    env = fit_envelope([[0.0] * 10, [0.0] * 20])
    assert env.verdict == "certified-heuristic"
    assert env.C_of_sigma == [1.0] * 5


def test_envelope_factorial_profile_diverges():
    levels = [[math.lgamma(j + 1) for j in range(n + 1)] for n in (40, 80, 160)]
    assert fit_envelope(levels).verdict == "diverging"


def test_envelope_needs_two_levels():
    with pytest.raises(InputError):
        fit_envelope([[0.0]])


def test_envelope_nonincreasing_in_sigma():
    env = fit_envelope([[0.0, 1.0, 2.5, 3.0], [0.0, 1.2, 2.6, 3.1]])
    assert all(b <= a for a, b in zip(env.C_of_sigma, env.C_of_sigma[1:]))


def test_x1_envelope_stable():
    grid = parse_grid_specs(["x1:1/64:1/2:5,geom", "x2:-1/2:1/2:3"])
    env = fit_envelope(profile_refinements(X1, FACT, 1.0, grid, 12, 3))
    assert env.verdict == "certified-heuristic"


def test_scale_invariance():
    grid = parse_grid_specs(["x1:1/32:1/2:4,geom", "x2:-1/2:1/2:3"])
    phi = Polynomial.parse("x1*(x1^2 + x2^4)")
    a = profile_refinements(make_test_function(phi, Hyperplane(1)), FACT, 1.0, grid, 8, 2)
    b = profile_refinements(make_test_function(phi * 2, Hyperplane(1)), FACT, 1.0, grid, 8, 2)
    for pa, pb in zip(a, b):
        for sa, sb in zip(pa.s, pb.s):
            assert sb - sa == pytest.approx(-math.log(2), abs=1e-12)
    assert fit_envelope(a).verdict == fit_envelope(b).verdict


@pytest.mark.parametrize("k", [1, 2, 3])
def test_closed_form_matches_series(k):
    psi = psi_polynomial(k)
    for t in (F(1, 2), F(1, 5)):
        g = reciprocal(recenter(psi, (0, t), 12), 12)
        for m in range(7):
            assert closed_form_axis_derivative(k, t, m) == derivative_at(g, (2 * m, 0))


def test_axis_log_q_matches_q_statistic():
    Fn = make_test_function(psi_polynomial(2), point_zero_set())
    for m in range(5):
        a = axis_log_q(2, FACT, 1.0, 2.0, F(1, 5), m)
        b = q_statistic(Fn, FACT, (0, F(1, 5)), (2 * m, 0), 1.0, 2.0)
        assert a == pytest.approx(b, rel=1e-12)


def test_probe_k2_diverges_against_oracles():
    rep = axis_probe(2, FACT)
    assert rep.verdict == "diverging"
    assert all(c.equal for c in rep.cross_checks)
    for row in rep.rows:
        m, v = axis_required_log_c(2, row.sigma, row.t, 2 * row.m_scanned)
        assert row.best_m == m
        assert row.log_C_required == pytest.approx(v, rel=1e-10)
    # stationary phase tracks the required C once the maximiser is large
    for row in rep.rows:
        if row.best_m >= 10:
            assert row.log_C_required == pytest.approx(stationary_phase_log_c(2, row.sigma, float(row.t)), abs=0.05)


def test_probe_k1_bounded():
    rep = axis_probe(1, FACT)
    assert rep.verdict == "bounded"
    assert any(all(f < 2 for f in row) for row in rep.growth_factors)


def test_probe_rejects_bad_ladder():
    with pytest.raises(InputError):
        axis_probe(2, FACT, t_ladder=["1/10", "1/5"])
    with pytest.raises(InputError):
        axis_probe(2, FACT, t_ladder=["2"])


def test_bidisc_delta():
    assert bidisc_delta(2) == F(1, 36)
    assert bidisc_delta(3) == F(1, 132)


def test_cauchy_spot_value():
    # |1/psi(1/2, 0)| = 4 <= 2 (1/2)^-2 = 8
    rep = check_cauchy_bound(2, [(F(1, 2), F(0))], bidisc_delta(2), 0)
    assert rep.passed
    assert rep.worst_margin == pytest.approx(math.log(2))


def test_polydisc_small():
    pts = [(F(1, 4), F(1, 3)), (F(1, 2), F(-1, 2))]
    rep = check_polydisc(2, pts, bidisc_delta(2), angles=8)
    assert rep.passed and rep.checked == 2 * (64 + 81)


def test_polydisc_fails_for_large_radius():
    rep = check_polydisc(2, [(F(1, 4), F(1, 3))], F(1, 1), angles=8)
    assert not rep.passed


def test_fit_b_is_tight():
    phi = psi_polynomial(2) * Polynomial.parse("x1", n=2)
    pts = [(F(1, 4), F(1, 3)), (F(1, 2), F(0))]
    B, (x, J) = fit_b_constant(phi, pts, 6)
    g = reciprocal(recenter(phi, x, 6), 6)
    p = sum(J)
    assert abs(g.coeff(J)) == pytest.approx(B ** (p + 1) * abs(float(x[0])) ** (-(p + 2)), rel=1e-9)


def test_classical_fit_psi():
    Fn = make_test_function(psi_polynomial(2), point_zero_set())
    fit = classical_loja_fit(Fn, parse_grid_specs(["x1:-1/2:1/2:21", "x2:-1/2:1/2:21"]))
    assert fit.nu == pytest.approx(4.0, rel=1e-9)
    assert fit.C > 0


def test_classical_fit_x1():
    fit = classical_loja_fit(X1, parse_grid_specs(["x1:-1/2:1/2:11", "x2:-1/2:1/2:5"]))
    assert fit.nu == pytest.approx(1.0) and fit.C == pytest.approx(1.0)


def test_classical_fit_all_on_set():
    with pytest.raises(AllPointsOnZeroSet):
        classical_loja_fit(X1, Box((Axis(0, 0, 1), Axis(-1, 1, 3))))
