import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedtoric import local_models as lm
from foldedtoric import reeb

heights = st.floats(-0.99, 0.99, allow_nan=False)
phases = st.floats(0, 2 * math.pi, allow_nan=False)


def test_lambda_examples():
    assert np.all(reeb.lambda_A([0.3, 0, 0, 0]) == 0)
    assert np.array_equal(reeb.lambda_A([0.3, 1, 0, 0]), [-0.5, 0, 0, 0])


def test_d_lambda_is_omega_symbolically():
    t, x1, x2, x3 = syms = sp.symbols("t x1 x2 x3", real=True)
    lam = [-(x1**2 + x2**2 - 2 * x3**2) / 2, x2 * x3, -x1 * x3, 0]
    d = sp.Matrix(4, 4, lambda i, j: sp.diff(lam[j], syms[i]) - sp.diff(lam[i], syms[j]))
    rng = np.random.default_rng(1)
    for p in lm.random_points(rng, 5):
        ref = np.array(d.subs(dict(zip(syms, p))), float)
        assert np.allclose(ref, lm.omega_A(p), atol=1e-14)


def test_d_lambda_by_finite_differences():
    rng = np.random.default_rng(2)
    for p in lm.random_points(rng, 100):
        assert reeb.primitive_defect(p) <= 1e-6


def test_contact_volume_examples():
    assert reeb.contact_volume([0, 1, 0, 0]) == -0.5
    assert reeb.contact_volume([0, 0, 0, 1]) == -2
    assert reeb.contact_volume([0, 0, 0, 0]) == 0


def test_contact_volume_matches_numeric_wedge():
    rng = np.random.default_rng(3)
    for p in lm.random_points(rng, 100):
        assert abs(reeb.contact_volume(p) - reeb.contact_volume_numeric(p)) <= 1e-8


def test_reeb_field_examples():
    v = reeb.reeb_field(reeb.ReebState(1.0, 0.0, 0.0, 0.0))
    assert np.allclose(v, [0, 0, 0, -2])
    pole = reeb.reeb_field(reeb.ReebState(0.0, 0.0, 1.0, 0.0))
    assert pole[0] == 0 and pole[1] == 0 and pole[3] != 0
    x3 = math.sqrt(1 / 3)
    beta = reeb.reeb_field(reeb.ReebState.on_sphere(1, x3, 0.4))
    assert abs(beta[3]) < 1e-15


def test_reeb_field_at_origin_raises():
    with pytest.raises(reeb.ReebError):
        reeb.reeb_field((0.0, 0.0, 0.0, 0.0))


def test_state_must_lie_on_sphere():
    with pytest.raises(reeb.ReebError):
        reeb.ReebState(1.0, 1.0, 0.0, 0.0, k=1.0)
    with pytest.raises(reeb.ReebError):
        reeb.ReebState(0.0, 0.0, 0.0, 0.0, k=0.0)


@given(heights, phases)
def test_reeb_normalization_and_kernel(x3, phase):
    s = reeb.ReebState.on_sphere(1.0, x3, phase)
    assert reeb.normalization_defect(s) <= 1e-10
    assert reeb.kernel_defect(s) <= 1e-8


def test_rates_match_the_field():
    for x3 in (-0.7, 0.2, 0.5):
        s = reeb.ReebState.on_sphere(1.0, x3, 0.0)
        r1, r2 = reeb.rates(x3, 1.0)
        v = reeb.reeb_field(s)
        assert v[1] / s.x1 == pytest.approx(r1)
        assert v[3] == pytest.approx(r2)


def test_classify_special_cases():
    assert reeb.classify_orbit(0.0, 1.0).kind == reeb.THETA_EQUATOR
    assert reeb.classify_orbit(1.0, 1.0).kind == reeb.THETA_POLE
    assert reeb.classify_orbit(math.sqrt(1 / 3), 1.0).kind == reeb.BETA_CIRCLE
    assert reeb.classify_orbit(Fraction(0), Fraction(1)).kind == reeb.THETA_EQUATOR
    assert reeb.classify_orbit(Fraction(1), Fraction(1)).kind == reeb.THETA_POLE


def test_resonant_example_exact_and_float():
    x3, k = Fraction(1, 3), Fraction(1)
    oracle = 3 * x3 / ((k - x3**2) - 2 * x3**2)
    assert oracle == Fraction(3, 2)
    exact = reeb.classify_orbit(x3, k)
    assert exact.kind == reeb.RESONANT and exact.ratio == oracle
    approx = reeb.classify_orbit(1 / 3, 1.0)
    assert approx.kind == reeb.RESONANT and approx.ratio == oracle


def test_irrational_ratio_is_not_closed_under_a_tight_tolerance():
    x3 = 0.3 * math.sqrt(2)
    ratio = 3 * x3 / (1 - 3 * x3 * x3)
    assert reeb.classify_orbit(x3, 1.0, tol=1e-14).kind == reeb.NON_CLOSED
    assert reeb.classify_orbit(x3, 1.0, tol=1e-6, cap=10**6).ratio is not None
    assert ratio != 0


@given(st.floats(0.05, 0.95))
def test_classification_is_odd_in_x3(x3):
    a = reeb.classify_orbit(x3, 1.0)
    b = reeb.classify_orbit(-x3, 1.0)
    assert a.kind == b.kind
    if a.ratio is not None:
        assert b.ratio == -a.ratio


def test_integrate_zero_time():
    s = reeb.ReebState.on_sphere(1.0, 0.4, 0.2)
    res = reeb.integrate_flow(s, 0.0, 1e-3)
    assert len(res.times) == 1 and res.max_drift_x3 == 0 and res.max_drift_r2 == 0


def test_integrate_equator_conserves():
    res = reeb.integrate_flow(reeb.ReebState.on_sphere(1.0, 0.0), 10.0, 1e-3)
    assert res.max_drift_x3 <= 1e-6 and res.max_drift_r2 <= 1e-6
    assert res.times[-1] == 10.0


def test_integrate_lands_on_t_end():
    res = reeb.integrate_flow(reeb.ReebState.on_sphere(1.0, 0.3), 0.0105, 1e-3)
    assert res.times[-1] == pytest.approx(0.0105, abs=1e-15)
    assert len(res.times) == 12


def test_beta_circle_closes_after_one_period():
    x3 = math.sqrt(1 / 3)
    orbit = reeb.classify_orbit(x3, 1.0)
    assert orbit.period == pytest.approx(2 * math.pi / (4.5 / math.sqrt(3)))
    s = reeb.ReebState.on_sphere(1.0, x3, 0.0)
    res = reeb.integrate_flow(s, orbit.period, 1e-3)
    assert np.max(np.abs(res.final[:3] - res.states[0, :3])) <= 1e-4


def test_resonant_torus_closes_after_its_period():
    orbit = reeb.classify_orbit(Fraction(1, 3), Fraction(1))
    s = reeb.ReebState.on_sphere(1.0, 1 / 3, 0.0)
    res = reeb.integrate_flow(s, orbit.period, 1e-3)
    gap = np.abs(res.final - res.states[0])
    gap[3] = abs(math.remainder(res.final[3] - res.states[0, 3], 2 * math.pi))
    assert gap.max() <= 1e-6


@settings(max_examples=10, deadline=None)
@given(heights, phases)
def test_flow_conserves_x3_and_r2(x3, phase):
    res = reeb.integrate_flow(reeb.ReebState.on_sphere(1.0, x3, phase), 2.0, 1e-3)
    assert res.max_drift_x3 <= 1e-6 and res.max_drift_r2 <= 1e-6


def test_csv_header_and_rows():
    import io

    res = reeb.integrate_flow(reeb.ReebState.on_sphere(1.0, 0.0), 0.002, 1e-3)
    buf = io.StringIO()
    reeb.write_csv(res, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,x1,x2,x3,theta,r2,drift"
    assert len(lines) == 4


def test_default_tolerance_separates_rational_from_irrational_heights():
    assert reeb.classify_orbit(0.3 * math.sqrt(2), 1.0).kind == reeb.NON_CLOSED
    assert reeb.classify_orbit(2 / 7, 1.0).ratio == Fraction(42, 37)
