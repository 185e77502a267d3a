import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from foldedtoric import morse

coord = st.floats(-1, 1, allow_nan=False)


def test_moment_component_examples():
    assert morse.moment_component((1, 0), (0, 0, 1)) == 1
    assert morse.moment_component((0.3, -2), (0, 0, 0)) == 0
    assert morse.moment_component((0, 1), (1, 0, 1)) == 1


def test_closed_form_hessian_matches_sympy():
    x, y, z, a, b = sp.symbols("x y z a b", real=True)
    phi = a * (z**2 - (x**2 + y**2) / 2) + b * z * (x**2 + y**2)
    H = sp.hessian(phi, (x, y, z))
    rng = np.random.default_rng(0)
    for vals in rng.uniform(-2, 2, (10, 5)):
        subs = dict(zip((x, y, z, a, b), vals))
        ref = np.array(H.subs(subs), float)
        assert np.allclose(morse.hessian(vals[3:], vals[:3]), ref, atol=1e-13)


def test_analyze_examples():
    r = morse.analyze((1, 0))
    assert r.is_morse_bott and r.critical_set == morse.CIRCLE
    assert np.array_equal(r.hessian_at_origin, np.diag([-1.0, -1.0, 2.0]))
    assert r.signature == (2, 1)
    r = morse.analyze((0, 1))
    assert not r.is_morse_bott and r.critical_set == morse.LINE
    assert r.witness.sign_change_at == 0
    assert np.all(np.diag(r.witness.normal_below) < 0) and np.all(np.diag(r.witness.normal_above) > 0)
    r = morse.analyze((2, 3))
    assert r.is_morse_bott and np.array_equal(r.hessian_at_origin, np.diag([-2.0, -2.0, 4.0]))


def test_analyze_rejects_zero():
    with pytest.raises(morse.MorseError):
        morse.analyze((0, 0))


def test_fd_hessian_examples():
    assert morse.hessian_fd_check((1, 0), (0, 0, 0)) <= 1e-6
    assert morse.hessian_fd_check((0, 1), (1, 1, 1)) <= 1e-5
    rng = np.random.default_rng(1)
    for p in rng.uniform(-1, 1, (20, 3)):
        assert morse.hessian_fd_check((1, 1), p) <= 1e-5


def test_critical_set_for_a_nonzero():
    grid = morse.sample_grid(21)
    for xi in ((1, 0), (-1, 0.5), (2, 3)):
        crit = grid[morse.critical_mask(xi, grid)]
        assert np.array_equal(crit, np.zeros((1, 3)))


def test_critical_set_for_a_zero():
    grid = morse.sample_grid(21)
    crit = grid[morse.critical_mask((0, 1), grid)]
    axis = grid[(grid[:, 0] == 0) & (grid[:, 1] == 0)]
    assert np.array_equal(crit, axis)


@settings(max_examples=50)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 10))
def test_positive_scaling_preserves_classification(a, b, lam):
    if a == 0 and b == 0:
        return
    r = morse.analyze((a, b), separatrix_samples=None)
    s = morse.analyze((lam * a, lam * b), separatrix_samples=None)
    assert np.allclose(s.hessian_at_origin, lam * r.hessian_at_origin)
    assert s.is_morse_bott == r.is_morse_bott and s.signature == r.signature


def test_separatrix_b_zero_is_negative_axis():
    for xi in ((1, 0), (-1, 0), (3, 0)):
        s = morse.separatrix(xi)
        assert np.max(np.abs(s[:, 1])) <= 1e-6 and np.max(s[:, 0]) <= 1e-6
        assert s[:, 0].min() < -0.4


def test_separatrix_bent_curve_is_tangent_to_axis():
    s = morse.separatrix((1, 0.2))
    assert np.max(np.abs(s[:, 1])) > 1e-3
    assert abs(morse.tangency_slope(s)) <= morse.TANGENCY_SLOPE


def test_separatrix_requires_a():
    with pytest.raises(morse.MorseError):
        morse.separatrix((0, 1))


def test_separatrix_stays_on_stable_manifold():
    """Running the gradient flow forward from a traced point must approach the circle."""
    xi = (1.0, 0.2)
    rz = morse.trace_separatrix(xi)
    r, z = rz[len(rz) // 2]
    for _ in range(4000):
        g = morse.flat_gradient(xi, np.array([r, 0.0, z]))
        r, z = r + 1e-3 * g[0], z + 1e-3 * g[2]
    assert np.hypot(r, z) < 1e-2


@given(coord, coord, coord)
def test_fd_gradient_agrees_with_closed_form(x, y, z):
    from foldedtoric import calculus

    g = calculus.gradient(lambda p: float(morse.moment_component((1.3, -0.4), p)), np.array([x, y, z]))
    assert np.allclose(g, morse.flat_gradient((1.3, -0.4), [x, y, z]), atol=1e-8)
