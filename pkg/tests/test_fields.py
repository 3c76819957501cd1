"""Multi-index enumeration, builtin fields, and grid fields."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgls import (
    DerivativeOrderError,
    MultiIndex,
    OutOfDomainError,
    bump_field,
    gaussian_field,
    grid_field,
    grid_field_from_csv,
    multi_indices_up_to,
    poly_times_bump_field,
    scale_field,
    write_grid_csv,
)


# ---------------------------------------------------------------------------
# multi-indices
# ---------------------------------------------------------------------------


def test_multi_indices_d2_m1_order():
    got = [mi.components for mi in multi_indices_up_to(2, 1)]
    assert got == [(0, 0), (1, 0), (0, 1)]


def test_multi_indices_d1_m2():
    got = [mi.components for mi in multi_indices_up_to(1, 2)]
    assert got == [(0,), (1,), (2,)]


def test_multi_indices_d3_m2_count_and_set():
    got = multi_indices_up_to(3, 2)
    assert len(got) == math.comb(5, 3) == 10
    # brute-force oracle: enumerate the cube and filter
    brute = {
        (i, j, k)
        for i in range(3)
        for j in range(3)
        for k in range(3)
        if i + j + k <= 2
    }
    assert {mi.components for mi in got} == brute
    assert len(set(got)) == len(got)


@given(d=st.integers(1, 4), m=st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_multi_indices_count_and_grading(d, m):
    got = multi_indices_up_to(d, m)
    assert len(got) == math.comb(d + m, d)
    assert got[0] == MultiIndex.zero(d)
    # graded: degrees never decrease; within a degree, larger leading
    # components come first
    keys = [(mi.order, tuple(-a for a in mi.components)) for mi in got]
    assert keys == sorted(keys)


def test_multi_index_validation():
    with pytest.raises(ValueError):
        MultiIndex(())
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    mi = MultiIndex((2, 0, 1))
    assert mi.order == 3 and mi.dim == 3 and mi.normal_component == 1


# ---------------------------------------------------------------------------
# analytic builtins
# ---------------------------------------------------------------------------


def test_gaussian_point_values():
    g = gaussian_field(1, scale=1.0)
    assert g.eval((0.0,)) == 1.0
    assert g.deriv((1,), (0.0,)) == 0.0
    assert g.deriv((2,), (0.0,)) == pytest.approx(-1.0, abs=1e-14)


def test_gaussian_zero_index_is_eval():
    g = gaussian_field(2, scale=0.7)
    pts = np.array([[0.3, -0.2], [1.0, 2.0]])
    assert np.array_equal(g.deriv((0, 0), pts), g.eval(pts))


def _central_fd(field, alpha, x, h):
    """Nested central differences, one axis at a time."""
    x = np.asarray(x, dtype=float)

    def rec(a, point):
        for axis, n in enumerate(a):
            if n > 0:
                e = np.zeros_like(point)
                e[axis] = h
                lower = list(a)
                lower[axis] -= 1
                return (rec(lower, point + e) - rec(lower, point - e)) / (2 * h)
        return field.eval(tuple(point))

    return rec(list(alpha), x)


@pytest.mark.parametrize("alpha", [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)])
def test_gaussian_derivatives_match_finite_differences(alpha):
    g = gaussian_field(2, scale=0.9, center=(0.1, -0.3))
    rng = np.random.default_rng(7)
    hs = np.array([1e-2, 5e-3, 2.5e-3])
    for _ in range(3):
        x = rng.uniform(-1.0, 1.0, size=2)
        exact = g.deriv(alpha, tuple(x))
        errs = np.array([abs(_central_fd(g, alpha, x, h) - exact) for h in hs])
        if errs.max() < 1e-11:
            continue  # already at rounding level
        slope = np.polyfit(np.log(hs), np.log(np.maximum(errs, 1e-300)), 1)[0]
        assert slope >= 1.8, (alpha, x, errs, slope)


def test_poly_bump_values():
    f = poly_times_bump_field([0.0, 1.0], cutoff_radius=2.0, dim=2)  # P(t) = t
    assert f.eval((0.0, 0.5)) == pytest.approx(0.5, abs=1e-14)
    one = poly_times_bump_field([1.0], cutoff_radius=2.0, dim=2)
    assert one.eval((0.3, 0.7)) == pytest.approx(1.0, abs=1e-14)


def test_poly_bump_second_derivative():
    f = poly_times_bump_field([0.0, 0.0, 1.0], cutoff_radius=2.0, dim=2)  # t^2
    # alpha_d = 2 at the boundary: (t^2)'' = 2, times the tangential bump
    assert f.deriv((0, 2), (0.0, 0.0)) == pytest.approx(2.0, abs=1e-12)
    assert f.deriv((0, 2), (5.0, 0.0)) == 0.0  # outside the bump support


def test_poly_bump_degree_cap():
    with pytest.raises(DerivativeOrderError):
        poly_times_bump_field([0.0] * 12 + [1.0], cutoff_radius=1.0, dim=2)


def test_bump_field_support_and_plateau():
    f = bump_field(2, center=(0.0, 1.5), inner=0.25, outer=0.5)
    assert f.eval((0.0, 1.5)) == 1.0
    assert f.eval((0.1, 1.6)) == 1.0  # inside the plateau box
    assert f.eval((0.0, 2.1)) == 0.0
    assert f.eval((0.6, 1.5)) == 0.0
    mid = f.eval((0.0, 1.875))  # inside the taper ring
    assert 0.0 < mid < 1.0


def test_scale_field_is_linear():
    g = gaussian_field(1)
    h = scale_field(g, -2.5)
    x = (0.4,)
    assert h.eval(x) == pytest.approx(-2.5 * g.eval(x), rel=1e-15)
    assert h.deriv((2,), x) == pytest.approx(-2.5 * g.deriv((2,), x), rel=1e-13)


def test_decay_certificate_bounds_all_derivatives():
    g = gaussian_field(2, scale=1.1, center=(0.2, 0.0))
    tol = 1e-10
    radius = g.decay_radius(tol)
    rng = np.random.default_rng(3)
    # points on the certificate boundary in the sup norm
    for _ in range(20):
        x = rng.uniform(-1.0, 1.0, size=2)
        x = x / np.max(np.abs(x)) * radius * rng.uniform(1.0, 1.5)
        for alpha in multi_indices_up_to(2, g.m_max)[:12]:
            assert abs(g.deriv(alpha, tuple(x))) <= tol


def test_deriv_order_above_m_max_rejected():
    g = gaussian_field(1)
    with pytest.raises(DerivativeOrderError):
        g.deriv((g.m_max + 1,), (0.0,))


# ---------------------------------------------------------------------------
# grid fields
# ---------------------------------------------------------------------------


def test_grid_field_constant():
    samples = np.ones((8, 8))
    f = grid_field(samples, spacing=0.1, origin=(0.0, 0.0))
    assert f.eval((0.33, 0.41)) == pytest.approx(1.0, abs=1e-12)
    assert f.deriv((1, 0), (0.3, 0.3)) == pytest.approx(0.0, abs=1e-12)
    assert f.deriv((0, 1), (0.3, 0.3)) == pytest.approx(0.0, abs=1e-12)


def test_grid_field_linear_ramp():
    axis = 0.05 * np.arange(12)
    samples = np.broadcast_to(axis[:, None], (12, 12)).copy()
    f = grid_field(samples, spacing=0.05, origin=(0.0, 0.0))
    assert f.deriv((1, 0), (0.3, 0.3)) == pytest.approx(1.0, abs=1e-10)
    assert f.deriv((0, 1), (0.3, 0.3)) == pytest.approx(0.0, abs=1e-10)


def test_grid_field_sine_derivative():
    spacing = math.pi / 64
    t = spacing * np.arange(65)
    f = grid_field(np.sin(t), spacing=spacing, origin=(0.0,))
    # d/dx sin at pi/2 is 0; central differences are O(spacing^2)
    assert abs(f.deriv((1,), (math.pi / 2,))) <= 2 * spacing**2


def test_grid_field_errors():
    f = grid_field(np.ones((6, 6)), spacing=0.1, origin=(0.0, 0.0))
    with pytest.raises(DerivativeOrderError):
        f.deriv((2, 1), (0.2, 0.2))
    with pytest.raises(OutOfDomainError):
        f.eval((2.0, 0.2))
    with pytest.raises(ValueError):
        grid_field(np.ones((3, 3)), spacing=0.1, origin=(0.0, 0.0))


def test_grid_csv_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    samples = rng.random((6, 7))
    path = tmp_path / "grid.csv"
    write_grid_csv(path, samples, spacing=0.25, origin=(1.0, -0.5))
    f = grid_field_from_csv(path)
    assert f.dim == 2
    assert f.eval((1.0, -0.5)) == pytest.approx(samples[0, 0], abs=1e-12)
    assert f.eval((1.0 + 5 * 0.25, -0.5 + 6 * 0.25)) == pytest.approx(
        samples[5, 6], abs=1e-12
    )
