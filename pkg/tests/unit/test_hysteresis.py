"""Unit tests for hysteresis curves and loop areas."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmemsim.models import DegenerateCurve, HysteresisCurve
from qmemsim.services.analysis.hysteresis import (
    build_curve,
    compare_to_classical,
    loop_area_first_period,
    loop_area_standard_error,
)
from qmemsim.utils.numerics import shoelace, sign_change_times


@pytest.fixture
def circle() -> HysteresisCurve:
    """Unit circle traversed once counter-clockwise, 1000 samples."""
    t = np.linspace(0, 2 * math.pi, 1000)
    return build_curve(t, np.cos(t), np.sin(t))


def figure_eight(radius: float = 1.0, n: int = 2000) -> HysteresisCurve:
    """Two circles touching at the origin, traversed with opposite orientation."""
    theta = np.linspace(0, 2 * math.pi, n)
    left_v = -radius + radius * np.cos(theta)
    right_v = radius - radius * np.cos(theta[1:])
    v = np.concatenate([left_v, right_v])
    i = np.concatenate([radius * np.sin(theta), radius * np.sin(theta[1:])])
    t = np.arange(len(v), dtype=float)
    return build_curve(t, v, i)


def test_shoelace_unit_square():
    """Test the shoelace rule on a counter-clockwise unit square."""
    assert shoelace(np.array([0, 1, 1, 0]), np.array([0, 0, 1, 1])) == pytest.approx(1.0)
    assert shoelace(np.array([0, 0, 1, 1]), np.array([0, 1, 1, 0])) == pytest.approx(-1.0)


def test_circle_area(circle: HysteresisCurve):
    """Test total area pi for the unit circle."""
    assert circle.total_area == pytest.approx(math.pi, abs=1e-4)
    assert all(lobe.signed_area > 0 for lobe in circle.lobes)


def test_circle_lobes_partition_the_curve(circle: HysteresisCurve):
    """Test two lobes, one of them wrapping around the closed curve."""
    assert len(circle.lobes) == 2
    wrapped = [lobe for lobe in circle.lobes if lobe.start_index > lobe.end_index]
    assert len(wrapped) == 1


def test_segment_forth_and_back_has_zero_area():
    """Test that a degenerate loop has no area."""
    forth = np.linspace(-1, 1, 50)
    v = np.concatenate([forth, forth[::-1][1:]])
    t = np.arange(len(v), dtype=float)
    curve = build_curve(t, v, 2 * v)
    assert curve.total_area == pytest.approx(0.0, abs=1e-12)


def test_figure_eight_area():
    """Test that opposite lobes add up instead of cancelling."""
    curve = figure_eight()
    areas = sorted(lobe.signed_area for lobe in curve.lobes)
    assert len(areas) == 2
    assert areas[0] == pytest.approx(-math.pi, rel=1e-4)
    assert areas[1] == pytest.approx(math.pi, rel=1e-4)
    assert curve.total_area == pytest.approx(2 * math.pi, rel=1e-4)


def test_too_few_samples():
    """Test that fewer than four samples are degenerate."""
    with pytest.raises(DegenerateCurve):
        build_curve(np.arange(3.0), np.array([1.0, -1.0, 1.0]), np.zeros(3))


def test_no_zero_crossing():
    """Test that a curve that never crosses zero is degenerate."""
    t = np.linspace(0, 1, 10)
    with pytest.raises(DegenerateCurve, match="never crosses zero"):
        build_curve(t, 1.0 + t, t)


def test_crossing_interpolated():
    """Test that lobe boundaries sit at the interpolated crossing time."""
    t = np.arange(6, dtype=float)
    v = np.array([1.0, 1.0, 1.0, -3.0, -1.0, -1.0])
    curve = build_curve(t, v, np.ones(6))
    assert curve.lobes[0].t_end == pytest.approx(2.25)
    assert curve.lobes[1].t_start == pytest.approx(2.25)


def test_zero_touch_stays_inside_its_lobe():
    """Test that v touching zero without changing sign does not split a lobe."""
    t = np.arange(8, dtype=float)
    v = np.array([1.0, 0.5, 0.0, 0.5, 1.0, -1.0, -2.0, -1.0])
    curve = build_curve(t, v, t)
    assert len(curve.lobes) == 2
    assert [curve.lobes[0].t_end] == sign_change_times(t, v)
    assert curve.lobes[0].t_end == pytest.approx(4.5)
    assert curve.lobes[0].end_index == 4


def test_zero_run_boundaries_match_sign_changes():
    """Test that lobes split at the first sample of each zero run between opposite signs."""
    t = np.arange(9, dtype=float)
    v = np.array([1.0, 1.0, 0.0, 0.0, -1.0, -1.0, 0.0, 1.0, 1.0])
    curve = build_curve(t, v, t + 1.0)
    assert sign_change_times(t, v) == [2.0, 6.0]
    assert [lobe.t_end for lobe in curve.lobes[:-1]] == [2.0, 6.0]
    assert [lobe.t_start for lobe in curve.lobes[1:]] == [2.0, 6.0]


def test_samples_in_time_order(circle: HysteresisCurve):
    """Test the (time, v, i) view of the curve."""
    samples = circle.samples
    assert len(samples) == 1000
    assert samples[0] == (0.0, 1.0, 0.0)
    assert [s[0] for s in samples] == sorted(s[0] for s in samples)


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(min_value=0.5, max_value=3.0),
    b=st.floats(min_value=0.5, max_value=3.0),
    freq=st.integers(min_value=1, max_value=3),
    phase=st.floats(min_value=0.1, max_value=1.4),
    n=st.integers(min_value=50, max_value=400),
)
def test_time_reversal_flips_lobe_areas(a, b, freq, phase, n):
    """Test that reversing the samples flips every lobe's sign but keeps the total."""
    t = np.linspace(0, 2 * math.pi, n)
    v = a * np.sin(freq * t + phase)
    i = b * np.sin(t)
    forward = build_curve(t, v, i)
    backward = build_curve(t[::-1].copy(), v[::-1].copy(), i[::-1].copy())
    assert backward.total_area == pytest.approx(forward.total_area, rel=1e-9, abs=1e-12)
    assert sorted(l.signed_area for l in backward.lobes) == pytest.approx(
        sorted(-l.signed_area for l in forward.lobes), rel=1e-9, abs=1e-12
    )


def test_first_period_area_restricts_to_one_period():
    """Test that only t in [0, 2 pi] contributes."""
    t = np.linspace(0, 4 * math.pi, 2001)
    radius = np.where(t <= 2 * math.pi, 1.0, 2.0)
    curve = build_curve(t, radius * np.cos(t), radius * np.sin(t))
    assert loop_area_first_period(curve) == pytest.approx(math.pi, abs=1e-4)


def test_first_period_needs_a_full_period():
    """Test that a curve shorter than one period is degenerate."""
    t = np.linspace(0, math.pi, 100)
    curve = build_curve(t, np.cos(t), np.sin(t))
    with pytest.raises(DegenerateCurve, match="shorter than one period"):
        loop_area_first_period(curve)


def test_area_standard_error_scales_with_sample_errors():
    """Test the propagated area error: zero without errors, linear in them."""
    t = np.linspace(0, 2 * math.pi, 500)
    bare = build_curve(t, np.cos(t), np.sin(t))
    assert loop_area_standard_error(bare) == 0.0
    se = np.full_like(t, 0.01)
    one = loop_area_standard_error(build_curve(t, np.cos(t), np.sin(t), se_v=se, se_i=se))
    two = loop_area_standard_error(build_curve(t, np.cos(t), np.sin(t), se_v=2 * se, se_i=2 * se))
    assert one > 0
    assert two == pytest.approx(2 * one)


def test_compare_identical_curves():
    """Test that a curve agrees perfectly with itself."""
    t = np.linspace(0, 2 * math.pi, 400)
    curve = build_curve(t, np.cos(t), 0.3 * np.sin(t))
    agreement = compare_to_classical(curve, curve)
    assert agreement.area_rel_diff == pytest.approx(0.0, abs=1e-12)
    assert agreement.curve_rel_l2 == pytest.approx(0.0, abs=1e-12)
    assert agreement.agrees


def test_compare_scaled_curve_disagrees():
    """Test that a loop twice as large fails the area tolerance."""
    t = np.linspace(0, 2 * math.pi, 400)
    classical = build_curve(t, np.cos(t), np.sin(t))
    quantum = build_curve(t, 2 * np.cos(t), 2 * np.sin(t))
    agreement = compare_to_classical(quantum, classical)
    assert agreement.area_rel_diff == pytest.approx(3.0, rel=1e-6)
    assert not agreement.agrees
