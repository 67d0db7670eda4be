import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thinlinks.curves import (Arc, CurvatureViolation, DegeneratePrimitive,
                              JointMismatch, OutOfRange, Segment, build_curve,
                              diameter, evaluate, from_json_dict, length,
                              min_self_distance, self_intersects, subcurve,
                              to_json_dict, transformed)

from conftest import rotation_matrix, stadium


def test_unit_circle_basics(unit_circle):
    assert length(unit_circle) == pytest.approx(2.0 * math.pi, abs=1e-12)
    pose = evaluate(unit_circle, math.pi / 2)
    assert np.allclose(pose.point, [0.0, 1.0, 0.0], atol=1e-12)
    assert np.allclose(pose.tangent, [-1.0, 0.0, 0.0], atol=1e-12)


def test_segment_midpoint():
    seg = build_curve([Segment((0, 0, 0), (3, 0, 0))], closed=False, kappa=1.0)
    pose = evaluate(seg, 1.5)
    assert np.allclose(pose.point, [1.5, 0, 0])
    assert np.allclose(pose.tangent, [1, 0, 0])
    assert diameter(seg, 64) == pytest.approx(3.0, abs=1e-9)


def test_right_angle_corner_rejected():
    with pytest.raises(JointMismatch):
        build_curve([Segment((0, 0, 0), (1, 0, 0)), Segment((1, 0, 0), (1, 1, 0))],
                    closed=False, kappa=1.0)


def test_curvature_violation():
    arc = Arc((0, 0, 0), (0, 0, 1), 0.5, (0.5, 0, 0), math.pi, 1)
    with pytest.raises(CurvatureViolation):
        build_curve([arc], closed=False, kappa=1.0)


def test_zero_length_segment_rejected():
    with pytest.raises(DegeneratePrimitive):
        Segment((1, 2, 3), (1, 2, 3))


def test_evaluate_out_of_range(unit_circle):
    with pytest.raises(OutOfRange):
        evaluate(unit_circle, -0.5)
    with pytest.raises(OutOfRange):
        evaluate(unit_circle, unit_circle.length + 0.5)


def test_closed_curve_endpoints_agree(beta_half):
    p0 = evaluate(beta_half, 0.0)
    p1 = evaluate(beta_half, beta_half.length)
    assert np.allclose(p0.point, p1.point, atol=1e-9)
    assert np.allclose(p0.tangent, p1.tangent, atol=1e-9)


def test_stadium_length(beta_half):
    assert beta_half.length == pytest.approx(2.0 * (math.pi + 1.0), abs=1e-12)


def test_gamma_half_length_vs_polyline_quadrature(gamma_half):
    # independent oracle: chord-sum length of a dense polyline
    s = np.linspace(0.0, gamma_half.length, 200001)
    pts = gamma_half.points_at(s)
    poly = float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))
    closed_form = 2.0 * math.pi + 8.0 * math.acos(0.75)
    assert gamma_half.length == pytest.approx(closed_form, abs=1e-12)
    assert poly == pytest.approx(closed_form, abs=1e-6)


def test_joint_tangents_agree(gamma_half):
    cum = np.concatenate([[0.0], np.cumsum(gamma_half.piece_lengths)])
    for i, p in enumerate(gamma_half.primitives):
        left = p.end_pose()
        nxt = gamma_half.primitives[(i + 1) % len(gamma_half.primitives)]
        right = nxt.start_pose()
        assert np.linalg.norm(left.point - right.point) <= 1e-9
        assert np.linalg.norm(left.tangent - right.tangent) <= 1e-9
        # evaluating at the joint from the curve agrees with both sides
        s_joint = cum[i + 1] % gamma_half.length
        pose = evaluate(gamma_half, s_joint)
        assert np.linalg.norm(pose.point - left.point) <= 1e-9


@given(axis=st.tuples(*[st.floats(-1, 1) for _ in range(3)]),
       angle=st.floats(0, 2 * math.pi),
       shift=st.tuples(*[st.floats(-5, 5) for _ in range(3)]))
def test_length_rigid_motion_invariant(axis, angle, shift):
    if np.linalg.norm(axis) < 1e-3:
        axis = (1.0, 0.0, 0.0)
    curve = stadium(1.0, 0.5, 1.0)
    R = rotation_matrix(axis, angle)
    moved = transformed(curve, R, np.array(shift))
    assert moved.length == pytest.approx(curve.length, rel=1e-12)


def test_diameter_circle(unit_circle):
    assert diameter(unit_circle, 1000) == pytest.approx(2.0, abs=1e-5)


def test_diameter_gamma_half(gamma_half):
    # oracle: brute-force pairwise max over dense samples
    s = gamma_half.uniform_params(6000)
    pts = gamma_half.points_at(s)
    best = 0.0
    for lo in range(0, 6000, 1500):
        D = np.linalg.norm(pts[lo:lo + 1500, None, :] - pts[None, :, :], axis=2)
        best = max(best, float(D.max()))
    expected = 2.0 * (math.sqrt(4.0 - 2.25) + 1.0)
    assert best == pytest.approx(expected, abs=1e-5)
    assert diameter(gamma_half, 4000) == pytest.approx(expected, abs=1e-6)


def test_diameter_monotone_refinement(gamma_half, unit_circle):
    for curve in (gamma_half, unit_circle):
        d1 = diameter(curve, 200)
        d2 = diameter(curve, 400)
        assert d2 >= d1 - 1e-9


def test_finite_difference_curvature_bounded(gamma_half):
    s = np.linspace(0.1, gamma_half.length - 0.1, 2000)
    h = 1e-5
    _, t_plus = gamma_half.sample(s + h)
    _, t_minus = gamma_half.sample(s - h)
    rate = np.linalg.norm(t_plus - t_minus, axis=1) / (2 * h)
    # joints give intermediate values; everywhere the bound holds
    assert float(rate.max()) <= gamma_half.kappa + 1e-6


def test_self_intersects_circle(unit_circle):
    assert self_intersects(unit_circle, 1e-6) is None


def test_self_intersects_doubled_circle():
    a1 = Arc((0, 0, 0), (0, 0, 1), 1.0, (1, 0, 0), 2 * math.pi, 1)
    a2 = Arc((0, 0, 0), (0, 0, 1), 1.0, (1, 0, 0), 2 * math.pi, 1)
    doubled = build_curve([a1, a2], closed=True, kappa=1.0)
    w = self_intersects(doubled, 1e-6)
    assert w is not None
    assert w.distance <= 1e-6


def test_self_intersects_gamma_half(gamma_half):
    assert self_intersects(gamma_half, 1e-6) is None
    d, _, _ = min_self_distance(gamma_half, math.pi)
    assert d == pytest.approx(1.0, abs=1e-6)


def test_subcurve_lengths(gamma_half):
    L = gamma_half.length
    sub = subcurve(gamma_half, 1.0, 4.0)
    assert sub.length == pytest.approx(3.0, abs=1e-9)
    wrap = subcurve(gamma_half, L - 1.0, 1.0)
    assert wrap.length == pytest.approx(2.0, abs=1e-9)
    assert np.allclose(wrap.points_at([0.0])[0],
                       gamma_half.points_at([L - 1.0])[0], atol=1e-9)


def test_json_roundtrip(gamma_half, beta_half):
    for curve in (gamma_half, beta_half):
        data = json.loads(json.dumps(to_json_dict(curve)))
        back = from_json_dict(data)
        assert back.length == curve.length  # bit-exact through repr round-trip
        s = np.linspace(0, curve.length, 37)
        assert np.allclose(back.points_at(s), curve.points_at(s), rtol=0, atol=1e-15)
