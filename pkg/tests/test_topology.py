import math

import numpy as np
import pytest

from pt_horizon import (BoxSpec, CouplingPoint, InvalidInputError, Mode,
                        SliceSpec, components2d, components3d, membership,
                        sample_slice, segment_connected, trace_boundary)
from pt_horizon.model import eval_p, eval_q, eval_w
from pt_horizon.topology import grid_oracle_mismatches


class TestMembership:
    def test_origin(self):
        assert membership((0, 0, 0), 0.0, Mode.STRICT_SIMPLE) is True

    def test_pinch_point_modes(self):
        p = (math.sqrt(8), 0, 0)
        assert membership(p, 0.0, Mode.STRICT_SIMPLE) is False
        assert membership(p, 0.0, Mode.REAL_ONLY) is True

    def test_complex_point_both_modes(self):
        p = (0, math.sqrt(5), 0)
        for eta in (0.0, 1e-6, 0.5):
            assert membership(p, eta, Mode.STRICT_SIMPLE) is False
            assert membership(p, eta, Mode.REAL_ONLY) is False

    def test_negative_eta_rejected(self):
        with pytest.raises(InvalidInputError):
            membership((0, 0, 0), -1.0)


class TestSegmentConnected:
    def test_pinch_blocked(self):
        r8 = math.sqrt(8)
        assert segment_connected((r8 - 0.01, 0, 0), (r8 + 0.01, 0, 0), 0.0) is False

    def test_short_safe_segment(self):
        assert segment_connected((0, 0, 0), (0.1, 0, 0), 0.0) is True

    def test_fish_interval_segments(self):
        assert segment_connected((2.85, 0, 0), (2.95, 0, 0), 0.0) is True
        assert segment_connected((2.80, 0, 0), (2.90, 0, 0), 0.0) is False

    def test_real_only_heals_touch(self):
        r8 = math.sqrt(8)
        assert segment_connected((r8 - 0.01, 0, 0), (r8 + 0.01, 0, 0), 0.0,
                                 Mode.REAL_ONLY) is True

    def test_real_only_does_not_heal_crossing(self):
        assert segment_connected((0, 0.5, 0), (0, 1.5, 0), 0.0, Mode.REAL_ONLY) is False


class TestSliceSpec:
    def test_defaults(self):
        spec = SliceSpec("b", 0.1, resolution=64)
        assert spec.u_axis == "a" and spec.v_axis == "c"
        assert spec.u_range == (-3.6, 3.6)
        assert spec.v_range == (-3.6, 3.6)

    def test_fixed_a_free_axes(self):
        spec = SliceSpec("a", 0.0, resolution=64)
        assert spec.u_axis == "b" and spec.v_axis == "c"
        assert spec.u_range == (-2.3, 2.3)

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            SliceSpec("x", 0.0)
        with pytest.raises(InvalidInputError):
            SliceSpec("b", 0.0, resolution=8)
        with pytest.raises(InvalidInputError):
            SliceSpec("b", 0.0, u_range=(1.0, 1.0))
        with pytest.raises(InvalidInputError):
            SliceSpec("b", 0.0, eta=-1e-9)


class TestSampleSlice:
    def test_cell_center_sampling(self):
        spec = SliceSpec("b", 0.1, resolution=64)
        grid = sample_slice(spec)
        h = 7.2 / 64
        assert grid.u[0] == pytest.approx(-3.6 + h / 2)
        assert grid.u[-1] == pytest.approx(3.6 - h / 2)
        assert grid.membership.shape == (64, 64)

    def test_symmetry_under_sign_flip(self):
        # W, Q, P are invariant under (a, c) -> (-a, -c) at fixed b
        spec = SliceSpec("b", 0.1, resolution=64)
        grid = sample_slice(spec)
        assert np.array_equal(grid.membership, grid.membership[::-1, ::-1])
        assert np.array_equal(grid.W, grid.W[::-1, ::-1])

    def test_symmetry_under_b_flip(self):
        up = sample_slice(SliceSpec("b", 0.37, resolution=48))
        dn = sample_slice(SliceSpec("b", -0.37, resolution=48))
        assert np.array_equal(up.membership, dn.membership)
        assert np.array_equal(up.W, dn.W)

    def test_empty_slice_above_touching_plane(self):
        grid = sample_slice(SliceSpec("b", math.sqrt(5) - 0.01, resolution=64))
        assert not grid.membership.any()

    def test_values_match_direct_evaluation(self):
        spec = SliceSpec("c", 0.5, resolution=32)
        grid = sample_slice(spec)
        i, j = 7, 21
        a, b = grid.u[i], grid.v[j]
        assert grid.W[i, j] == eval_w(a, b, 0.5)
        assert grid.Q[i, j] == eval_q(a, b, 0.5)
        assert grid.P[i, j] == eval_p(a, b, 0.5)


class TestComponents2D:
    def test_counts_small_resolution(self):
        for b, expect in [(0.999, 1), (1.01, 2), (0.2, 3), (0.1, 3)]:
            rep = components2d(sample_slice(SliceSpec("b", b, resolution=200)))
            assert rep.count == expect, f"b={b}"

    def test_c0_slice_three_components(self):
        rep = components2d(sample_slice(SliceSpec("c", 0.0, resolution=200)))
        assert rep.count == 3

    def test_a0_slice_single_component(self):
        rep = components2d(sample_slice(SliceSpec("a", 0.0, resolution=200)))
        assert rep.count == 1

    def test_empty_slice(self):
        rep = components2d(sample_slice(SliceSpec("b", math.sqrt(5) - 0.01,
                                                  resolution=64)))
        assert rep.count == 0

    def test_labels_deterministic_and_canonical(self):
        spec = SliceSpec("c", 0.0, resolution=128)
        r1 = components2d(sample_slice(spec))
        r2 = components2d(sample_slice(spec))
        assert np.array_equal(r1.labels, r2.labels)
        seen = []
        for lbl in r1.labels.ravel():
            if lbl >= 0 and lbl not in seen:
                seen.append(lbl)
        assert seen == sorted(seen)  # first-encounter order is 0, 1, 2, ...

    def test_component_stats(self):
        rep = components2d(sample_slice(SliceSpec("b", 0.1, resolution=128)))
        total = sum(s.samples for s in rep.components)
        assert total == sum(1 for x in rep.labels.ravel() if x >= 0)
        for s in rep.components:
            assert s.area == pytest.approx(s.samples * (7.2 / 128) ** 2)

    def test_eta_stability(self):
        for eta in (0.0, 1e-9, 1e-6):
            rep = components2d(sample_slice(SliceSpec("c", 0.0, resolution=200,
                                                      eta=eta)))
            assert rep.count == 3, f"eta={eta}"

    def test_b0_modes(self):
        strict = components2d(sample_slice(SliceSpec("b", 0.0, resolution=200)))
        assert strict.count == 3
        real = components2d(sample_slice(SliceSpec("b", 0.0, resolution=200,
                                                   mode=Mode.REAL_ONLY)))
        assert real.count == 1
        (alo, ahi), (clo, chi) = real.components[0].bbox
        assert -3 < alo < -2.9 and 2.9 < ahi < 3
        assert -1 < clo < -0.98 and 0.98 < chi < 1


class TestGridOracleAgreement:
    @pytest.mark.parametrize("axis,val", [("b", 0.1), ("b", 1.01), ("c", 0.0),
                                          ("a", 0.0), ("b", 0.0)])
    def test_no_mismatches(self, axis, val):
        grid = sample_slice(SliceSpec(axis, val, resolution=96))
        assert grid_oracle_mismatches(grid) == 0


class TestComponents3D:
    def test_default_box_small(self):
        rep = components3d(BoxSpec(resolution=48))
        assert rep.count == 3

    def test_p_only_single_ellipsoid(self):
        rep = components3d(BoxSpec(resolution=48, factors=("P",)))
        assert rep.count == 1

    def test_q_only_three_pieces(self):
        rep = components3d(BoxSpec(resolution=48, factors=("Q",)))
        assert rep.count == 3

    def test_resolution_guard(self):
        with pytest.raises(InvalidInputError):
            BoxSpec(resolution=16)
        with pytest.raises(InvalidInputError):
            BoxSpec(resolution=1001)

    def test_factor_guard(self):
        with pytest.raises(InvalidInputError):
            BoxSpec(resolution=48, factors=("X",))


class TestTraceBoundary:
    def test_p_circle(self):
        spec = SliceSpec("b", 1.5, resolution=200)
        curves = trace_boundary(spec, "P")
        assert len(curves) == 1
        curve = curves[0]
        assert curve.closed
        radii = np.sqrt((curve.polyline ** 2).sum(axis=1))
        target = math.sqrt(10 - 2 * 1.5 ** 2)
        cell_diag = math.hypot(7.2 / 200, 7.2 / 200)
        assert np.abs(radii - target).max() < 2 * cell_diag

    def test_q_lines_at_b0(self):
        spec = SliceSpec("b", 0.0, resolution=128)
        curves = trace_boundary(spec, "Q")
        pts = np.concatenate([c.polyline for c in curves])
        # the zero set is the union of a = +-3 and c = +-1
        dist = np.minimum(np.abs(np.abs(pts[:, 0]) - 3), np.abs(np.abs(pts[:, 1]) - 1))
        assert dist.max() < 1e-6

    def test_w_contour_at_b1_contains_antidiagonal(self):
        spec = SliceSpec("b", 1.0, resolution=128)
        curves = trace_boundary(spec, "W")
        pts = np.concatenate([c.polyline for c in curves])
        # the a + c = 0 line is part of the zero set; look for vertices on it
        on_diag = np.abs(pts[:, 0] + pts[:, 1]) < 1e-6
        assert on_diag.sum() > 50

    def test_vertices_lie_on_zero_set(self):
        spec = SliceSpec("b", 0.3, resolution=100)
        for factor in ("W", "Q", "P"):
            for curve in trace_boundary(spec, factor):
                for u, v in curve.polyline[:: max(1, len(curve.polyline) // 20)]:
                    p = CouplingPoint(u, 0.3, v)
                    val = {"W": eval_w, "Q": eval_q, "P": eval_p}[factor](u, 0.3, v)
                    assert abs(val) < 1e-6 * (1 + p.norm() ** 4)

    def test_clip_removes_far_segments(self):
        spec = SliceSpec("b", 0.0, resolution=128)
        full = trace_boundary(spec, "W")
        clipped = trace_boundary(spec, "W", clip=True)
        n_full = sum(len(c.polyline) for c in full)
        n_clip = sum(len(c.polyline) for c in clipped)
        assert n_clip <= n_full
