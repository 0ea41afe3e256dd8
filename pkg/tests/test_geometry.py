import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cabinetkit import CabinetModel, OrientedBox, make_instance
from cabinetkit.geometry import (
    box_corners,
    box_footprint,
    clip_convex,
    iou3d,
    merge_segments,
    model_aabb,
    polygon_area,
    project_box,
)
from helpers import aabb_iou_oracle, random_box

SQRT2 = math.sqrt(2.0)


def box(pos, size, rot=0.0):
    return OrientedBox(pos, size, rot)


finite_pos = st.floats(-4000, 4000)
positive_size = st.floats(1.0, 2000.0)
rotations = st.floats(-720, 720)


@st.composite
def boxes(draw):
    return OrientedBox(
        (draw(finite_pos), draw(finite_pos), draw(finite_pos)),
        (draw(positive_size), draw(positive_size), draw(positive_size)),
        draw(rotations),
    )


class TestOrientedBox:
    def test_rotation_canonicalized(self):
        assert box((0, 0, 0), (1, 1, 1), 450).rotation_deg == 90
        assert box((0, 0, 0), (1, 1, 1), -90).rotation_deg == 270
        assert box((0, 0, 0), (1, 1, 1), 360).rotation_deg == 0

    def test_zero_size_rejected(self):
        with pytest.raises(ValueError):
            box((0, 0, 0), (1, 0, 1))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            box((math.nan, 0, 0), (1, 1, 1))
        with pytest.raises(ValueError):
            box((0, 0, 0), (math.inf, 1, 1))

    @given(boxes())
    def test_rotation_always_in_range(self, b):
        assert 0.0 <= b.rotation_deg < 360.0


class TestCorners:
    def test_identity_rotation(self):
        corners = box_corners(box((0, 0, 0), (2, 2, 2)))
        expected = {(sx, sy, sz) for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)}
        assert {tuple(c) for c in corners} == expected

    def test_quarter_turn_swaps_footprint(self):
        corners = box_corners(box((0, 0, 0), (2, 4, 2), 90))
        xs = corners[:, 0]
        ys = corners[:, 1]
        assert xs.min() == -2 and xs.max() == 2
        assert ys.min() == -1 and ys.max() == 1

    def test_rotated_cube_footprint_vertex(self):
        foot = box_footprint(box((0, 0, 0), (1, 1, 1), 45))
        assert any(
            abs(x - SQRT2 / 2) < 1e-12 and abs(y) < 1e-12 for x, y in foot
        )


class TestClip:
    def test_self_clip_is_identity(self):
        poly = box_footprint(box((3, 4, 0), (2, 5, 1), 30))
        assert clip_convex(poly, poly) == poly

    def test_disjoint_is_empty(self):
        a = box_footprint(box((0, 0, 0), (1, 1, 1)))
        b = box_footprint(box((5, 5, 0), (1, 1, 1)))
        assert clip_convex(a, b) == []

    @given(st.integers(0, 10_000))
    @settings(max_examples=150, deadline=None)
    def test_clip_properties(self, seed):
        rng = np.random.default_rng(seed)
        a = box_footprint(random_box(rng, rotations=(0, 15, 37, 90, 145)))
        b = box_footprint(random_box(rng, rotations=(0, 15, 37, 90, 145)))
        result = clip_convex(a, b)
        area = polygon_area(result)
        assert area <= min(polygon_area(a), polygon_area(b)) + 1e-6
        # convex and CCW: every cross product non-negative
        if len(result) >= 3:
            n = len(result)
            for i in range(n):
                ox, oy = result[i]
                ax, ay = result[(i + 1) % n]
                bx, by = result[(i + 2) % n]
                cross = (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
                assert cross >= -1e-6


class TestIoU:
    def test_identical_is_exactly_one(self):
        for rot in (0, 45, 90, 137):
            b = box((100, 50, 25), (30, 40, 50), rot)
            assert iou3d(b, b) == 1.0

    def test_disjoint_z_is_zero(self):
        a = box((0, 0, 0), (2, 2, 2))
        b = box((0, 0, 10), (2, 2, 2))
        assert iou3d(a, b) == 0.0

    def test_offset_unit_cubes_analytic(self):
        a = box((0, 0, 0), (1, 1, 1))
        b = box((0.5, 0, 0), (1, 1, 1))
        assert abs(iou3d(a, b) - 1.0 / 3.0) < 1e-9

    def test_tangent_boxes_are_zero(self):
        a = box((0, 0, 0), (2, 2, 2))
        assert iou3d(a, box((2, 0, 0), (2, 2, 2))) == 0.0  # shared face in x
        assert iou3d(a, box((0, 0, 2), (2, 2, 2))) == 0.0  # shared face in z

    @given(st.integers(0, 10_000))
    @settings(max_examples=200, deadline=None)
    def test_symmetry_and_translation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        a = random_box(rng, rotations=(0, 30, 45, 90, 215))
        b = random_box(rng, rotations=(0, 30, 45, 90, 215))
        assert abs(iou3d(a, b) - iou3d(b, a)) <= 1e-12
        shift = rng.uniform(-500, 500, 3)
        assert abs(iou3d(a, b) - iou3d(a.translated(shift), b.translated(shift))) <= 1e-9

    @given(st.integers(0, 10_000))
    @settings(max_examples=200, deadline=None)
    def test_right_angle_rotations_match_aabb_oracle(self, seed):
        rng = np.random.default_rng(seed)
        a = random_box(rng, rotations=(0, 90, 180, 270))
        b = random_box(rng, rotations=(0, 90, 180, 270))
        assert abs(iou3d(a, b) - aabb_iou_oracle(a, b)) <= 1e-9
        assert abs(iou3d(a, b, method="aabb") - aabb_iou_oracle(a, b)) <= 1e-9

    def test_monotone_shrink(self):
        rng = np.random.default_rng(5)
        outer = box((0, 0, 0), (100, 100, 100))
        previous = 1.0
        for t in np.linspace(1.0, 0.05, 20):
            inner = box((0, 0, 0), (100 * t, 100 * t, 100 * t))
            current = iou3d(outer, inner)
            assert current <= previous + 1e-12
            previous = current

    def test_result_in_unit_interval(self):
        rng = np.random.default_rng(123)
        for _ in range(200):
            a = random_box(rng, rotations=(0, 10, 45, 80))
            b = random_box(rng, rotations=(0, 10, 45, 80))
            v = iou3d(a, b)
            assert 0.0 <= v <= 1.0


class TestProjection:
    def test_axis_aligned_front_view_is_rectangle(self):
        segments = project_box(box((5, 5, 5), (2, 4, 6)), "front")
        assert len(segments) == 4

    def test_rotated_top_view_is_rotated_rectangle(self):
        segments = project_box(box((0, 0, 0), (2, 4, 2), 45), "top")
        assert len(segments) == 4

    def test_rotated_front_view_has_interior_lines(self):
        segments = project_box(box((0, 0, 0), (2, 4, 2), 45), "front")
        assert len(segments) == 6

    def test_unknown_view_rejected(self):
        with pytest.raises(ValueError):
            project_box(box((0, 0, 0), (1, 1, 1)), "rear")


class TestMergeSegments:
    def test_duplicates_collapse(self):
        seg = ((0.0, 0.0), (10.0, 0.0))
        assert merge_segments([seg, seg]) == [seg]

    def test_overlapping_collinear_merge(self):
        merged = merge_segments([((0, 0), (6, 0)), ((4, 0), (10, 0))])
        assert merged == [((0, 0), (10, 0))]

    def test_touching_merge_but_gap_stays(self):
        merged = merge_segments([((0, 0), (5, 0)), ((5, 0), (9, 0))])
        assert merged == [((0, 0), (9, 0))]
        kept = merge_segments([((0, 0), (4, 0)), ((5, 0), (9, 0))])
        assert len(kept) == 2

    def test_idempotent(self):
        rng = np.random.default_rng(9)
        segments = []
        for b in (random_box(rng, rotations=(0, 45, 90)) for _ in range(12)):
            segments.extend(project_box(b, "front"))
        once = merge_segments(segments)
        assert merge_segments(once) == once

    def test_parallel_lines_stay_apart(self):
        merged = merge_segments([((0, 0), (5, 0)), ((0, 1), (5, 1))])
        assert len(merged) == 2


class TestModelAabb:
    def test_single_cube_centered_at_origin(self, catalog):
        model = CabinetModel(
            (make_instance(catalog, "M-DOOR", box((0, 0, 0), (1, 1, 1))),)
        )
        lo, hi = model_aabb(model)
        assert np.allclose(lo, (-0.5, -0.5, -0.5))
        assert np.allclose(hi, (0.5, 0.5, 0.5))

    def test_stacked_boxes_union(self, catalog):
        model = CabinetModel(
            (
                make_instance(catalog, "M-DOOR", box((0, 0, 1), (2, 2, 2))),
                make_instance(catalog, "M-DOOR", box((0, 0, 3), (2, 2, 2))),
            )
        )
        lo, hi = model_aabb(model)
        assert lo[2] == 0 and hi[2] == 4

    def test_matches_corner_enumeration(self, catalog):
        rng = np.random.default_rng(77)
        instances = tuple(
            make_instance(catalog, "M-SIDE", random_box(rng, rotations=(0, 30, 90)))
            for _ in range(10)
        )
        model = CabinetModel(instances)
        lo, hi = model_aabb(model)
        corners = np.vstack([box_corners(inst.box) for inst in model.instances])
        assert np.allclose(lo, corners.min(axis=0))
        assert np.allclose(hi, corners.max(axis=0))
