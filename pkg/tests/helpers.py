"""Shared test oracles, kept independent of the code paths they check."""

import itertools

import numpy as np

from cabinetkit import CabinetModel, OrientedBox, make_instance


def brute_force_best_total(iou: np.ndarray) -> float:
    """Best total IoU over all assignments, by explicit permutation search."""
    n, m = iou.shape
    if n <= m:
        return max(
            sum(iou[i, perm[i]] for i in range(n))
            for perm in itertools.permutations(range(m), n)
        )
    return max(
        sum(iou[perm[j], j] for j in range(m))
        for perm in itertools.permutations(range(n), m)
    )


def aabb_iou_oracle(a: OrientedBox, b: OrientedBox) -> float:
    """Plain axis-aligned IoU from the box fields (valid for 90-degree grids)."""

    def bounds(box):
        quarter = int(box.rotation_deg // 90.0) % 4
        sx, sy, sz = box.size
        if quarter % 2 == 1:
            sx, sy = sy, sx
        lo = np.array(box.position) - np.array((sx, sy, sz)) / 2.0
        hi = np.array(box.position) + np.array((sx, sy, sz)) / 2.0
        return lo, hi

    lo_a, hi_a = bounds(a)
    lo_b, hi_b = bounds(b)
    overlap = np.minimum(hi_a, hi_b) - np.maximum(lo_a, lo_b)
    if np.any(overlap <= 0):
        return 0.0
    inter = float(np.prod(overlap))
    va = float(np.prod(hi_a - lo_a))
    vb = float(np.prod(hi_b - lo_b))
    return inter / (va + vb - inter)


def random_box(rng, *, lo=50.0, hi=2000.0, min_size=30.0, max_size=800.0,
               rotations=(0.0,)) -> OrientedBox:
    position = tuple(rng.uniform(lo, hi, 3))
    size = tuple(rng.uniform(min_size, max_size, 3))
    rotation = float(rng.choice(rotations))
    return OrientedBox(position, size, rotation)


def random_box_model(rng, catalog, n, **kwargs) -> CabinetModel:
    ids = list(catalog.model_ids)
    instances = tuple(
        make_instance(catalog, str(rng.choice(ids)), random_box(rng, **kwargs))
        for _ in range(n)
    )
    return CabinetModel(instances)
