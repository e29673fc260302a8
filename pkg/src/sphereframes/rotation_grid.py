"""Discrete rotation grids on SO(n+1) built from nested sphere partitions.

A rotation is parametrized through the coset chain SO(n+1) ⊃ SO(n) ⊃ ... as a
product R = T_n(x^n) T_{n-1}(x^(n-1)) ... T_1(x^1) with x^J a point on the
J-sphere.  T_J lifts sphere angles to planar rotations acting on the last
J + 1 ambient coordinates, so the invariant measure on SO(n+1) factors into
the product of the sphere measures.  Partitioning each S^J into cells of
bounded geodesic diameter and taking one rotation per cell tuple, weighted by
the product of cell measures, yields the grids used for frame verification.

Partitions use latitude bands split in azimuth (recursively for J >= 2).  The
per-cell diameter certificate is band height plus the widest extent of the
sub-cell at the band edge nearest the equator, a cheap upper bound for the
true diameter.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .harmonics import angles_to_vector, vector_to_angles
from .special_functions import surface_area

__all__ = [
    "PartitionCell",
    "SpherePartition",
    "partition_sphere",
    "RotationGrid",
    "build_rotation_grid",
    "rotation_matrix",
    "apply_rotation",
]


class PartitionCell(NamedTuple):
    center: tuple
    measure: float
    diameter: float


def sin_power_integral(m: int, a: float, b: float) -> float:
    """Exact integral of sin^m over [a, b] by the standard reduction."""
    if m < 0:
        raise ValueError(f"power must be >= 0, got {m}")
    if m == 0:
        return b - a
    if m == 1:
        return math.cos(a) - math.cos(b)
    boundary = (
        math.cos(a) * math.sin(a) ** (m - 1) - math.cos(b) * math.sin(b) ** (m - 1)
    ) / m
    return boundary + (m - 1) / m * sin_power_integral(m - 2, a, b)


@dataclass(frozen=True)
class SpherePartition:
    """Cells covering S^J, each with a center, exact measure, and diameter bound."""

    dimension: int
    delta: float
    cells: tuple

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def total_measure(self) -> float:
        return float(sum(c.measure for c in self.cells))


def partition_sphere(J: int, delta: float) -> SpherePartition:
    """Partition S^J into simply connected cells of geodesic diameter <= delta.

    delta >= pi returns the whole sphere as one cell (its diameter is pi).
    For the circle the cells are arcs; higher spheres use latitude bands of
    height <= delta / sqrt(2), each crossed with a partition of the equatorial
    subsphere at a target shrunk by the band's largest sine.
    """
    if J < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {J}")
    if delta <= 0:
        raise ValueError(f"diameter cap must be positive, got {delta}")

    if delta >= math.pi:
        center = (math.pi / 2,) * (J - 1) + (math.pi,)
        return SpherePartition(
            J, delta, (PartitionCell(center, surface_area(J), math.pi),)
        )

    if J == 1:
        count = math.ceil(2.0 * math.pi / delta)
        arc = 2.0 * math.pi / count
        cells = tuple(
            PartitionCell(((i + 0.5) * arc,), arc, arc) for i in range(count)
        )
        return SpherePartition(J, delta, cells)

    bands = math.ceil(math.pi * math.sqrt(2.0) / delta)
    h = math.pi / bands
    cells = []
    for i in range(bands):
        a, b = i * h, (i + 1) * h
        sin_max = 1.0 if a <= math.pi / 2 <= b else max(math.sin(a), math.sin(b))
        sub = partition_sphere(J - 1, (delta - h) / sin_max)
        theta_mid = 0.5 * (a + b)
        band_measure = sin_power_integral(J - 1, a, b)
        for c in sub.cells:
            cells.append(
                PartitionCell(
                    (theta_mid,) + c.center,
                    band_measure * c.measure,
                    h + sin_max * c.diameter,
                )
            )
    return SpherePartition(J, delta, tuple(cells))


@dataclass(frozen=True)
class RotationGrid:
    """Product grid on SO(n+1): one rotation per tuple of partition cells.

    Euler angles are stored outer factor first: the x^n block (n angles),
    then x^(n-1), down to x^1, giving n(n+1)/2 angles per rotation.
    """

    n: int
    delta_list: tuple
    angles: np.ndarray
    weights: np.ndarray
    sizes: tuple

    def __post_init__(self):
        m = self.n * (self.n + 1) // 2
        if self.angles.ndim != 2 or self.angles.shape[1] != m:
            raise ValueError(f"expected angle rows of length {m}")
        if self.weights.shape != (self.angles.shape[0],):
            raise ValueError("weights must align with rotations")

    def __len__(self) -> int:
        return int(self.weights.size)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def header(self) -> dict:
        return {
            "dimension": self.n,
            "delta": list(self.delta_list),
            "sizes": list(self.sizes),
        }

    def to_csv(self) -> str:
        names = []
        for J in range(self.n, 0, -1):
            names.extend(f"theta{J}_{i}" for i in range(1, J))
            names.append(f"phi{J}")
        lines = ["# " + json.dumps(self.header())]
        lines.append(",".join(names) + ",weight")
        for row, w in zip(self.angles, self.weights):
            lines.append(",".join(f"{v:.17g}" for v in row) + f",{w:.17g}")
        return "\n".join(lines) + "\n"


def build_rotation_grid(
    n: int, delta_list, max_elements: int = 200_000
) -> RotationGrid:
    """Cartesian product of partitions of S^n, ..., S^1 with product weights.

    delta_list is ordered (delta_n, ..., delta_1), outermost sphere first.
    Raises if the product of partition sizes exceeds max_elements.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    deltas = tuple(float(d) for d in delta_list)
    if len(deltas) != n:
        raise ValueError(f"need {n} diameter caps, got {len(deltas)}")
    parts = [partition_sphere(J, deltas[n - J]) for J in range(n, 0, -1)]
    sizes = tuple(len(p) for p in parts)
    total = math.prod(sizes)
    if total > max_elements:
        raise ValueError(
            f"rotation grid would hold {total} elements (cap {max_elements}); "
            "increase the caps in delta_list or raise max_elements"
        )
    m = n * (n + 1) // 2
    angles = np.empty((total, m))
    weights = np.ones(total)
    stride = total
    offset = 0
    for p in parts:
        J = p.dimension
        stride //= len(p)
        block = np.array([c.center for c in p.cells])
        meas = np.array([c.measure for c in p.cells])
        reps = total // (stride * len(p))
        idx = np.tile(np.repeat(np.arange(len(p)), stride), reps)
        angles[:, offset : offset + J] = block[idx]
        weights *= meas[idx]
        offset += J
    return RotationGrid(n, deltas, angles, weights, sizes)


def _planar_rotation(n: int, axis: int, angle: float) -> np.ndarray:
    """Rotation by angle in the (x_axis, x_axis+1) plane of R^(n+1), 1-based."""
    R = np.eye(n + 1)
    c, s = math.cos(angle), math.sin(angle)
    i = axis - 1
    R[i, i] = c
    R[i, i + 1] = -s
    R[i + 1, i] = s
    R[i + 1, i + 1] = c
    return R


def rotation_matrix(n: int, euler) -> np.ndarray:
    """Assemble the (n+1) x (n+1) matrix from the nested Euler angles.

    The x^J block (theta_1 .. theta_{J-1}, phi) contributes the factor
    T_J = P_n(phi) P_{n-1}(theta_{J-1}) ... P_{n-J+1}(theta_1) with P_i the
    planar rotation in coordinates (x_i, x_i+1); blocks multiply outer first.
    T_n applied to e_1 reproduces the sphere point with those angles.
    """
    euler = np.asarray(euler, dtype=float)
    if euler.shape != (n * (n + 1) // 2,):
        raise ValueError(f"need {n * (n + 1) // 2} angles, got {euler.shape}")
    R = np.eye(n + 1)
    offset = 0
    for J in range(n, 0, -1):
        block = euler[offset : offset + J]
        offset += J
        T = _planar_rotation(n, n - J + 1, block[0])
        for i in range(1, J):
            T = _planar_rotation(n, n - J + 1 + i, block[i]) @ T
        R = R @ T
    return R


def apply_rotation(n: int, euler, point):
    """Rotate a point given by its angle tuple; returns the image's angles."""
    R = rotation_matrix(n, euler)
    return vector_to_angles(n, R @ angles_to_vector(n, point))
