"""Deterministic SVG projections and OBJ tube meshes for curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .curves import PiecewiseCurve
from .thickness import thickness_radius

PROJECTIONS = {
    "xy": (0, 1),
    "xz": (0, 2),
    "yz": (1, 2),
}


class InfeasibleTube(ValueError):
    pass


@dataclass(frozen=True)
class TubeMeshSpec:
    radial_segments: int = 16
    axial_samples_per_unit_length: float = 8.0
    tube_radius: float = 0.5

    def __post_init__(self):
        if self.radial_segments < 3:
            raise ValueError("radial_segments must be at least 3")
        if self.axial_samples_per_unit_length <= 0 or self.tube_radius <= 0:
            raise ValueError("axial density and tube radius must be positive")


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def export_svg(curves: Sequence[PiecewiseCurve], projection_plane: str, path: str,
               samples_per_curve: int = 512) -> None:
    """Write one polyline per curve, projected onto a coordinate plane.

    The viewBox is fitted to the geometry with a 5% margin; the vertical
    axis is flipped so the projection reads with +y upward.
    """
    if projection_plane not in PROJECTIONS:
        raise ValueError(f"projection must be one of {sorted(PROJECTIONS)}")
    i, j = PROJECTIONS[projection_plane]
    polylines = []
    for c in curves:
        s = c.uniform_params(samples_per_curve)
        pts = c.points_at(s)
        xy = np.stack([pts[:, i], -pts[:, j]], axis=1)
        if c.closed:
            xy = np.vstack([xy, xy[:1]])
        polylines.append(xy)
    if polylines:
        allpts = np.vstack(polylines)
        lo = allpts.min(axis=0)
        hi = allpts.max(axis=0)
        span = np.maximum(hi - lo, 1e-9)
        lo = lo - 0.05 * span
        hi = hi + 0.05 * span
    else:
        lo = np.array([0.0, 0.0])
        hi = np.array([1.0, 1.0])
    w, h = hi - lo
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(lo[0])} {_fmt(lo[1])} {_fmt(w)} {_fmt(h)}">',
    ]
    stroke = max(w, h) / 200.0
    for xy in polylines:
        pts = " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in xy)
        lines.append(f'<polyline fill="none" stroke="black" stroke-width="{_fmt(stroke)}" points="{pts}"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def rotation_minimizing_frames(points: np.ndarray, tangents: np.ndarray,
                               closed: bool) -> np.ndarray:
    """Normals transported along the samples by the double-reflection method.

    For closed curves the holonomy defect is distributed as a uniform twist
    so the last frame matches the first.
    """
    n = len(points)
    normals = np.empty_like(points)
    t0 = tangents[0]
    ref = np.array([1.0, 0.0, 0.0])
    if abs(float(np.dot(ref, t0))) > 0.9:
        ref = np.array([0.0, 1.0, 0.0])
    v = ref - float(np.dot(ref, t0)) * t0
    normals[0] = v / np.linalg.norm(v)
    for i in range(n - 1):
        v1 = points[i + 1] - points[i]
        c1 = float(np.dot(v1, v1))
        if c1 < 1e-30:
            normals[i + 1] = normals[i]
            continue
        rl = normals[i] - (2.0 / c1) * float(np.dot(v1, normals[i])) * v1
        tl = tangents[i] - (2.0 / c1) * float(np.dot(v1, tangents[i])) * v1
        v2 = tangents[i + 1] - tl
        c2 = float(np.dot(v2, v2))
        if c2 < 1e-30:
            normals[i + 1] = rl
        else:
            normals[i + 1] = rl - (2.0 / c2) * float(np.dot(v2, rl)) * v2
        normals[i + 1] -= float(np.dot(normals[i + 1], tangents[i + 1])) * tangents[i + 1]
        normals[i + 1] /= np.linalg.norm(normals[i + 1])
    if closed:
        # transport once more across the seam and measure the angle defect
        v1 = points[0] - points[-1]
        c1 = float(np.dot(v1, v1))
        nr = normals[-1]
        if c1 > 1e-30:
            rl = nr - (2.0 / c1) * float(np.dot(v1, nr)) * v1
            tl = tangents[-1] - (2.0 / c1) * float(np.dot(v1, tangents[-1])) * v1
            v2 = tangents[0] - tl
            c2 = float(np.dot(v2, v2))
            if c2 > 1e-30:
                nr = rl - (2.0 / c2) * float(np.dot(v2, rl)) * v2
            else:
                nr = rl
        nr -= float(np.dot(nr, tangents[0])) * tangents[0]
        nr /= np.linalg.norm(nr)
        defect = math.atan2(float(np.dot(np.cross(nr, normals[0]), tangents[0])),
                            float(np.dot(nr, normals[0])))
        for i in range(n):
            ang = defect * i / n
            b = np.cross(tangents[i], normals[i])
            normals[i] = math.cos(ang) * normals[i] + math.sin(ang) * b
    return normals


def tube_mesh(curve: PiecewiseCurve, spec: TubeMeshSpec):
    """Vertices and triangular faces of the tube around the core.

    Closed curves produce a welded torus-like mesh; open curves get two
    triangle-fan end caps.  Deterministic for identical inputs.
    """
    n_axial = max(3, int(math.ceil(curve.length * spec.axial_samples_per_unit_length)))
    s = curve.uniform_params(n_axial) if curve.closed else np.linspace(0, curve.length, n_axial)
    pts, tans = curve.sample(s)
    normals = rotation_minimizing_frames(pts, tans, curve.closed)
    binormals = np.cross(tans, normals)
    phis = np.linspace(0, 2 * math.pi, spec.radial_segments, endpoint=False)
    ring = np.cos(phis)[:, None, None] * normals[None, :, :] + \
        np.sin(phis)[:, None, None] * binormals[None, :, :]
    verts = (pts[None, :, :] + spec.tube_radius * ring).transpose(1, 0, 2).reshape(-1, 3)
    R = spec.radial_segments
    faces = []
    n_rings = n_axial
    last = n_rings if not curve.closed else n_rings
    rng = n_rings if curve.closed else n_rings - 1
    for a in range(rng):
        b = (a + 1) % n_rings
        for r in range(R):
            r2 = (r + 1) % R
            i00 = a * R + r
            i01 = a * R + r2
            i10 = b * R + r
            i11 = b * R + r2
            faces.append((i00, i10, i11))
            faces.append((i00, i11, i01))
    verts_list = [verts]
    if not curve.closed:
        c0 = len(verts)
        verts_list.append(pts[0][None, :])
        c1 = c0 + 1
        verts_list.append(pts[-1][None, :])
        for r in range(R):
            r2 = (r + 1) % R
            faces.append((c0, r2, r))
            base = (n_rings - 1) * R
            faces.append((c1, base + r, base + r2))
        verts = np.vstack(verts_list)
    return verts, faces


def export_obj(curve: PiecewiseCurve, spec: TubeMeshSpec, path: str,
               strict: bool = False) -> None:
    """Write the tube mesh as a Wavefront OBJ file.

    In strict mode the tube radius must not exceed the core's radius of
    thickness (closed curves only).
    """
    if strict:
        if not curve.closed:
            raise InfeasibleTube("strict mode requires a closed core")
        tau = thickness_radius(curve).tau
        if spec.tube_radius > tau + 1e-9:
            raise InfeasibleTube(
                f"tube radius {spec.tube_radius} exceeds thickness radius {tau:.9g}")
    verts, faces = tube_mesh(curve, spec)
    lines = [f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}" for v in verts]
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in faces)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
