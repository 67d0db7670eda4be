"""Piecewise arc/segment space curves with a hard curvature bound.

A curve is an ordered list of primitives (line segments and circular arcs)
that meet with matching positions and unit tangents, parameterized by arc
length.  Arcs of radius below 1/kappa are rejected, so every curve built
here has curvature at most kappa wherever it is defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

JOINT_TOL = 1e-9
CURVATURE_SLACK = 1e-12


class CurveError(ValueError):
    """Base class for curve construction and query errors."""


class JointMismatch(CurveError):
    """Consecutive primitives disagree in position or tangent."""


class CurvatureViolation(CurveError):
    """An arc is tighter than the declared curvature bound allows."""


class DegeneratePrimitive(CurveError):
    """A primitive with no length."""


class OutOfRange(CurveError):
    """Arc-length parameter outside [0, length]."""


def _vec3(v) -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.shape != (3,):
        raise CurveError(f"expected a 3-vector, got shape {a.shape}")
    a.setflags(write=False)
    return a


def _unit3(v, what: str = "vector") -> np.ndarray:
    a = np.array(v, dtype=float)
    n = float(np.linalg.norm(a))
    if n < 1e-12:
        raise CurveError(f"{what} has zero length")
    a = a / n
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Pose:
    """A point together with a unit tangent direction."""

    point: np.ndarray
    tangent: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _vec3(self.point))
        t = _vec3(self.tangent)
        if abs(np.linalg.norm(t) - 1.0) > 1e-12:
            raise CurveError("pose tangent must be a unit vector")
        object.__setattr__(self, "tangent", t)


@dataclass(frozen=True)
class Segment:
    """Straight piece from start to end."""

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", _vec3(self.start))
        object.__setattr__(self, "end", _vec3(self.end))
        if self.length < 1e-12:
            raise DegeneratePrimitive("segment has zero length")

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    @property
    def direction(self) -> np.ndarray:
        return (self.end - self.start) / self.length

    def evaluate(self, u: np.ndarray):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        d = self.direction
        pts = self.start[None, :] + u[:, None] * d[None, :]
        tans = np.broadcast_to(d, pts.shape).copy()
        return pts, tans

    def start_pose(self) -> Pose:
        return Pose(self.start, self.direction)

    def end_pose(self) -> Pose:
        return Pose(self.end, self.direction)


@dataclass(frozen=True)
class Arc:
    """Circular arc.

    The arc starts at ``start_point`` and rotates about the axis
    ``plane_normal`` through ``center`` by ``orientation * sweep``
    (right-hand rule).  ``sweep`` is in (0, 2*pi].
    """

    center: np.ndarray
    plane_normal: np.ndarray
    radius: float
    start_point: np.ndarray
    sweep: float
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "center", _vec3(self.center))
        object.__setattr__(self, "plane_normal", _unit3(self.plane_normal, "arc normal"))
        object.__setattr__(self, "start_point", _vec3(self.start_point))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "sweep", float(self.sweep))
        object.__setattr__(self, "orientation", int(self.orientation))
        if self.radius <= 0:
            raise DegeneratePrimitive("arc radius must be positive")
        if self.orientation not in (-1, 1):
            raise CurveError("arc orientation must be +1 or -1")
        if not (0.0 < self.sweep <= 2.0 * math.pi + 1e-12):
            raise DegeneratePrimitive(f"arc sweep {self.sweep} outside (0, 2*pi]")
        r0 = self.start_point - self.center
        if abs(np.linalg.norm(r0) - self.radius) > 1e-9:
            raise CurveError("arc start_point does not lie on the circle")
        if abs(float(np.dot(r0, self.plane_normal))) > 1e-9:
            raise CurveError("arc start_point not perpendicular to plane_normal")

    @property
    def length(self) -> float:
        return self.radius * self.sweep

    def _frame(self):
        u = self.start_point - self.center
        w = np.cross(self.plane_normal, u)
        return u, w

    def evaluate(self, u: np.ndarray):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        ang = self.orientation * (u / self.radius)
        uv, wv = self._frame()
        c, s = np.cos(ang), np.sin(ang)
        pts = self.center[None, :] + c[:, None] * uv[None, :] + s[:, None] * wv[None, :]
        tans = self.orientation * (-s[:, None] * uv[None, :] + c[:, None] * wv[None, :]) / self.radius
        return pts, tans

    def start_pose(self) -> Pose:
        pts, tans = self.evaluate(np.array([0.0]))
        return Pose(pts[0], tans[0] / np.linalg.norm(tans[0]))

    def end_pose(self) -> Pose:
        pts, tans = self.evaluate(np.array([self.length]))
        return Pose(pts[0], tans[0] / np.linalg.norm(tans[0]))


Primitive = Union[Segment, Arc]


@dataclass(frozen=True)
class PiecewiseCurve:
    """Validated C1, piecewise-C2 curve with curvature bound ``kappa``."""

    primitives: tuple
    closed: bool
    kappa: float

    def __post_init__(self):
        prims = tuple(self.primitives)
        object.__setattr__(self, "primitives", prims)
        object.__setattr__(self, "kappa", float(self.kappa))
        if not prims:
            raise CurveError("curve needs at least one primitive")
        if self.kappa <= 0:
            raise CurveError("kappa must be positive")
        min_radius = 1.0 / self.kappa - CURVATURE_SLACK
        for p in prims:
            if isinstance(p, Arc) and p.radius < min_radius:
                raise CurvatureViolation(
                    f"arc radius {p.radius} below curvature limit 1/kappa = {1.0 / self.kappa}"
                )
        for a, b in zip(prims, prims[1:]):
            _check_joint(a.end_pose(), b.start_pose())
        if self.closed:
            _check_joint(prims[-1].end_pose(), prims[0].start_pose())
        lengths = np.array([p.length for p in prims])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        cum.setflags(write=False)
        object.__setattr__(self, "_cum", cum)

    @property
    def length(self) -> float:
        return float(self._cum[-1])

    @property
    def piece_lengths(self) -> np.ndarray:
        return np.diff(self._cum)

    def _locate(self, s: np.ndarray):
        idx = np.searchsorted(self._cum, s, side="right") - 1
        return np.clip(idx, 0, len(self.primitives) - 1)

    def sample(self, s):
        """Points and unit tangents at arc-length values ``s``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        idx = self._locate(s)
        pts = np.empty((len(s), 3))
        tans = np.empty((len(s), 3))
        for i in np.unique(idx):
            m = idx == i
            p, t = self.primitives[i].evaluate(s[m] - self._cum[i])
            pts[m] = p
            tans[m] = t
        norms = np.linalg.norm(tans, axis=1, keepdims=True)
        return pts, tans / norms

    def points_at(self, s) -> np.ndarray:
        return self.sample(s)[0]

    def pose_at(self, s: float) -> Pose:
        if s < -JOINT_TOL or s > self.length + JOINT_TOL:
            raise OutOfRange(f"s = {s} outside [0, {self.length}]")
        s = min(max(s, 0.0), self.length)
        pts, tans = self.sample(np.array([s]))
        return Pose(pts[0], tans[0])

    def uniform_params(self, n: int) -> np.ndarray:
        # closed curves skip the duplicate endpoint
        return np.linspace(0.0, self.length, n, endpoint=not self.closed)

    def __iter__(self) -> Iterator[Primitive]:
        return iter(self.primitives)


def _check_joint(end: Pose, start: Pose) -> None:
    dp = float(np.linalg.norm(end.point - start.point))
    dt = float(np.linalg.norm(end.tangent - start.tangent))
    if dp > JOINT_TOL or dt > JOINT_TOL:
        raise JointMismatch(f"joint gap {dp:.3e}, tangent gap {dt:.3e}")


def build_curve(primitives: Sequence[Primitive], closed: bool, kappa: float) -> PiecewiseCurve:
    """Validate and assemble primitives into a curve."""
    return PiecewiseCurve(tuple(primitives), bool(closed), float(kappa))


def evaluate(curve: PiecewiseCurve, s: float) -> Pose:
    return curve.pose_at(s)


def length(curve: PiecewiseCurve) -> float:
    return curve.length


# ---------------------------------------------------------------------------
# rigid motions and other curve surgery


def transformed(curve: PiecewiseCurve, rotation=None, translation=None) -> PiecewiseCurve:
    """Apply ``p -> R p + t`` to every primitive."""
    R = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
    t = np.zeros(3) if translation is None else np.asarray(translation, dtype=float)
    prims = []
    for p in curve:
        if isinstance(p, Segment):
            prims.append(Segment(R @ p.start + t, R @ p.end + t))
        else:
            prims.append(
                Arc(R @ p.center + t, R @ p.plane_normal, p.radius,
                    R @ p.start_point + t, p.sweep, p.orientation)
            )
    return PiecewiseCurve(tuple(prims), curve.closed, curve.kappa)


def mirrored(curve: PiecewiseCurve, plane_point, plane_normal) -> PiecewiseCurve:
    """Reflect through a plane.  Reverses orientation of every arc."""
    p0 = _vec3(plane_point)
    n = _unit3(plane_normal, "mirror normal")

    def refl_pt(p):
        return p - 2.0 * float(np.dot(p - p0, n)) * n

    def refl_vec(v):
        return v - 2.0 * float(np.dot(v, n)) * n

    prims = []
    for p in curve:
        if isinstance(p, Segment):
            prims.append(Segment(refl_pt(p.start), refl_pt(p.end)))
        else:
            prims.append(
                Arc(refl_pt(p.center), refl_vec(p.plane_normal), p.radius,
                    refl_pt(p.start_point), p.sweep, -p.orientation)
            )
    return PiecewiseCurve(tuple(prims), curve.closed, curve.kappa)


def scaled(curve: PiecewiseCurve, factor: float, kappa: Optional[float] = None) -> PiecewiseCurve:
    """Scale about the origin.  Default kappa scales as 1/factor."""
    if factor <= 0:
        raise CurveError("scale factor must be positive")
    k = curve.kappa / factor if kappa is None else kappa
    prims = []
    for p in curve:
        if isinstance(p, Segment):
            prims.append(Segment(factor * p.start, factor * p.end))
        else:
            prims.append(
                Arc(factor * p.center, p.plane_normal, factor * p.radius,
                    factor * p.start_point, p.sweep, p.orientation)
            )
    return PiecewiseCurve(tuple(prims), curve.closed, k)


def _split_primitive(p: Primitive, u: float):
    """Split a primitive at local arc length u, returning (head, tail)."""
    if isinstance(p, Segment):
        mid = p.start + u * p.direction
        head = Segment(p.start, mid) if u > 1e-12 else None
        tail = Segment(mid, p.end) if p.length - u > 1e-12 else None
        return head, tail
    ang = u / p.radius
    mid_pt = p.evaluate(np.array([u]))[0][0]
    head = None
    if ang > 1e-12:
        head = Arc(p.center, p.plane_normal, p.radius, p.start_point, ang, p.orientation)
    tail = None
    if p.sweep - ang > 1e-12:
        tail = Arc(p.center, p.plane_normal, p.radius, mid_pt, p.sweep - ang, p.orientation)
    return head, tail


def subcurve(curve: PiecewiseCurve, s0: float, s1: float) -> PiecewiseCurve:
    """Open sub-arc from s0 to s1 (s1 may wrap past the end on closed curves)."""
    L = curve.length
    if s1 <= s0:
        if not curve.closed:
            raise OutOfRange("subcurve requires s1 > s0 on open curves")
        s1 += L
    if s1 - s0 > L + JOINT_TOL:
        raise OutOfRange("subcurve longer than the curve")
    prims = []
    s = s0
    remaining = s1 - s0
    while remaining > 1e-12:
        s_mod = s % L
        idx = int(np.searchsorted(curve._cum, s_mod, side="right") - 1)
        idx = min(idx, len(curve.primitives) - 1)
        p = curve.primitives[idx]
        local = s_mod - curve._cum[idx]
        _, tail = _split_primitive(p, local)
        piece = tail if tail is not None else p
        take = min(piece.length, remaining)
        head, _ = _split_primitive(piece, take)
        prims.append(head if head is not None else piece)
        s += take
        remaining -= take
    return PiecewiseCurve(tuple(prims), False, curve.kappa)


# ---------------------------------------------------------------------------
# global distance queries


def _pair_separation(s1, s2, total: float, closed: bool):
    d = np.abs(s1 - s2)
    if closed:
        return np.minimum(d, total - d)
    return d


def _zoom_pair(curve_a: PiecewiseCurve, curve_b: PiecewiseCurve, s1: float, s2: float,
               w1: float, w2: float, exclusion: float, maximize: bool, rounds: int = 10):
    """Refine an extremal pair of parameters by shrinking local grids."""
    same = curve_a is curve_b
    sign = -1.0 if maximize else 1.0
    best = (s1, s2)
    for _ in range(rounds):
        g1 = np.clip(np.linspace(best[0] - w1, best[0] + w1, 9), 0.0, curve_a.length)
        g2 = np.clip(np.linspace(best[1] - w2, best[1] + w2, 9), 0.0, curve_b.length)
        p1 = curve_a.points_at(g1)
        p2 = curve_b.points_at(g2)
        D = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=2)
        if same and exclusion > 0:
            sep = _pair_separation(g1[:, None], g2[None, :], curve_a.length, curve_a.closed)
            D = np.where(sep < exclusion, -np.inf if maximize else np.inf, D)
        k = int(np.argmin(sign * D))
        i, j = divmod(k, 9)
        best = (float(g1[i]), float(g2[j]))
        w1 /= 4.0
        w2 /= 4.0
    d = float(np.linalg.norm(curve_a.points_at([best[0]])[0] - curve_b.points_at([best[1]])[0]))
    return best[0], best[1], d


def _grid_pair_scan(curve_a: PiecewiseCurve, curve_b: PiecewiseCurve, n: int,
                    exclusion: float, block: int = 1024):
    """Dense grid scan for the closest admissible pair of points."""
    same = curve_a is curve_b
    sa = curve_a.uniform_params(n)
    sb = sa if same else curve_b.uniform_params(n)
    pa = curve_a.points_at(sa)
    pb = pa if same else curve_b.points_at(sb)
    best = (math.inf, 0.0, 0.0)
    for lo in range(0, len(sa), block):
        hi = min(lo + block, len(sa))
        D = np.linalg.norm(pa[lo:hi, None, :] - pb[None, :, :], axis=2)
        if same and exclusion > 0:
            sep = _pair_separation(sa[lo:hi, None], sb[None, :], curve_a.length, curve_a.closed)
            D = np.where(sep < exclusion, np.inf, D)
        k = int(np.argmin(D))
        i, j = divmod(k, D.shape[1])
        if D[i, j] < best[0]:
            best = (float(D[i, j]), float(sa[lo + i]), float(sb[j]))
    return best


def min_self_distance(curve: PiecewiseCurve, exclusion: float, n_samples: int = 2048):
    """Minimum distance between curve points at least ``exclusion`` apart in s.

    Returns (distance, s1, s2); distance is +inf when no admissible pair exists.
    """
    d, s1, s2 = _grid_pair_scan(curve, curve, n_samples, exclusion)
    if not math.isfinite(d):
        return math.inf, 0.0, 0.0
    w = curve.length / n_samples
    s1, s2, d = _zoom_pair(curve, curve, s1, s2, w, w, exclusion, maximize=False)
    return d, s1, s2


def min_distance_between(curve_a: PiecewiseCurve, curve_b: PiecewiseCurve,
                         n_samples: int = 2048):
    """Minimum distance between two curves: (distance, s_a, s_b)."""
    d, s1, s2 = _grid_pair_scan(curve_a, curve_b, n_samples, 0.0)
    w1 = curve_a.length / n_samples
    w2 = curve_b.length / n_samples
    s1, s2, d = _zoom_pair(curve_a, curve_b, s1, s2, w1, w2, 0.0, maximize=False)
    return d, s1, s2


@dataclass(frozen=True)
class IntersectionWitness:
    s1: float
    s2: float
    distance: float


def self_intersects(curve: PiecewiseCurve, clearance: float = 0.0,
                    n_samples: int = 2048) -> Optional[IntersectionWitness]:
    """Witness of two far-apart parameters whose points nearly coincide.

    Pairs closer than pi/kappa in arc length are ignored so that a point is
    never compared against its own local neighbourhood.  Returns None when
    the curve is embedded at the given clearance.
    """
    if clearance < 0:
        raise CurveError("clearance must be nonnegative")
    exclusion = math.pi / curve.kappa
    d, s1, s2 = min_self_distance(curve, exclusion, n_samples)
    if d <= clearance:
        return IntersectionWitness(s1, s2, d)
    return None


def diameter(curve: PiecewiseCurve, n_samples: int = 1024) -> float:
    """Max pairwise distance over a uniform sample, locally refined.

    A lower bound on the true diameter that converges as n_samples grows.
    """
    if n_samples < 2:
        raise CurveError("n_samples must be at least 2")
    s = curve.uniform_params(n_samples)
    pts = curve.points_at(s)
    best = (0.0, 0.0, 0.0)
    for lo in range(0, len(s), 1024):
        hi = min(lo + 1024, len(s))
        D = np.linalg.norm(pts[lo:hi, None, :] - pts[None, :, :], axis=2)
        k = int(np.argmax(D))
        i, j = divmod(k, D.shape[1])
        if D[i, j] > best[0]:
            best = (float(D[i, j]), float(s[lo + i]), float(s[j]))
    w = curve.length / n_samples
    _, _, d = _zoom_pair(curve, curve, best[1], best[2], w, w, 0.0, maximize=True)
    return max(best[0], d)


# ---------------------------------------------------------------------------
# JSON schema


def to_json_dict(curve: PiecewiseCurve) -> dict:
    prims = []
    for p in curve:
        if isinstance(p, Segment):
            prims.append({"type": "segment", "start": list(p.start), "end": list(p.end)})
        else:
            prims.append({
                "type": "arc",
                "center": list(p.center),
                "normal": list(p.plane_normal),
                "radius": p.radius,
                "start_point": list(p.start_point),
                "sweep": p.sweep,
                "orientation": p.orientation,
            })
    return {"kappa": curve.kappa, "closed": curve.closed, "primitives": prims}


def from_json_dict(data: dict) -> PiecewiseCurve:
    prims = []
    for d in data["primitives"]:
        if d["type"] == "segment":
            prims.append(Segment(d["start"], d["end"]))
        elif d["type"] == "arc":
            prims.append(Arc(d["center"], d["normal"], d["radius"],
                             d["start_point"], d["sweep"], d.get("orientation", 1)))
        else:
            raise CurveError(f"unknown primitive type {d['type']!r}")
    return build_curve(prims, data["closed"], data["kappa"])
