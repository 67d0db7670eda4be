"""Obstruction regions for curvature-bounded arcs, and unlink certificates.

Two radius-1/kappa balls whose boundary spheres meet in a circle C define
the lens I (interior of the intersection), the union U, the outer shell
E = int(U) \\ cl(I), the spindle R swept by short unit-radius arcs through
an antipodal pair x, y on C, and K = I \\ cl(R).  Arcs over a crossing
plane are classified short (confined to the spindle) or long (rising above
the reference sphere cap), and a long arc must have diameter >= 2/kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .curves import PiecewiseCurve, diameter as curve_diameter, min_distance_between
from .thickness import thickness_radius

BOUNDARY_BAND = 1e-9


class InvalidConfig(ValueError):
    pass


class EndpointMismatch(ValueError):
    pass


class NotLongArc(ValueError):
    pass


@dataclass(frozen=True)
class RegionConfig:
    """Two ball centers, the curvature bound, and the antipodal pair on C."""

    center1: np.ndarray
    center2: np.ndarray
    kappa: float = 1.0
    pair_angle: float = 0.0

    def __post_init__(self):
        c1 = np.array(self.center1, dtype=float)
        c2 = np.array(self.center2, dtype=float)
        if c1.shape != (3,) or c2.shape != (3,):
            raise InvalidConfig("ball centers must be 3-vectors")
        c1.setflags(write=False)
        c2.setflags(write=False)
        object.__setattr__(self, "center1", c1)
        object.__setattr__(self, "center2", c2)
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "pair_angle", float(self.pair_angle))
        if self.kappa <= 0:
            raise InvalidConfig("kappa must be positive")
        d = float(np.linalg.norm(c2 - c1))
        if not (0.0 < d < 2.0 / self.kappa):
            raise InvalidConfig(
                f"center distance {d} must lie strictly between 0 and 2/kappa")

    @property
    def radius(self) -> float:
        return 1.0 / self.kappa

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.center1 + self.center2)

    @property
    def axis(self) -> np.ndarray:
        d = self.center2 - self.center1
        return d / np.linalg.norm(d)

    @property
    def circle_radius(self) -> float:
        half = 0.5 * float(np.linalg.norm(self.center2 - self.center1))
        return math.sqrt(self.radius ** 2 - half ** 2)

    def _circle_basis(self):
        n = self.axis
        ref = np.array([1.0, 0.0, 0.0])
        if abs(float(np.dot(ref, n))) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        e1 = ref - float(np.dot(ref, n)) * n
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        return e1, e2

    @property
    def pair(self) -> Tuple[np.ndarray, np.ndarray]:
        """The antipodal points x, y on the intersection circle."""
        e1, e2 = self._circle_basis()
        offset = self.circle_radius * (math.cos(self.pair_angle) * e1
                                       + math.sin(self.pair_angle) * e2)
        return self.midpoint + offset, self.midpoint - offset

    def to_dict(self) -> dict:
        return {"center1": list(self.center1), "center2": list(self.center2),
                "kappa": self.kappa, "pair_angle": self.pair_angle}

    @staticmethod
    def from_dict(d: dict) -> "RegionConfig":
        return RegionConfig(d["center1"], d["center2"],
                            d.get("kappa", 1.0), d.get("pair_angle", 0.0))


def spindle_margin(points: np.ndarray, x: np.ndarray, y: np.ndarray, kappa: float):
    """Signed margins of the spindle about the chord [x, y].

    Returns (surface_margin, axial_margin); a point is inside the open
    spindle iff both are negative.  The spindle is the solid of revolution
    of the short radius-1/kappa arcs through x and y.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = 1.0 / kappa
    mid = 0.5 * (np.asarray(x, float) + np.asarray(y, float))
    chord = np.asarray(x, float) - np.asarray(y, float)
    a = 0.5 * float(np.linalg.norm(chord))
    if not (0.0 < a < r):
        raise InvalidConfig("chord half-length must lie in (0, 1/kappa)")
    axis = chord / (2.0 * a)
    c = math.sqrt(r * r - a * a)
    rel = pts - mid
    u = rel @ axis
    radial = np.linalg.norm(rel - u[:, None] * axis[None, :], axis=1)
    surface = np.sqrt(u ** 2 + (radial + c) ** 2) - r
    axial = np.abs(u) - a
    return surface, axial


def _membership_arrays(points: np.ndarray, config: RegionConfig, region: str):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = config.radius
    tol = BOUNDARY_BAND
    d1 = np.linalg.norm(pts - config.center1, axis=1)
    d2 = np.linalg.norm(pts - config.center2, axis=1)
    if region == "I":
        return np.maximum(d1, d2) < r - tol
    if region == "U":
        return np.minimum(d1, d2) < r - tol
    if region == "E":
        return (np.minimum(d1, d2) < r - tol) & (np.maximum(d1, d2) > r + tol)
    x, y = config.pair
    surf, axial = spindle_margin(pts, x, y, config.kappa)
    if region == "R":
        return (surf < -tol) & (axial < -tol)
    if region == "K":
        outside_cl_r = (surf > tol) | (axial > tol)
        return (np.maximum(d1, d2) < r - tol) & outside_cl_r
    if region == "EK":
        in_e = (np.minimum(d1, d2) < r - tol) & (np.maximum(d1, d2) > r + tol)
        in_k = (np.maximum(d1, d2) < r - tol) & ((surf > tol) | (axial > tol))
        return in_e | in_k
    raise InvalidConfig(f"unknown region {region!r}")


def region_membership(point, config: RegionConfig, region: str) -> bool:
    """Band-aware membership test; points within 1e-9 of a boundary are out."""
    return bool(_membership_arrays(np.asarray(point, float)[None, :], config, region)[0])


def region_membership_many(points, config: RegionConfig, region: str) -> np.ndarray:
    return _membership_arrays(points, config, region)


def in_closed_spindle(points, x, y, kappa: float, tol: float = BOUNDARY_BAND) -> np.ndarray:
    surf, axial = spindle_margin(points, x, y, kappa)
    return (surf <= tol) & (axial <= tol)


# ---------------------------------------------------------------------------
# short / long arc classification


class ArcKind(Enum):
    SHORT = "short"
    LONG = "long"
    NEITHER = "neither"


@dataclass(frozen=True)
class ArcClassification:
    kind: ArcKind
    max_height: float
    cap_height: float
    in_spindle: bool
    on_sphere: bool

    @property
    def height_margin(self) -> float:
        """Positive iff some point rises above the reference sphere."""
        return self.max_height - self.cap_height


def _on_single_sphere(pts: np.ndarray, x: np.ndarray, y: np.ndarray,
                      radius: float, tol: float) -> bool:
    """Best-fit sphere of the given radius through x and y containing all pts."""
    mid = 0.5 * (x + y)
    chord = x - y
    a = 0.5 * float(np.linalg.norm(chord))
    if a >= radius:
        return False
    axis = chord / (2 * a)
    c = math.sqrt(radius * radius - a * a)
    ref = np.array([1.0, 0.0, 0.0])
    if abs(float(np.dot(ref, axis))) > 0.9:
        ref = np.array([0.0, 1.0, 0.0])
    e1 = ref - float(np.dot(ref, axis)) * axis
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)

    def max_dev(phi: float) -> float:
        center = mid + c * (math.cos(phi) * e1 + math.sin(phi) * e2)
        return float(np.max(np.abs(np.linalg.norm(pts - center, axis=1) - radius)))

    phis = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    best = min(phis, key=max_dev)
    # golden-section polish around the best azimuth
    lo, hi = best - 0.2, best + 0.2
    for _ in range(40):
        m1 = lo + 0.382 * (hi - lo)
        m2 = hi - 0.382 * (hi - lo)
        if max_dev(m1) < max_dev(m2):
            hi = m2
        else:
            lo = m1
    return max_dev(0.5 * (lo + hi)) <= tol


def classify_arc(arc: PiecewiseCurve, x, y, plane_point, plane_normal,
                 n_samples: int = 2048) -> ArcClassification:
    """Classify an open arc with endpoints x, y on the crossing plane.

    The reference sphere has radius 1/kappa, passes through x and y, and
    sits below the plane on the line through the chord midpoint; its cap
    rises 1/kappa - sqrt(1/kappa^2 - a^2) above the plane.  Long means some
    sample exceeds the cap height; short means the arc stays in the closed
    spindle (or on a single sphere of radius 1/kappa).
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = np.asarray(plane_normal, float)
    n = n / np.linalg.norm(n)
    p0 = np.asarray(plane_point, float)
    start = arc.points_at([0.0])[0]
    end = arc.points_at([arc.length])[0]
    if min(np.linalg.norm(start - x), np.linalg.norm(start - y)) > 1e-9 or \
       min(np.linalg.norm(end - x), np.linalg.norm(end - y)) > 1e-9:
        raise EndpointMismatch("arc endpoints must coincide with x and y")
    r = 1.0 / arc.kappa
    a = 0.5 * float(np.linalg.norm(x - y))
    if not (0.0 < a < r):
        raise InvalidConfig("crossing points must satisfy 0 < |x-y| < 2/kappa")
    cap = r - math.sqrt(r * r - a * a)
    s = np.linspace(0.0, arc.length, n_samples)
    pts = arc.points_at(s)
    heights = (pts - p0) @ n
    max_h = float(np.max(heights))
    in_spindle = bool(np.all(in_closed_spindle(pts, x, y, arc.kappa, tol=1e-6)))
    on_sphere = _on_single_sphere(pts, x, y, r, tol=1e-6)
    if max_h > cap + 1e-9:
        kind = ArcKind.LONG
    elif in_spindle or on_sphere:
        kind = ArcKind.SHORT
    else:
        kind = ArcKind.NEITHER
    return ArcClassification(kind, max_h, cap, in_spindle, on_sphere)


@dataclass(frozen=True)
class LongArcDiameterReport:
    diameter: float
    bound: float
    satisfied: bool


def check_long_arc_diameter(arc: PiecewiseCurve, kappa: float,
                            classification: ArcClassification,
                            n_samples: int = 1024) -> LongArcDiameterReport:
    """A long arc must span at least 2/kappa in diameter."""
    if classification.kind is not ArcKind.LONG:
        raise NotLongArc("diameter bound applies to long arcs only")
    d = curve_diameter(arc, n_samples)
    bound = 2.0 / kappa
    return LongArcDiameterReport(d, bound, d >= bound - 1e-6)


# ---------------------------------------------------------------------------
# gordian certificate


@dataclass(frozen=True)
class Premise:
    name: str
    passed: bool
    slack: Optional[float] = None
    note: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "slack": self.slack,
                "note": self.note, "skipped": self.skipped}


@dataclass(frozen=True)
class GordianCertificate:
    tau: float
    premises: Tuple[Premise, ...]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.premises)

    def premise(self, name: str) -> Premise:
        for p in self.premises:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"tau": self.tau, "pass": self.passed,
                "premises": [p.to_dict() for p in self.premises]}


def plane_crossings(curve: PiecewiseCurve, plane_point, plane_normal,
                    n_samples: int = 4096):
    """Transversal crossings of a closed curve with a plane.

    Returns a list of (s, point, tangent) sorted by arc length.
    """
    p0 = np.asarray(plane_point, float)
    n = np.asarray(plane_normal, float)
    n = n / np.linalg.norm(n)
    s = curve.uniform_params(n_samples)
    z = (curve.points_at(s) - p0) @ n

    def signed(si: float) -> float:
        return float((curve.points_at([si % curve.length])[0] - p0) @ n)

    crossings = []
    m = len(s)
    count = m if curve.closed else m - 1
    for i in range(count):
        a, b = z[i], z[(i + 1) % m]
        if a == 0.0 or a * b >= 0.0:
            continue
        lo = s[i]
        hi = s[i + 1] if i + 1 < m else curve.length
        root = brentq(signed, lo, hi, xtol=1e-13)
        pts, tans = curve.sample(np.array([root % curve.length]))
        crossings.append((float(root % curve.length), pts[0], tans[0]))
    return crossings


def _winding_number(polygon_pts: np.ndarray, queries: np.ndarray, e1, e2) -> np.ndarray:
    """Winding of a closed planar polygon about each query point."""
    poly = np.stack([polygon_pts @ e1, polygon_pts @ e2], axis=1)
    qs = np.stack([queries @ e1, queries @ e2], axis=1)
    rel = poly[None, :, :] - qs[:, None, :]
    ang = np.arctan2(rel[:, :, 1], rel[:, :, 0])
    d = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
    d = (d + math.pi) % (2 * math.pi) - math.pi
    return np.round(np.sum(d, axis=1) / (2 * math.pi)).astype(int)


def certify_unlink(gamma: PiecewiseCurve, beta: PiecewiseCurve,
                   plane_point, plane_normal, tau: float,
                   n_samples: int = 2048) -> GordianCertificate:
    """Check the geometric premises that make the pair a gordian unlink.

    Premises (all must pass):
      1 orthogonal_plane_crossings: gamma meets the plane exactly twice,
        orthogonally.
      2 crossing_separation_thin: |x - y| = 2 tau and 2 tau < 2.
      3 halves_are_long: both sub-arcs of gamma classify long and satisfy
        the diameter >= 2/kappa bound.
      4 beta_encloses_crossing_disks: beta lies in the plane and the two
        radius-tau disks about x, y sit inside it with clearance >= tau.
      5 thickness_feasible: thickness 2 tau fits both components.
      6 cores_disjoint: the cores never touch, and beta keeps the full
        2 tau clearance from both crossing points.

    Premises that cannot be evaluated (e.g. after premise 1 fails) are
    recorded as skipped and count as failures.
    """
    if abs(gamma.kappa - 1.0) > 1e-12 or abs(beta.kappa - 1.0) > 1e-12:
        raise ValueError("certificates are defined for kappa = 1 curves")
    if not (gamma.closed and beta.closed):
        raise ValueError("both curves must be closed")
    p0 = np.asarray(plane_point, float)
    n = np.asarray(plane_normal, float)
    n = n / np.linalg.norm(n)
    premises: List[Premise] = []

    crossings = plane_crossings(gamma, p0, n, n_samples)
    ortho_ok = len(crossings) == 2
    ortho_slack = None
    if ortho_ok:
        dots = [abs(float(np.dot(t, n))) for _, _, t in crossings]
        ortho_slack = min(dots) - (1.0 - 1e-9)
        ortho_ok = ortho_slack >= 0.0
    premises.append(Premise(
        "orthogonal_plane_crossings", ortho_ok, ortho_slack,
        note=f"{len(crossings)} crossings found"))

    have_xy = len(crossings) == 2
    if have_xy:
        (s_x, x, _), (s_y, y, _) = crossings
        sep = float(np.linalg.norm(x - y))
        eq_ok = abs(sep - 2.0 * tau) <= 1e-6
        thin_ok = 2.0 * tau < 2.0
        premises.append(Premise(
            "crossing_separation_thin", eq_ok and thin_ok,
            min(1e-6 - abs(sep - 2.0 * tau), 2.0 - 2.0 * tau),
            note=f"|x-y| = {sep:.9g}, 2*tau = {2 * tau:.9g}"))
    else:
        premises.append(Premise("crossing_separation_thin", False,
                                note="skipped: crossings unavailable", skipped=True))

    if have_xy and 0.0 < float(np.linalg.norm(x - y)) < 2.0 / gamma.kappa:
        try:
            from .curves import subcurve
            upper = subcurve(gamma, s_x, s_y)
            lower = subcurve(gamma, s_y, s_x)
            results = []
            for half, normal in ((upper, n), (lower, -n)):
                mid = half.points_at([0.5 * half.length])[0]
                side = float(np.dot(mid - p0, normal))
                oriented = normal if side >= 0 else -normal
                cls = classify_arc(half, x, y, p0, oriented)
                ok = cls.kind is ArcKind.LONG
                diam_ok = False
                if ok:
                    diam_ok = check_long_arc_diameter(half, gamma.kappa, cls).satisfied
                results.append((ok and diam_ok, cls.height_margin))
            premises.append(Premise(
                "halves_are_long", all(r[0] for r in results),
                min(r[1] for r in results),
                note="both halves classified long with diameter bound"))
        except (EndpointMismatch, InvalidConfig) as exc:
            premises.append(Premise("halves_are_long", False,
                                    note=f"skipped: {exc}", skipped=True))
    else:
        premises.append(Premise("halves_are_long", False,
                                note="skipped: crossings unavailable", skipped=True))

    beta_s = beta.uniform_params(4096)
    beta_pts = beta.points_at(beta_s)
    planar_dev = float(np.max(np.abs((beta_pts - p0) @ n)))
    if have_xy:
        ref = np.array([1.0, 0.0, 0.0])
        if abs(float(np.dot(ref, n))) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        e1 = ref - float(np.dot(ref, n)) * n
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        phis = np.linspace(0, 2 * math.pi, 256, endpoint=False)
        ring = np.cos(phis)[:, None] * e1[None, :] + np.sin(phis)[:, None] * e2[None, :]
        slacks = []
        inside_all = True
        for center in (x, y):
            boundary = center[None, :] + tau * ring
            wind = _winding_number(beta_pts, boundary, e1, e2)
            inside_all &= bool(np.all(wind != 0))
            dmat = np.linalg.norm(boundary[:, None, :] - beta_pts[None, :, :], axis=2)
            slacks.append(float(np.min(dmat)) - tau)
        enclosed_ok = planar_dev <= 1e-9 and inside_all and min(slacks) >= -1e-9
        premises.append(Premise(
            "beta_encloses_crossing_disks", enclosed_ok, min(slacks),
            note=f"planar deviation {planar_dev:.3e}, inside = {inside_all}"))
    else:
        premises.append(Premise("beta_encloses_crossing_disks", False,
                                note="skipped: crossings unavailable", skipped=True))

    tau_gamma = thickness_radius(gamma, n_samples).tau
    tau_beta = thickness_radius(beta, n_samples).tau
    feas_slack = 2.0 * min(tau_gamma, tau_beta) - 2.0 * tau
    premises.append(Premise(
        "thickness_feasible", feas_slack >= -1e-9, feas_slack,
        note=f"tau(gamma) = {tau_gamma:.9g}, tau(beta) = {tau_beta:.9g}"))

    gap, _, _ = min_distance_between(gamma, beta, n_samples)
    disjoint_ok = gap >= 1e-6
    clearance_slack = None
    if have_xy:
        crossing_gaps = []
        for pt in (x, y):
            dmat = np.linalg.norm(beta_pts - pt, axis=1)
            crossing_gaps.append(float(np.min(dmat)))
        clearance_slack = min(crossing_gaps) - 2.0 * tau * (1.0 - 1e-9)
        disjoint_ok = disjoint_ok and clearance_slack >= 0.0
    premises.append(Premise(
        "cores_disjoint", disjoint_ok, clearance_slack,
        note=f"min core distance {gap:.9g}"))

    return GordianCertificate(tau=tau, premises=tuple(premises))
