"""Planar shortest bounded-curvature paths (six-word enumeration).

Words are built from C pieces (arcs of radius 1/kappa) and S pieces
(segments).  "L" turns counterclockwise in the oriented plane, i.e. the
heading angle increases; "R" is clockwise.  CCC words are only optimal
when their middle arc exceeds pi; shorter-middle candidates are exposed
but flagged ``candidate_only``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .curves import (Arc, CurveError, DegeneratePrimitive, PiecewiseCurve, Pose,
                     Segment, build_curve)

TWO_PI = 2.0 * math.pi
WORD_ORDER = ("LSL", "RSR", "LSR", "RSL", "RLR", "LRL")


class NonCoplanarInput(ValueError):
    pass


class VanishingTorsion(RuntimeError):
    """Torsion magnitude crossed the vanishing threshold during integration."""

    def __init__(self, t: float, states):
        super().__init__(f"|alpha| fell below threshold at t = {t}")
        self.t = t
        self.states = states


def mod2pi(x: float) -> float:
    r = math.fmod(x, TWO_PI)
    return r + TWO_PI if r < 0 else r


def norm_angle(x: float) -> float:
    """Normalize to (-pi, pi]."""
    r = math.fmod(x, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    elif r > math.pi:
        r -= TWO_PI
    return r


@dataclass(frozen=True)
class PlanarPose:
    point: np.ndarray
    heading: float

    def __post_init__(self):
        p = np.array(self.point, dtype=float)
        if p.shape != (2,):
            raise ValueError("planar pose point must be a 2-vector")
        p.setflags(write=False)
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "heading", norm_angle(float(self.heading)))


@dataclass(frozen=True)
class DubinsPath:
    word: str
    piece_params: Tuple[float, float, float]
    total_length: float
    kappa: float
    candidate_only: bool = False

    def __post_init__(self):
        if self.word not in WORD_ORDER:
            raise ValueError(f"unknown word {self.word!r}")
        t, m, q = self.piece_params
        r = 1.0 / self.kappa
        expected = r * (t + q) + (r * m if self.word[1] != "S" else m)
        if abs(expected - self.total_length) > 1e-12 * max(1.0, expected):
            raise ValueError("total_length inconsistent with piece parameters")

    @property
    def pieces(self) -> List[Tuple[str, float]]:
        """(kind, size) triples; size is an angle for C, a length for S."""
        t, m, q = self.piece_params
        return [(self.word[0], t), (self.word[1], m), (self.word[2], q)]


def _left_center(p: np.ndarray, theta: float, r: float) -> np.ndarray:
    return p + r * np.array([-math.sin(theta), math.cos(theta)])


def _right_center(p: np.ndarray, theta: float, r: float) -> np.ndarray:
    return p + r * np.array([math.sin(theta), -math.cos(theta)])


def _csc(word: str, start: PlanarPose, goal: PlanarPose, r: float) -> List[DubinsPath]:
    th0, th1 = start.heading, goal.heading
    c1 = _left_center(start.point, th0, r) if word[0] == "L" else _right_center(start.point, th0, r)
    c2 = _left_center(goal.point, th1, r) if word[2] == "L" else _right_center(goal.point, th1, r)
    delta = c2 - c1
    dist = float(np.linalg.norm(delta))
    if word in ("LSL", "RSR"):
        if dist < 1e-12:
            # coincident circles: single arc, no straight piece
            t = mod2pi(th1 - th0) if word == "LSL" else mod2pi(th0 - th1)
            return [DubinsPath(word, (t, 0.0, 0.0), r * t, 1.0 / r)]
        psi = math.atan2(delta[1], delta[0])
        s_len = dist
    else:
        if dist < 2.0 * r:
            return []
        s_len = math.sqrt(dist * dist - 4.0 * r * r)
        phi = math.atan2(delta[1], delta[0])
        psi = phi + math.atan2(2.0 * r, s_len) if word == "LSR" else phi - math.atan2(2.0 * r, s_len)
    t = mod2pi(psi - th0) if word[0] == "L" else mod2pi(th0 - psi)
    q = mod2pi(th1 - psi) if word[2] == "L" else mod2pi(psi - th1)
    return [DubinsPath(word, (t, s_len, q), r * (t + q) + s_len, 1.0 / r)]


def _ccc(word: str, start: PlanarPose, goal: PlanarPose, r: float) -> List[DubinsPath]:
    th0, th1 = start.heading, goal.heading
    if word == "RLR":
        c1 = _right_center(start.point, th0, r)
        c3 = _right_center(goal.point, th1, r)
    else:
        c1 = _left_center(start.point, th0, r)
        c3 = _left_center(goal.point, th1, r)
    delta = c3 - c1
    dist = float(np.linalg.norm(delta))
    if dist < 1e-9 or dist >= 4.0 * r - 1e-12:
        return []
    mid = 0.5 * (c1 + c3)
    perp = np.array([-delta[1], delta[0]]) / dist
    h = math.sqrt(4.0 * r * r - 0.25 * dist * dist)
    out = []
    for side in (1.0, -1.0):
        c2 = mid + side * h * perp
        t1 = 0.5 * (c1 + c2)
        t2 = 0.5 * (c2 + c3)
        a_start = math.atan2(start.point[1] - c1[1], start.point[0] - c1[0])
        a_t1 = math.atan2(t1[1] - c1[1], t1[0] - c1[0])
        b1 = math.atan2(t1[1] - c2[1], t1[0] - c2[0])
        b2 = math.atan2(t2[1] - c2[1], t2[0] - c2[0])
        a_t2 = math.atan2(t2[1] - c3[1], t2[0] - c3[0])
        a_goal = math.atan2(goal.point[1] - c3[1], goal.point[0] - c3[0])
        if word == "RLR":
            t = mod2pi(a_start - a_t1)
            m = mod2pi(b2 - b1)
            q = mod2pi(a_t2 - a_goal)
        else:
            t = mod2pi(a_t1 - a_start)
            m = mod2pi(b1 - b2)
            q = mod2pi(a_goal - a_t2)
        out.append(DubinsPath(word, (t, m, q), r * (t + m + q), 1.0 / r,
                              candidate_only=m <= math.pi))
    return out


def word_candidates(start: PlanarPose, goal: PlanarPose, kappa: float) -> List[DubinsPath]:
    """Every geometrically feasible word with its length.

    CCC words come in up to two variants (middle circle on either side);
    those whose middle arc does not exceed pi are flagged candidate_only.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    r = 1.0 / kappa
    cands: List[DubinsPath] = []
    for word in ("LSL", "RSR", "LSR", "RSL"):
        cands.extend(_csc(word, start, goal, r))
    for word in ("RLR", "LRL"):
        cands.extend(_ccc(word, start, goal, r))
    return cands


def plan_dubins_2d(start: PlanarPose, goal: PlanarPose, kappa: float) -> DubinsPath:
    """Minimum-length path over all admissible words.

    Ties are broken by word order LSL < RSR < LSR < RSL < RLR < LRL.
    """
    best = None
    for cand in word_candidates(start, goal, kappa):
        if cand.candidate_only:
            continue
        key = (cand.total_length, WORD_ORDER.index(cand.word))
        if best is None or key < best[0]:
            best = (key, cand)
    assert best is not None, "CSC words always yield a candidate"
    return best[1]


def rollout_2d(path: DubinsPath, start: PlanarPose, n_per_piece: int = 0):
    """Integrate the word from ``start``; returns the final PlanarPose.

    With n_per_piece > 0 also returns sampled points along the way.
    """
    r = 1.0 / path.kappa
    p = start.point.copy()
    th = start.heading
    pts = [p.copy()]
    for kind, size in path.pieces:
        if size <= 0:
            continue
        if kind == "S":
            steps = np.linspace(0, size, max(n_per_piece, 1) + 1)[1:]
            for ds in steps:
                pts.append(p + ds * np.array([math.cos(th), math.sin(th)]))
            p = pts[-1]
        else:
            sgn = 1.0 if kind == "L" else -1.0
            c = _left_center(p, th, r) if kind == "L" else _right_center(p, th, r)
            a0 = math.atan2(p[1] - c[1], p[0] - c[0])
            steps = np.linspace(0, size, max(n_per_piece, 1) + 1)[1:]
            for da in steps:
                a = a0 + sgn * da
                pts.append(c + r * np.array([math.cos(a), math.sin(a)]))
            p = pts[-1]
            th = th + sgn * size
    final = PlanarPose(p, th)
    if n_per_piece > 0:
        return final, np.array(pts)
    return final


def embed_in_plane(path: DubinsPath, start3d: Pose, plane_normal) -> PiecewiseCurve:
    """Realize a planar word as a 3D curve in the plane through ``start3d``.

    The plane is oriented by ``plane_normal``: "L" arcs rotate counter-
    clockwise about it.  The start tangent must lie in the plane.
    """
    n = np.asarray(plane_normal, dtype=float)
    n = n / np.linalg.norm(n)
    T = start3d.tangent
    if abs(float(np.dot(T, n))) > 1e-9:
        raise NonCoplanarInput("start tangent must be perpendicular to the plane normal")
    r = 1.0 / path.kappa
    p = start3d.point.astype(float)
    prims = []
    for kind, size in path.pieces:
        if size <= 1e-12:
            continue
        if kind == "S":
            end = p + size * T
            prims.append(Segment(p, end))
            p = end
        else:
            sgn = 1 if kind == "L" else -1
            center = p + sgn * r * np.cross(n, T)
            prims.append(Arc(center, n, r, p, size, sgn))
            ang = sgn * size
            rel = p - center
            p = center + math.cos(ang) * rel + math.sin(ang) * np.cross(n, rel)
            T = math.cos(ang) * T + math.sin(ang) * np.cross(n, T)
            T = T / np.linalg.norm(T)
    if not prims:
        raise DegeneratePrimitive("zero-length path cannot be embedded")
    return build_curve(prims, closed=False, kappa=path.kappa)


# ---------------------------------------------------------------------------
# torsion ODE for helicoidal arcs


@dataclass(frozen=True)
class TorsionState:
    alpha: float
    alpha_prime: float
    xi: float
    t: float

    def __post_init__(self):
        if self.xi < 0:
            raise ValueError("xi must be nonnegative")


class _NearZeroTorsion(Exception):
    pass


def _torsion_rhs(alpha: float, alpha_prime: float, xi: float) -> float:
    if abs(alpha) < 1e-9:
        raise _NearZeroTorsion
    return (1.5 * alpha_prime * alpha_prime / alpha
            - 2.0 * alpha ** 3 + 2.0 * alpha
            - xi * alpha * math.sqrt(abs(alpha)))


def integrate_torsion_ode(initial: TorsionState, t_end: float,
                          step: float = 1e-3) -> List[TorsionState]:
    """Fixed-step RK4 trajectory of the torsion equation.

    Raises VanishingTorsion (carrying the partial trajectory) if |alpha|
    drops below 1e-9, where the equation is singular.
    """
    if initial.alpha == 0:
        raise ValueError("initial torsion must be nonzero")
    if step <= 0:
        raise ValueError("step must be positive")
    xi = initial.xi
    a, ap, t = initial.alpha, initial.alpha_prime, initial.t
    states = [initial]
    n = max(1, int(round((t_end - initial.t) / step)))
    for _ in range(n):
        try:
            k1a, k1p = ap, _torsion_rhs(a, ap, xi)
            k2a, k2p = ap + 0.5 * step * k1p, _torsion_rhs(a + 0.5 * step * k1a, ap + 0.5 * step * k1p, xi)
            k3a, k3p = ap + 0.5 * step * k2p, _torsion_rhs(a + 0.5 * step * k2a, ap + 0.5 * step * k2p, xi)
            k4a, k4p = ap + step * k3p, _torsion_rhs(a + step * k3a, ap + step * k3p, xi)
        except ZeroDivisionError:
            raise VanishingTorsion(t, states) from None
        a = a + (step / 6.0) * (k1a + 2 * k2a + 2 * k3a + k4a)
        ap = ap + (step / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        t = t + step
        if abs(a) < 1e-9:
            raise VanishingTorsion(t, states)
        states.append(TorsionState(a, ap, xi, t))
    return states
