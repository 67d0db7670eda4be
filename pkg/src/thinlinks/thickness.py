"""Thickness, ropelength and ribbonlength of piecewise curves and links.

The radius of thickness of a closed curve is min(R1, R2/2), where R1 is
the smallest radius of curvature and R2 is the smallest distance between
doubly-critical points (pairs whose chord is orthogonal to both tangents).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .curves import Arc, CurveError, PiecewiseCurve, Segment, _pair_separation

ORTHO_TOL = 1e-7


class NoCriticalPair(RuntimeError):
    """No doubly-critical pair was found; internal failure for closed curves."""


class InfeasibleThickness(ValueError):
    pass


class NonPlanarCurve(ValueError):
    pass


@dataclass(frozen=True)
class ThicknessReport:
    r1: float
    r2: float
    tau: float
    witness: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "r1": None if math.isinf(self.r1) else self.r1,
            "r2": self.r2,
            "tau": self.tau,
            "witness": list(self.witness),
        }


@dataclass(frozen=True)
class RopelengthReport:
    total_length: float
    prescribed_thickness: float
    rop: float
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "total_length": self.total_length,
            "prescribed_thickness": self.prescribed_thickness,
            "rop": self.rop,
            "feasible": self.feasible,
        }


def min_radius_of_curvature(curve: PiecewiseCurve) -> float:
    """Smallest arc radius; +inf for a curve made of segments only."""
    radii = [p.radius for p in curve if isinstance(p, Arc)]
    return min(radii) if radii else math.inf


# ---------------------------------------------------------------------------
# doubly-critical pair search


def _orthogonality_residual(curve: PiecewiseCurve, s1: float, s2: float):
    pts, tans = curve.sample(np.array([s1, s2]))
    chord = pts[1] - pts[0]
    return np.array([float(np.dot(tans[0], chord)), float(np.dot(tans[1], chord))]), chord


def _refine_critical(curve: PiecewiseCurve, s1: float, s2: float, max_iter: int = 40):
    """Damped Newton iteration on the two orthogonality residuals."""
    L = curve.length
    h = 1e-6 * max(L, 1.0)
    x = np.array([s1, s2])
    res, _ = _orthogonality_residual(curve, x[0], x[1])
    for _ in range(max_iter):
        if np.linalg.norm(res) < 1e-13:
            break
        J = np.empty((2, 2))
        for j in range(2):
            xp = x.copy()
            xp[j] += h
            rp, _ = _orthogonality_residual(curve, xp[0] % L, xp[1] % L)
            J[:, j] = (rp - res) / h
        try:
            step = np.linalg.lstsq(J, -res, rcond=None)[0]
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        scale = 1.0
        for _ in range(20):
            xn = (x + scale * step) % L
            rn, _ = _orthogonality_residual(curve, xn[0], xn[1])
            if np.linalg.norm(rn) < np.linalg.norm(res):
                x, res = xn, rn
                break
            scale *= 0.5
        else:
            break
    return float(x[0]), float(x[1])


def _primitive_grids(curve: PiecewiseCurve, n_samples: int):
    """Per-primitive absolute arc-length grids, denser on longer pieces."""
    L = curve.length
    cum = np.concatenate([[0.0], np.cumsum(curve.piece_lengths)])
    grids = []
    for i, p in enumerate(curve.primitives):
        m = max(16, int(round(n_samples * p.length / L)))
        grids.append(np.linspace(cum[i], cum[i + 1], m))
    return grids


def _segment_pair_candidates(curve: PiecewiseCurve):
    """Common-perpendicular parameters for every segment-segment pair."""
    cum = np.concatenate([[0.0], np.cumsum(curve.piece_lengths)])
    out = []
    prims = curve.primitives
    for i in range(len(prims)):
        if not isinstance(prims[i], Segment):
            continue
        for j in range(i, len(prims)):
            if not isinstance(prims[j], Segment):
                continue
            a, b = prims[i], prims[j]
            da, db = a.direction, b.direction
            w = b.start - a.start
            aa = 1.0
            bb = float(np.dot(da, db))
            if abs(abs(bb) - 1.0) < 1e-12:
                # parallel: flat family, take midpoints of the overlap
                out.append((cum[i] + a.length / 2, cum[j] + b.length / 2))
                continue
            # minimize |a.start + u*da - b.start - v*db|
            rhs = np.array([float(np.dot(w, da)), float(np.dot(w, db))])
            M = np.array([[aa, -bb], [bb, -1.0]])
            try:
                u, v = np.linalg.solve(M, rhs)
            except np.linalg.LinAlgError:
                continue
            if 0 <= u <= a.length and 0 <= v <= b.length:
                out.append((cum[i] + u, cum[j] + v))
    return out


def double_critical_min(curve: PiecewiseCurve, n_samples: int = 4096):
    """Minimum distance over doubly-critical pairs of a closed curve.

    Pairs closer than pi/kappa in arc length are excluded; the remaining
    grid minima of the pairwise distance are polished with a Newton
    iteration on the orthogonality residuals.  Returns (r2, (s1, s2)).
    """
    if not curve.closed:
        raise CurveError("double_critical_min requires a closed curve")
    L = curve.length
    exclusion = math.pi / curve.kappa
    grids = _primitive_grids(curve, n_samples)
    cand: List[Tuple[float, float, float]] = []
    for i in range(len(grids)):
        for j in range(i, len(grids)):
            s1g, s2g = grids[i], grids[j]
            p1 = curve.points_at(s1g)
            p2 = p1 if j == i else curve.points_at(s2g)
            D = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=2)
            sep = _pair_separation(s1g[:, None], s2g[None, :], L, True)
            D = np.where(sep < exclusion, np.inf, D)
            if not np.any(np.isfinite(D)):
                continue
            # interior local minima of the masked distance field
            pad = np.pad(D, 1, constant_values=np.inf)
            is_min = np.ones_like(D, dtype=bool)
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    is_min &= D <= pad[1 + di:1 + di + D.shape[0], 1 + dj:1 + dj + D.shape[1]]
            is_min &= np.isfinite(D)
            ii, jj = np.nonzero(is_min)
            order = np.argsort(D[ii, jj])[:12]
            for k in order:
                cand.append((float(D[ii[k], jj[k]]), float(s1g[ii[k]]), float(s2g[jj[k]])))
    for s1, s2 in _segment_pair_candidates(curve):
        cand.append((float(np.linalg.norm(curve.points_at([s1])[0] - curve.points_at([s2])[0])), s1, s2))

    best: Optional[Tuple[float, float, float]] = None
    cand.sort(key=lambda c: c[0])
    for _, s1, s2 in cand[:60]:
        refined = _refine_critical(curve, s1, s2)
        if refined is None:
            continue
        r1, r2 = refined
        if _pair_separation(np.array(r1), np.array(r2), L, True) < exclusion - 1e-9:
            continue
        res, chord = _orthogonality_residual(curve, r1, r2)
        d = float(np.linalg.norm(chord))
        if d < 1e-12 or np.max(np.abs(res)) > ORTHO_TOL * d:
            continue
        if best is None or d < best[0]:
            best = (d, r1, r2)
    if best is None:
        raise NoCriticalPair("no doubly-critical pair found")
    return best[0], (best[1], best[2])


def thickness_radius(curve: PiecewiseCurve, n_samples: int = 4096) -> ThicknessReport:
    r1 = min_radius_of_curvature(curve)
    r2, witness = double_critical_min(curve, n_samples)
    return ThicknessReport(r1=r1, r2=r2, tau=min(r1, 0.5 * r2), witness=witness)


# ---------------------------------------------------------------------------
# ropelength and ribbonlength


def ropelength(link: Sequence[PiecewiseCurve], prescribed_thickness: float,
               strict: bool = False, enforce_thin_range: bool = True,
               n_samples: int = 4096) -> RopelengthReport:
    """Total core length divided by the prescribed thickness.

    ``feasible`` records whether the thickness fits inside every component's
    own thickness bound (tube radius may equal tau).  The thin-link range
    [1, 2) is enforced unless ``enforce_thin_range`` is off.
    """
    if prescribed_thickness <= 0:
        raise ValueError("prescribed thickness must be positive")
    if enforce_thin_range and not (1.0 <= prescribed_thickness < 2.0):
        raise ValueError(
            f"thickness {prescribed_thickness} outside the thin range [1, 2); "
            "pass enforce_thin_range=False for general use"
        )
    total = sum(c.length for c in link)
    feasible = True
    for comp in link:
        tau = thickness_radius(comp, n_samples).tau
        if prescribed_thickness > 2.0 * tau + 1e-9:
            feasible = False
    if strict and not feasible:
        raise InfeasibleThickness(
            f"thickness {prescribed_thickness} exceeds a component bound")
    return RopelengthReport(total, prescribed_thickness,
                            total / prescribed_thickness, feasible)


def _fit_plane(points: np.ndarray):
    centroid = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - centroid)
    normal = vt[2]
    dev = float(np.max(np.abs((points - centroid) @ normal)))
    return centroid, normal, dev


def ribbonlength(planar_curve: PiecewiseCurve, width: float,
                 n_samples: int = 512) -> float:
    """Core length over ribbon width, for curves lying in a plane."""
    if width <= 0:
        raise ValueError("width must be positive")
    pts = planar_curve.points_at(planar_curve.uniform_params(n_samples))
    _, _, dev = _fit_plane(pts)
    if dev > 1e-9:
        raise NonPlanarCurve(f"curve deviates {dev:.3e} from the best plane")
    return planar_curve.length / width
