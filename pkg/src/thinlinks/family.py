"""One-parameter family of thin gordian unlink candidates.

For tau in [1/2, 1), gamma_tau is the closed CCCC loop made of four unit
arcs through x = (0,0,0) and y = (-2 tau, 0, 0) in the xz-plane (the two
mirror-symmetric minimal CCC halves), and beta_tau is the stadium around
x and y in the xy-plane with semicircle radius 2 tau.  The pair carries
prescribed thickness 2 tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .curves import Arc, OutOfRange, PiecewiseCurve, Segment, build_curve
from .regions import GordianCertificate, certify_unlink

PLANE_POINT = np.zeros(3)
PLANE_NORMAL = np.array([0.0, 0.0, 1.0])


class CertificateFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    tau: float

    def __post_init__(self):
        if not (0.5 <= self.tau < 1.0):
            raise OutOfRange(f"tau = {self.tau} outside [1/2, 1)")

    @property
    def x(self) -> np.ndarray:
        return np.zeros(3)

    @property
    def y(self) -> np.ndarray:
        return np.array([-2.0 * self.tau, 0.0, 0.0])

    @property
    def kappa(self) -> float:
        return 1.0

    @property
    def thickness(self) -> float:
        return 2.0 * self.tau


@dataclass(frozen=True)
class UnlinkMember:
    params: FamilyParams
    gamma: PiecewiseCurve
    beta: PiecewiseCurve
    len_gamma: float
    len_beta: float
    rop: float
    certificate: GordianCertificate


def turn_angle(tau: float) -> float:
    """End-arc half-sweep of the minimal CCC half: acos((1+tau)/2)."""
    return math.acos((1.0 + tau) / 2.0)


def gamma_length_closed_form(tau: float) -> float:
    return 2.0 * math.pi + 8.0 * turn_angle(tau)


def beta_length_closed_form(tau: float) -> float:
    return 4.0 * tau * (math.pi + 1.0)


def build_gamma(tau: float) -> PiecewiseCurve:
    """Closed loop of four unit arcs with sweeps (2B, pi+2B, 2B, pi+2B).

    The two arcs through x and y are centered at (1,0,0) and (-2 tau -1,0,0);
    the two bulge arcs are centered at (-tau, 0, +-h), h = sqrt(4-(1+tau)^2).
    The loop crosses the xy-plane orthogonally at x and y.
    """
    params = FamilyParams(tau)
    B = turn_angle(tau)
    h = math.sqrt(4.0 - (1.0 + tau) ** 2)
    c_x = np.array([1.0, 0.0, 0.0])
    c_up = np.array([-tau, 0.0, h])
    c_y = np.array([-2.0 * tau - 1.0, 0.0, 0.0])
    c_dn = np.array([-tau, 0.0, -h])
    normal = np.array([0.0, 1.0, 0.0])
    # tangency points between consecutive circles
    t1 = 0.5 * (c_x + c_up)
    t2 = 0.5 * (c_up + c_y)
    q0 = np.array([t1[0], 0.0, -t1[2]])
    q1 = np.array([t2[0], 0.0, -t2[2]])
    arcs = (
        Arc(c_x, normal, 1.0, q0, 2.0 * B, +1),       # through x, rising
        Arc(c_up, normal, 1.0, t1, math.pi + 2.0 * B, -1),
        Arc(c_y, normal, 1.0, t2, 2.0 * B, +1),       # through y, descending
        Arc(c_dn, normal, 1.0, q1, math.pi + 2.0 * B, -1),
    )
    return build_curve(arcs, closed=True, kappa=params.kappa)


def build_beta(tau: float) -> PiecewiseCurve:
    """Stadium around x and y in the xy-plane: radius 2 tau, straights 2 tau."""
    params = FamilyParams(tau)
    rho = 2.0 * tau
    x, y = params.x, params.y
    normal = np.array([0.0, 0.0, 1.0])
    prims = (
        Arc(x, normal, rho, x + np.array([0.0, -rho, 0.0]), math.pi, +1),
        Segment(x + np.array([0.0, rho, 0.0]), y + np.array([0.0, rho, 0.0])),
        Arc(y, normal, rho, y + np.array([0.0, rho, 0.0]), math.pi, +1),
        Segment(y + np.array([0.0, -rho, 0.0]), x + np.array([0.0, -rho, 0.0])),
    )
    return build_curve(prims, closed=True, kappa=params.kappa)


def build_member(tau: float, n_samples: int = 2048) -> UnlinkMember:
    """Assemble the pair, lengths, ropelength and its certificate.

    Raises CertificateFailure if any certificate premise fails, which would
    indicate a construction bug for tau in range.
    """
    params = FamilyParams(tau)
    gamma = build_gamma(tau)
    beta = build_beta(tau)
    cert = certify_unlink(gamma, beta, PLANE_POINT, PLANE_NORMAL, tau,
                          n_samples=n_samples)
    if not cert.passed:
        failed = [p.name for p in cert.premises if not p.passed]
        raise CertificateFailure(f"certificate premises failed: {failed}")
    len_gamma = gamma.length
    len_beta = beta.length
    rop = (len_gamma + len_beta) / params.thickness
    return UnlinkMember(params, gamma, beta, len_gamma, len_beta, rop, cert)


@dataclass(frozen=True)
class FamilyRow:
    tau: float
    thickness: float
    len_gamma: float
    len_beta: float
    rop: float
    certificate_pass: bool

    def to_dict(self) -> dict:
        return {"tau": self.tau, "thickness": self.thickness,
                "len_gamma": self.len_gamma, "len_beta": self.len_beta,
                "rop": self.rop, "certificate_pass": self.certificate_pass}


def family_table(taus: Sequence[float], n_samples: int = 2048) -> List[FamilyRow]:
    rows = []
    for tau in taus:
        member = build_member(tau, n_samples=n_samples)
        rows.append(FamilyRow(tau, member.params.thickness, member.len_gamma,
                              member.len_beta, member.rop,
                              member.certificate.passed))
    return rows
