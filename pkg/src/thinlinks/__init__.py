"""Curvature-constrained curve geometry toolkit.

Piecewise arc/segment curves with a curvature bound, planar shortest
bounded-curvature path planning, thickness/ropelength computation,
obstruction-region predicates, and the one-parameter family of thin
gordian unlink candidates, all backed by brute-force verification
harnesses.
"""

from .curves import (Arc, CurvatureViolation, CurveError, DegeneratePrimitive,
                     IntersectionWitness, JointMismatch, OutOfRange,
                     PiecewiseCurve, Pose, Segment, build_curve, diameter,
                     evaluate, from_json_dict, length, min_distance_between,
                     min_self_distance, mirrored, scaled, self_intersects,
                     subcurve, to_json_dict, transformed)
from .dubins import (DubinsPath, NonCoplanarInput, PlanarPose, TorsionState,
                     VanishingTorsion, embed_in_plane, integrate_torsion_ode,
                     plan_dubins_2d, rollout_2d, word_candidates)
from .export import InfeasibleTube, TubeMeshSpec, export_obj, export_svg
from .family import (CertificateFailure, FamilyParams, FamilyRow, UnlinkMember,
                     beta_length_closed_form, build_beta, build_gamma,
                     build_member, family_table, gamma_length_closed_form)
from .oracle import (BruteForceResult, ControlGrid, Rejected, SearchReport,
                     Unreachable, brute_force_shortest, forbidden_region_search,
                     random_arc, random_planar_instances)
from .regions import (ArcClassification, ArcKind, EndpointMismatch,
                      GordianCertificate, InvalidConfig, NotLongArc, Premise,
                      RegionConfig, certify_unlink, check_long_arc_diameter,
                      classify_arc, plane_crossings, region_membership,
                      region_membership_many, spindle_margin)
from .thickness import (InfeasibleThickness, NoCriticalPair, NonPlanarCurve,
                        RopelengthReport, ThicknessReport, double_critical_min,
                        min_radius_of_curvature, ribbonlength, ropelength,
                        thickness_radius)

__version__ = "0.1.0"
