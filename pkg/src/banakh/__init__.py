"""Exact tools for metric spaces whose spheres have exactly two points.

Layers, bottom up: surd-exact values (``values``), half-group and
divisibility calculus on distance monoids (``monoid_algebra``), graph
pseudometrics with hat/check bounds and generic completion
(``graph_metric``), sphere-based geometry over pluggable oracles
(``banakh_space``), the symbolic free-group model (``banakh_group``), the
staged fragment builder with certificates (``space_builder``), and JSON
round-trips plus a CLI (``serialize``, ``cli``).
"""

from .values import SurdValue, ZERO, rat, format_rat, rational_between
from .monoid_algebra import (MonoidDesc, DzikResult, dzik_reduce, delta_p,
                             div_p, is_half_group, is_p_divisible_in,
                             is_floppy, ddot_set, CLOSURES)
from .graph_metric import (GraphMetric, MuGraph, ScaledMu, build_mu, hat,
                           check, is_floppy_graph, validate_pseudometric,
                           extend_to_full, ExtensionPolicy, ExtensionResult,
                           ExtensionExhausted, floppy_union, UnionReport,
                           ConditionViolation)
from .banakh_space import (MetricFragment, verify_fragment, FragmentReport,
                           real_line_banakh_check, SphereOracle, ZLineOracle,
                           FragmentOracle, Orientation, gps_locate,
                           discrete_line, orientation, segment_construct,
                           split_segment, directed_point, zr_sphere_map,
                           hypersphere_map, HypersphereReport,
                           embed_in_real_line, EmbedResult, SphereDeficiency,
                           NoSuchRadius, AmbiguityViolation,
                           BanakhLawViolation)
from .banakh_group import (GroupElement, zero, basis, add, neg, scale,
                           norm_equal, normsq, DistToken, dist_token, sphere,
                           ratio_in_Q, between, is_p_divisible_elem,
                           numeric_norm, h_norm_certificate,
                           solve_norm_equation, NormEquationResult,
                           GroupOracle)
from .space_builder import (RadiusClass, BuildSpec, Certificate, build,
                            verify_certificate, SpecRejected, BuildExhausted)

__version__ = "1.0.0"

__all__ = [
    "SurdValue", "ZERO", "rat", "format_rat", "rational_between",
    "MonoidDesc", "DzikResult", "dzik_reduce", "delta_p", "div_p",
    "is_half_group", "is_p_divisible_in", "is_floppy", "ddot_set", "CLOSURES",
    "GraphMetric", "MuGraph", "ScaledMu", "build_mu", "hat", "check",
    "is_floppy_graph", "validate_pseudometric", "extend_to_full",
    "ExtensionPolicy", "ExtensionResult", "ExtensionExhausted",
    "floppy_union", "UnionReport", "ConditionViolation",
    "MetricFragment", "verify_fragment", "FragmentReport",
    "real_line_banakh_check", "SphereOracle", "ZLineOracle", "FragmentOracle",
    "Orientation", "gps_locate", "discrete_line", "orientation",
    "segment_construct", "split_segment", "directed_point", "zr_sphere_map",
    "hypersphere_map", "HypersphereReport", "embed_in_real_line",
    "EmbedResult", "SphereDeficiency", "NoSuchRadius", "AmbiguityViolation",
    "BanakhLawViolation",
    "GroupElement", "zero", "basis", "add", "neg", "scale", "norm_equal",
    "normsq", "DistToken", "dist_token", "sphere", "ratio_in_Q", "between",
    "is_p_divisible_elem", "numeric_norm", "h_norm_certificate",
    "solve_norm_equation", "NormEquationResult", "GroupOracle",
    "RadiusClass", "BuildSpec", "Certificate", "build", "verify_certificate",
    "SpecRejected", "BuildExhausted",
]
