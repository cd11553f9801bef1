"""JSON round-trips for every object the command line touches.

Values serialize as exact rationals ("p/q") or as {"rat": ..., "surds":
{prime: coefficient}}; nothing ever passes through floats.  ``dumps``
produces canonical bytes (sorted keys, no whitespace) so identical inputs
give identical outputs across runs and platforms.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .banakh_space import MetricFragment
from .banakh_group import DistToken, GroupElement
from .graph_metric import GraphMetric
from .monoid_algebra import CLOSURES, MonoidDesc
from .space_builder import BuildSpec, Certificate, RadiusClass
from .values import SurdValue, format_rat, is_prime

__all__ = [
    "dumps",
    "FormatError",
    "value_to_json", "value_from_json",
    "monoid_to_json", "monoid_from_json",
    "graph_to_json", "graph_from_json",
    "fragment_to_json", "fragment_from_json",
    "buildspec_to_json", "buildspec_from_json",
    "element_to_json", "element_from_json",
    "token_to_json", "token_from_json",
    "certificate_to_json", "certificate_from_json",
]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class FormatError(ValueError):
    """Malformed input document."""


def _rat_from(obj) -> Fraction:
    if isinstance(obj, bool):
        raise FormatError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a rational: {obj!r}") from exc
    raise FormatError(f"not a rational: {obj!r}")


def value_to_json(v: SurdValue):
    if v.is_rational():
        return format_rat(v.as_rational())
    return {"rat": format_rat(v.rational_part),
            "surds": {str(p): format_rat(v.coefficient(p))
                      for p in sorted(v.primes())}}


def value_from_json(obj) -> SurdValue:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return SurdValue(_rat_from(obj))
    if isinstance(obj, dict):
        coeffs = {}
        for key, c in obj.get("surds", {}).items():
            p = int(key)
            if not is_prime(p):
                raise FormatError(f"surd index {key} is not prime")
            coeffs[p] = _rat_from(c)
        return SurdValue(_rat_from(obj.get("rat", 0)), coeffs)
    raise FormatError(f"not a value: {obj!r}")


def monoid_to_json(m: MonoidDesc) -> dict:
    if m.variant == "closure":
        return {"variant": "closure", "closure_id": m.closure_id}
    return {"variant": m.variant,
            "generators": [format_rat(g) for g in m.generators]}


def monoid_from_json(obj) -> MonoidDesc:
    if not isinstance(obj, dict) or "variant" not in obj:
        raise FormatError(f"not a monoid description: {obj!r}")
    variant = obj["variant"]
    if variant == "closure":
        cid = obj.get("closure_id")
        if cid not in CLOSURES:
            raise FormatError(f"unknown closure id {cid!r}")
        return MonoidDesc.closure(cid)
    if variant not in ("fingen", "groupcone"):
        raise FormatError(f"unknown monoid variant {variant!r}")
    gens = [_rat_from(g) for g in obj.get("generators", [])]
    if any(g <= 0 for g in gens):
        raise FormatError("generators must be positive")
    return MonoidDesc(variant, gens)


def graph_to_json(g: GraphMetric) -> dict:
    return {"vertices": list(g.vertices),
            "edges": [[u, v, value_to_json(w)]
                      for (u, v), w in sorted(g.edges.items())]}


def graph_from_json(obj) -> GraphMetric:
    try:
        vertices = [str(v) for v in obj["vertices"]]
        edges = {}
        for u, v, w in obj["edges"]:
            edges[(str(u), str(v))] = value_from_json(w)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a graph: {exc}") from exc
    return GraphMetric(vertices, edges)


def fragment_to_json(f: MetricFragment) -> dict:
    return {"points": list(f.points),
            "dist": [[u, v, value_to_json(w)] for (u, v), w in sorted(f.pairs())]}


def fragment_from_json(obj) -> MetricFragment:
    try:
        points = [str(p) for p in obj["points"]]
        dist = {}
        for u, v, w in obj["dist"]:
            dist[(str(u), str(v))] = value_from_json(w)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a fragment: {exc}") from exc
    return MetricFragment(points, dist)


def buildspec_to_json(spec: BuildSpec) -> dict:
    return {"radii": [{"r": value_to_json(c.r), "monoid": monoid_to_json(c.monoid)}
                      for c in spec.radii],
            "stages": spec.stages,
            "window": format_rat(spec.window),
            "denom_bound": spec.denom_bound,
            "seed": spec.seed}


def buildspec_from_json(obj, seed=None) -> BuildSpec:
    try:
        radii = [RadiusClass(value_from_json(c["r"]), monoid_from_json(c["monoid"]))
                 for c in obj["radii"]]
        spec = BuildSpec(radii=radii,
                         stages=int(obj.get("stages", 1)),
                         window=_rat_from(obj.get("window", 5)),
                         denom_bound=int(obj.get("denom_bound", 64)),
                         seed=int(obj["seed"] if seed is None
                                  else seed))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"not a build spec: {exc}") from exc
    return spec


def element_to_json(x: GroupElement) -> dict:
    return {"coeffs": {str(a): format_rat(c)
                       for a, c in sorted(x.coeffs.items())}}


def element_from_json(obj) -> GroupElement:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise FormatError(f"not a group element: {obj!r}")
    try:
        coeffs = {int(a): _rat_from(c) for a, c in obj["coeffs"].items()}
    except (TypeError, ValueError) as exc:
        raise FormatError(f"not a group element: {exc}") from exc
    if any(a < 0 for a in coeffs):
        raise FormatError("coordinate indices must be non-negative")
    return GroupElement(coeffs)


def token_to_json(t: DistToken) -> dict:
    out = element_to_json(t.rep)
    out["sign_normalized"] = True
    return out


def token_from_json(obj) -> DistToken:
    return DistToken(element_from_json(obj))


def _plain(obj):
    """Recursively flatten exact values for JSON embedding."""
    if isinstance(obj, SurdValue):
        return value_to_json(obj)
    if isinstance(obj, Fraction):
        return format_rat(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def certificate_to_json(cert: Certificate) -> dict:
    return {"seed": cert.seed,
            "stages": _plain(cert.stages),
            "classes": _plain(cert.classes),
            "realized_distances": [value_to_json(v)
                                   for v in cert.realized_distances],
            "generic_values": [value_to_json(v) for v in cert.generic_values],
            "spheres": _plain(cert.spheres),
            "sphere_law_ok": cert.sphere_law_ok,
            "growth_ok": cert.growth_ok}


def certificate_from_json(obj) -> Certificate:
    try:
        spheres = []
        for entry in obj["spheres"]:
            entry = dict(entry)
            entry["radius"] = value_from_json(entry["radius"])
            entry["class"] = int(entry["class"])
            spheres.append(entry)
        return Certificate(
            seed=int(obj["seed"]),
            stages=obj["stages"],
            classes=obj["classes"],
            realized_distances=[value_from_json(v)
                                for v in obj["realized_distances"]],
            generic_values=[value_from_json(v) for v in obj["generic_values"]],
            spheres=spheres,
            sphere_law_ok=bool(obj["sphere_law_ok"]),
            growth_ok=bool(obj.get("growth_ok", True)))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a certificate: {exc}") from exc
