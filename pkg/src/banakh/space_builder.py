"""Staged manufacture of finite fragments with prescribed distance sets.

A build starts from the windowed difference graph of the first radius class,
completes it to a full metric with certified-generic surd values, then runs
successor rounds: every point whose class-distance sphere is deficient (at
most one member) gets an isomorphic copy of that class's difference graph
glued onto the sphere, the union is checked floppy, and the whole thing is
completed again.  The result is a fragment whose realized distances split
into the prescribed class monoids plus a logged set of generic values, whose
spheres obey the two-point law, and which ships with a certificate that can
be re-verified without rerunning the build.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .banakh_space import MetricFragment, verify_fragment
from .graph_metric import (ExtensionExhausted, ExtensionPolicy, GraphMetric,
                           MuGraph, ScaledMu, extend_to_full, floppy_union)
from .monoid_algebra import MonoidDesc, is_floppy
from .values import SurdValue, rat

__all__ = [
    "RadiusClass",
    "BuildSpec",
    "Certificate",
    "SpecRejected",
    "BuildExhausted",
    "build",
    "verify_certificate",
]


class SpecRejected(ValueError):
    """The build request violates a precondition (e.g. a non-floppy class)."""


class BuildExhausted(RuntimeError):
    def __init__(self, stage: int, pair, detail: str = ""):
        self.stage = stage
        self.pair = pair
        super().__init__(f"build stalled at stage {stage} on {pair}"
                         + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class RadiusClass:
    """A prescribed radius r with its unit monoid N (so the value set is
    r·N, and 1 ∈ N because r itself is a realized distance)."""
    r: SurdValue
    monoid: MonoidDesc


@dataclass
class BuildSpec:
    radii: tuple
    stages: int = 1
    window: Fraction = Fraction(5)
    denom_bound: int = 64
    seed: int = 0

    def __post_init__(self):
        self.radii = tuple(self.radii)
        self.window = rat(self.window)
        if self.stages < 1:
            raise SpecRejected("stages must be at least 1")
        if self.window <= 0:
            raise SpecRejected("window must be positive")
        for cls in self.radii:
            if not cls.r.sign() > 0:
                raise SpecRejected("radii must be positive")
            verdict, witness = is_floppy(cls.monoid)
            if not verdict:
                raise SpecRejected(
                    f"monoid of radius {cls.r} is not floppy (witness {witness})")

    def canonical_classes(self):
        """Deduplicate classes that coincide after rational rescaling;
        reject rational-ratio pairs that do not coincide."""
        kept = []
        for cls in self.radii:
            matched = False
            for old in kept:
                q = cls.r.ratio_to(old.r)
                if q is None:
                    continue
                w = self.window / min(q, 1)
                same = ([e * q for e in cls.monoid.elements(w, self.denom_bound)]
                        == old.monoid.elements(w * q, self.denom_bound))
                if same:
                    matched = True
                    break
                raise SpecRejected(
                    f"radii {cls.r} and {old.r} are rationally related but "
                    "their value monoids differ")
            if not matched:
                kept.append(cls)
        return tuple(kept)


@dataclass
class Certificate:
    seed: int
    stages: list
    classes: list              # per class: {"r", "floppy", "units_window"}
    realized_distances: list   # sorted distinct SurdValues
    generic_values: list       # every extension assignment, in order
    spheres: list              # class-radius sphere ledger on the final object
    sphere_law_ok: bool = True      # two-point law held at every class radius
    growth_ok: bool = True     # every copy-targeted sphere ended with 2 points


def _invert(r: SurdValue) -> SurdValue:
    """1/r for rational r or a pure single-surd r = c·sqrt(p)."""
    if r.is_rational():
        return SurdValue(1 / r.as_rational())
    primes = sorted(r.primes())
    if r.rational_part == 0 and len(primes) == 1:
        p = primes[0]
        c = r.coefficient(p)
        return SurdValue(0, {p: 1 / (c * p)})
    raise SpecRejected("radii must be rational or pure single-surd values")


def _units_window(window: Fraction, r: SurdValue) -> Fraction:
    """A rational w with w ≤ window/r (exact when r is rational)."""
    if r.is_rational():
        return window / r.as_rational()
    bound = _invert(r) * window
    return bound.brackets(16)[0]


def _class_sphere(f: GraphMetric, x: str, cls: RadiusClass):
    """Vertices whose distance to x lies in r·(N \\ {0}), with unit ratios."""
    out = []
    for y in f.vertices:
        if y == x:
            continue
        q = f.edge_value(x, y).ratio_to(cls.r)
        if q is not None and q > 0 and cls.monoid.member(q):
            out.append((y, q))
    return out


def build(spec: BuildSpec):
    """Run the staged construction.  Deterministic for a given seed."""
    classes = spec.canonical_classes()
    cert_classes = []
    templates = []
    for cls in classes:
        uw = _units_window(spec.window, cls.r)
        if uw < 1:
            raise SpecRejected(
                f"window {spec.window} cannot host a single step of radius {cls.r}")
        # copies carry double slack so every glued sphere member fits and
        # shortest paths inside the copy match the closed hat formula
        tmpl = MuGraph(cls.monoid, 1, 2 * uw, spec.denom_bound)
        templates.append((cls, uw, tmpl))
        cert_classes.append({"r": cls.r, "floppy": True, "units_window": uw})

    if not classes:
        fragment = MetricFragment(["a0"], {})
        cert = Certificate(seed=spec.seed, stages=[], classes=[],
                           realized_distances=[], generic_values=[],
                           spheres=[], sphere_law_ok=True)
        return fragment, cert

    cls0, uw0, _ = templates[0]
    base = MuGraph(cls0.monoid, 1, uw0, spec.denom_bound)
    rename0 = {tid: f"a{tid}" for tid in base.vertices}
    g = ScaledMu(base, cls0.r, rename0)
    stage_log = []
    generic_log = []
    targets_seen = []  # (point, class, deficient radii) of every glued copy
    f_full, backtracks = _complete(g, spec, stage=0)
    generic_log.extend(f_full.edges[p] for p in sorted(set(f_full.edges) - set(g.edges)))
    stage_log.append({"stage": 0, "copies": 0, "union_certified": True,
                      "member_floppy": [], "new_vertices": len(g.vertices),
                      "extension_backtracks": backtracks})

    for stage in range(1, spec.stages):
        copies = {}
        stage_targets = []
        deferred = []
        skipped = []
        for x in f_full.vertices:
            for ci, (cls, uw, tmpl) in enumerate(templates):
                deficient = _deficient_radii(f_full, x, cls, uw,
                                             spec.denom_bound)
                if not deficient:
                    continue
                sphere = _class_sphere(f_full, x, cls)
                glue = frozenset([x] + [y for y, _ in sphere])
                key = (glue, ci)
                if key not in copies:
                    positions = _lattice_positions(f_full, x, sphere, cls.r, tmpl)
                    if positions is None:
                        skipped.append((x, ci,
                                        "sphere not placeable in the copy lattice"))
                        continue
                    copies[key] = (_make_copy(tmpl, cls, stage, len(copies),
                                              positions), positions)
                # the shared copy completes a radius only when both lattice
                # neighbours of x at that offset exist in the window
                _, positions = copies[key]
                units = set(tmpl.unit_of.values())
                px = positions[x]
                covered = [n for n in deficient
                           if px + n in units and px - n in units]
                if covered:
                    stage_targets.append((x, ci, covered))
                rest = [n for n in deficient if n not in covered]
                if rest:
                    deferred.append((x, ci, rest))
        ordered = [mu for mu, _ in copies.values()]
        targets_seen.extend(stage_targets)
        if not ordered:
            stage_log.append({"stage": stage, "copies": 0, "targets": stage_targets,
                              "deferred": deferred, "skipped": skipped,
                              "union_certified": True, "member_floppy": [],
                              "new_vertices": 0, "extension_backtracks": 0})
            continue
        union, report = floppy_union(f_full, ordered)
        new_count = len(union.vertices) - len(f_full.vertices)
        g = union
        f_full, backtracks = _complete(g, spec, stage=stage)
        generic_log.extend(f_full.edges[p]
                           for p in sorted(set(f_full.edges) - set(g.edges)))
        stage_log.append({"stage": stage, "copies": len(ordered),
                          "targets": stage_targets, "deferred": deferred,
                          "skipped": skipped,
                          "union_certified": report.certified_floppy,
                          "member_floppy": report.member_floppy,
                          "lambdas": report.lambdas,
                          "new_vertices": new_count,
                          "extension_backtracks": backtracks})

    growth_ok = _sphere_growth_check(f_full, classes, targets_seen)
    if not growth_ok:
        raise BuildExhausted(spec.stages, None,
                             "a targeted sphere failed to reach two points")
    spheres, law_ok = _sphere_ledger(f_full, templates, spec.denom_bound)
    if not law_ok:
        raise BuildExhausted(spec.stages, None,
                             "two-point sphere law violated on a class radius")
    realized = sorted(set(f_full.edges.values()))
    cert = Certificate(seed=spec.seed, stages=stage_log, classes=cert_classes,
                       realized_distances=realized, generic_values=generic_log,
                       spheres=spheres, sphere_law_ok=law_ok, growth_ok=growth_ok)
    fragment = MetricFragment(f_full.vertices, f_full.edges)
    return fragment, cert


def _deficient_radii(f: GraphMetric, x: str, cls: RadiusClass, uw: Fraction,
                     denom_bound: int):
    """Windowed radii n·r (n in the unit monoid, 0 < n ≤ window) whose
    sphere around x has at most one member."""
    counts = {}
    for _, q in _class_sphere(f, x, cls):
        counts[q] = counts.get(q, 0) + 1
    return [n for n in cls.monoid.elements(uw, denom_bound)
            if n > 0 and counts.get(n, 0) <= 1]


def _lattice_positions(f: GraphMetric, x: str, sphere, r, tmpl: MuGraph):
    """Signed template units for the glue: the anchor sits at 0, each sphere
    member at ±(its unit ratio), signs chosen so that all pairwise distances
    match the lattice.  None when no consistent placement exists."""
    units = set(tmpl.unit_of.values())
    pos = {x: Fraction(0)}
    for y, q in sorted(sphere):
        picks = []
        for s in ((q,) if len(pos) == 1 else (q, -q)):
            if s not in units:
                continue
            if all(_matches(f, y, z, abs(s - pz), r) for z, pz in pos.items()):
                picks.append(s)
        if not picks:
            return None
        pos[y] = picks[0]
    return pos


def _matches(f: GraphMetric, y: str, z: str, expected_units: Fraction, r) -> bool:
    q = f.edge_value(y, z).ratio_to(r) if y != z else Fraction(0)
    return q == expected_units


def _make_copy(tmpl: MuGraph, cls: RadiusClass, stage: int, idx: int,
               positions: dict):
    """An isomorphic, rescaled copy of the class template: glue points land
    on their lattice positions, everything else is fresh."""
    by_unit = {t: name for name, t in positions.items()}
    rename = {}
    for tid in tmpl.vertices:
        t = tmpl.unit_of[tid]
        rename[tid] = by_unit.get(t, f"s{stage}c{idx}t{tid}")
    return ScaledMu(tmpl, cls.r, rename)


def _sphere_growth_check(f: GraphMetric, classes, targets) -> bool:
    """Every (point, radius) pair that received a copy must end with a
    complete two-point sphere."""
    for x, ci, radii in targets:
        cls = classes[ci]
        counts = {}
        for _, q in _class_sphere(f, x, cls):
            counts[q] = counts.get(q, 0) + 1
        if any(counts.get(n, 0) != 2 for n in radii):
            return False
    return True


def _complete(g, spec: BuildSpec, stage: int):
    policy = ExtensionPolicy(seed=spec.seed + 7919 * stage)
    try:
        result = extend_to_full(g, policy)
    except ExtensionExhausted as exc:
        raise BuildExhausted(stage, exc.pair,
                             f"extension budget spent ({exc.backtracks})") from exc
    return result.full, result.backtracks


def _sphere_ledger(f: GraphMetric, templates, denom_bound: int):
    """Nonempty spheres at every windowed class radius on the final object.
    A deficient sphere is recorded (a later stage would complete it); more
    than two members, or a complete pair at the wrong mutual distance, is a
    law violation."""
    ledger = []
    ok = True
    for ci, (cls, uw, _) in enumerate(templates):
        radii = [n for n in cls.monoid.elements(uw, denom_bound) if n > 0]
        for x in f.vertices:
            by_unit = {}
            for y, q in _class_sphere(f, x, cls):
                by_unit.setdefault(q, []).append(y)
            for n in radii:
                members = sorted(by_unit.get(n, ()))
                if not members:
                    continue
                entry = {"center": x, "class": ci, "unit": n,
                         "radius": cls.r * n, "members": members,
                         "complete": len(members) == 2}
                if len(members) == 2:
                    u, v = members
                    entry["diameter_ok"] = (f.edge_value(u, v) == cls.r * (2 * n))
                    ok = ok and entry["diameter_ok"]
                ok = ok and len(members) <= 2
                ledger.append(entry)
    return ledger, ok


# ---------------------------------------------------------------------------
# independent verification
# ---------------------------------------------------------------------------


def verify_certificate(fragment: MetricFragment, spec: BuildSpec,
                       cert: Certificate) -> dict:
    """Recheck a build output without rerunning the build.

    Checks the metric and sphere axioms, that the realized distance set
    matches the certificate and decomposes into class values plus logged
    generics, and that each class's realized window is contained in its
    monoid and closed under in-window addition.
    """
    report = {}
    frag_report = verify_fragment(fragment)
    report["metric_ok"] = frag_report.metric_ok
    report["banakh_consistent"] = frag_report.banakh_consistent
    report["violations"] = frag_report.violations

    classes = spec.canonical_classes()
    realized = sorted(set(v for _, v in fragment.pairs()))
    report["distances_match_cert"] = realized == sorted(set(cert.realized_distances))

    generics = set(cert.generic_values)
    stray = []
    for v in realized:
        if v in generics:
            continue
        if any((q := v.ratio_to(cls.r)) is not None and q > 0
               and cls.monoid.member(q) for cls in classes):
            continue
        stray.append(v)
    report["realized_subset_ok"] = not stray
    report["stray_distances"] = stray

    class_windows_ok = True
    class_floppy_ok = True
    for cls in classes:
        qs = set()
        for v in realized:
            q = v.ratio_to(cls.r)
            if q is not None and q > 0:
                qs.add(q)
        if not all(cls.monoid.member(q) for q in qs):
            class_windows_ok = False
        top = max(qs, default=Fraction(0))
        for q1 in qs:
            for q2 in qs:
                if q1 + q2 <= top and q1 + q2 not in qs:
                    class_windows_ok = False
        if qs:
            verdict, _ = is_floppy(MonoidDesc.fingen(sorted(qs)))
            class_floppy_ok = class_floppy_ok and verdict
    report["class_windows_ok"] = class_windows_ok
    report["class_floppy_ok"] = class_floppy_ok

    ledger_ok = True
    for entry in cert.spheres:
        center, radius = entry["center"], entry["radius"]
        members = sorted(y for y in fragment.points
                         if y != center and fragment.distance(center, y) == radius)
        if members != list(entry["members"]) or len(members) > 2:
            ledger_ok = False
        if len(members) == 2:
            u, v = members
            if fragment.distance(u, v) != radius * 2:
                ledger_ok = False
    report["sphere_ledger_ok"] = ledger_ok

    report["all_ok"] = all((report["metric_ok"], report["banakh_consistent"],
                            report["distances_match_cert"],
                            report["realized_subset_ok"], class_windows_ok,
                            class_floppy_ok, ledger_ok))
    return report
