"""Two-point-sphere geometry over an abstract sphere oracle.

The central axiom: every nonempty sphere S(c;r) holds exactly two points,
and those two points lie at mutual distance 2r.  Everything in this module
is a consequence machine for that axiom — unique point location from two
anchors, discrete lines, ray orientation, segment construction, sphere and
hypersphere parametrizations — plus exact verification of finite metric
fragments and real-line embeddability.

Geometry runs against :class:`SphereOracle`, which abstracts both the point
set and the *value algebra* of distances: values only ever need equality,
rational-ratio testing, and scaling by rationals.  That keeps one
implementation of each construction working over integer points, exact
metric fragments, and the symbolic group coordinates of
:mod:`banakh.banakh_group`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .monoid_algebra import MonoidDesc
from .values import SurdValue, ZERO, rat

__all__ = [
    "MetricFragment",
    "FragmentReport",
    "SphereOracle",
    "ZLineOracle",
    "FragmentOracle",
    "Orientation",
    "SphereDeficiency",
    "NoSuchRadius",
    "AmbiguityViolation",
    "BanakhLawViolation",
    "EmbedResult",
    "verify_fragment",
    "real_line_banakh_check",
    "gps_locate",
    "discrete_line",
    "orientation",
    "segment_construct",
    "split_segment",
    "directed_point",
    "zr_sphere_map",
    "hypersphere_map",
    "embed_in_real_line",
]


# ---------------------------------------------------------------------------
# fragments
# ---------------------------------------------------------------------------


class MetricFragment:
    """Finite point set with a full, exact distance table.

    The constructor validates shape only (full symmetric table, zero
    diagonal, values coercible); the metric and two-point-sphere axioms are
    checked by :func:`verify_fragment`, never assumed.
    """

    def __init__(self, points, dist):
        given = list(points)
        self.points = tuple(sorted(set(given)))
        if len(self.points) != len(given):
            raise ValueError("duplicate point ids")
        self._dist = {}
        for (x, y), v in dict(dist).items():
            if x not in self.points or y not in self.points:
                raise ValueError(f"distance entry for unknown point ({x!r},{y!r})")
            if x == y:
                raise ValueError("diagonal entries must be omitted")
            v = v if isinstance(v, SurdValue) else SurdValue.of(v)
            key = (x, y) if x < y else (y, x)
            if key in self._dist and self._dist[key] != v:
                raise ValueError(f"conflicting distances for {key}")
            self._dist[key] = v
        want = len(self.points) * (len(self.points) - 1) // 2
        if len(self._dist) != want:
            raise ValueError(f"distance table incomplete: {len(self._dist)}/{want}")

    def distance(self, x, y) -> SurdValue:
        if x == y:
            if x not in self.points:
                raise KeyError(f"unknown point {x!r}")
            return ZERO
        return self._dist[(x, y) if x < y else (y, x)]

    def pairs(self):
        return self._dist.items()

    def __len__(self):
        return len(self.points)


@dataclass
class FragmentReport:
    metric_ok: bool
    banakh_consistent: bool
    incomplete_spheres: list
    violations: list


def verify_fragment(f: MetricFragment) -> FragmentReport:
    """Exact check of the metric axioms and the two-point-sphere law.

    A sphere with one member is *incomplete*, not inconsistent: no finite
    table can realize both members of every sphere.  Violations are spheres
    with three or more members, or two-member spheres whose mutual distance
    differs from twice the radius, plus any metric-axiom failure.
    """
    violations = []
    metric_ok = True
    for (x, y), v in f.pairs():
        if not (v.sign() > 0):
            metric_ok = False
            violations.append({"kind": "identity", "points": [x, y],
                               "detail": "zero or negative distance"})
    for x, y, z in combinations(f.points, 3):
        dxy, dyz, dxz = f.distance(x, y), f.distance(y, z), f.distance(x, z)
        for a, b, c, names in (
                (dxy, dyz, dxz, (x, z, y)),
                (dxy, dxz, dyz, (y, z, x)),
                (dyz, dxz, dxy, (x, y, z))):
            if c > a + b:
                metric_ok = False
                violations.append({"kind": "triangle", "points": list(names)})
    incomplete = []
    banakh = True
    for c in f.points:
        buckets = {}
        for p in f.points:
            if p != c:
                buckets.setdefault(f.distance(c, p), []).append(p)
        for r, members in sorted(buckets.items(), key=lambda kv: kv[1]):
            if len(members) > 2:
                banakh = False
                violations.append({"kind": "sphere-size", "center": c,
                                   "radius": r, "members": members})
            elif len(members) == 2:
                u, v = members
                if f.distance(u, v) != 2 * r:
                    banakh = False
                    violations.append({"kind": "sphere-diameter", "center": c,
                                       "radius": r, "members": members})
            else:
                incomplete.append((c, r))
    return FragmentReport(metric_ok=metric_ok, banakh_consistent=banakh,
                          incomplete_spheres=incomplete, violations=violations)


def real_line_banakh_check(X, window_relative: bool = True):
    """For finite X ⊂ ℚ: is {x+y−z, x−y+z} ⊆ X for all x, y, z ∈ X?

    In window-relative mode, combinations falling outside [min X, max X] are
    ignored (a finite window of a line cannot contain them anyway).
    Returns (verdict, witness) with witness = (x, y, z, missing_value).
    """
    pts = sorted(set(rat(x) for x in X))
    S = set(pts)
    if not pts:
        return True, None
    lo, hi = pts[0], pts[-1]
    for x in pts:
        for y in pts:
            for z in pts:
                for c in (x + y - z, x - y + z):
                    if c in S:
                        continue
                    if window_relative and not (lo <= c <= hi):
                        continue
                    return False, (x, y, z, c)
    return True, None


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


class SphereDeficiency(RuntimeError):
    """The oracle could not supply a needed sphere member."""

    def __init__(self, center, radius):
        self.center = center
        self.radius = radius
        super().__init__(f"sphere at {center!r} radius {radius!r} is deficient")


class NoSuchRadius(RuntimeError):
    def __init__(self, center, radius):
        self.center = center
        self.radius = radius
        super().__init__(f"no point at distance {radius!r} from {center!r}")


class AmbiguityViolation(RuntimeError):
    """Two sphere members satisfied a condition that must pin down one."""


class BanakhLawViolation(RuntimeError):
    """The backing space contradicted the two-point-sphere law."""


class SphereOracle:
    """Interface: points with exact distances and at-most-two-point spheres.

    ``sphere(c, r)`` must return a deterministic-ordered tuple of length
    ≤ 2 (length 1 with member c when r is the zero value).  The value-algebra
    hooks below default to SurdValue semantics; oracles with other distance
    values override them.
    """

    def dist(self, x, y):
        raise NotImplementedError

    def sphere(self, c, r):
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__

    # value algebra -------------------------------------------------------

    def value_scale(self, q, v):
        """q·v for rational q ≥ 0."""
        return v * rat(q)

    def value_ratio(self, v, w) -> Optional[Fraction]:
        """q with v = q·w, or None when no rational ratio exists."""
        return v.ratio_to(w)

    def value_is_zero(self, v) -> bool:
        return v.is_zero()


class ZLineOracle(SphereOracle):
    """The integers with |x − y|: the canonical one-dimensional example."""

    def dist(self, x, y):
        return SurdValue(abs(x - y))

    def sphere(self, c, r):
        if not r.is_rational():
            return ()
        k = r.as_rational()
        if k.denominator != 1:
            return ()
        if k < 0:
            raise ValueError("negative radius")
        if k == 0:
            return (c,)
        return (c - int(k), c + int(k))

    def describe(self):
        return "integer line"


class FragmentOracle(SphereOracle):
    """Spheres read off a finite exact distance table."""

    def __init__(self, fragment: MetricFragment):
        self.fragment = fragment

    def dist(self, x, y):
        return self.fragment.distance(x, y)

    def sphere(self, c, r):
        if r.is_zero():
            return (c,)
        return tuple(p for p in self.fragment.points
                     if p != c and self.fragment.distance(c, p) == r)

    def describe(self):
        return f"fragment({len(self.fragment)} points)"


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


class Orientation(enum.Enum):
    PARALLEL = "parallel"
    ANTIPARALLEL = "antiparallel"
    INCOMPARABLE = "incomparable"


def gps_locate(o: SphereOracle, a, b, ra, rb):
    """The unique point at distance ra from a and rb from b, or None.

    Two distinct anchors determine any point: a two-point intersection
    contradicts the sphere law and raises BanakhLawViolation.
    """
    if a == b:
        raise ValueError("anchors must be distinct")
    sa = o.sphere(a, ra)
    sb = o.sphere(b, rb)
    inter = [p for p in sa if p in sb]
    if len(inter) > 1:
        raise BanakhLawViolation(
            f"spheres at {a!r},{b!r} intersect in {len(inter)} points: {inter}")
    return inter[0] if inter else None


def _ray(o: SphereOracle, a, b, n: int, r, two_r):
    """Points a = x_0, b = x_1, ..., x_n stepping away from a.

    Each step selects the sphere member at distance 2r from the predecessor
    of the current point; that member is unique by the sphere law.
    """
    pts = [a, b]
    while len(pts) <= n:
        prev, cur = pts[-2], pts[-1]
        members = [m for m in o.sphere(cur, r) if o.dist(m, prev) == two_r]
        if len(members) > 1:
            raise AmbiguityViolation(
                f"two continuations past {cur!r}: {members}")
        if not members:
            raise SphereDeficiency(cur, r)
        pts.append(members[0])
    return pts


def discrete_line(o: SphereOracle, a, b, n: int):
    """The 2n+1 points x_{−n}..x_n with x_0 = a, x_1 = b and
    dist(x_i, x_j) = |i−j|·dist(a,b), built by iterated sphere steps."""
    if a == b:
        raise ValueError("need two distinct points")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [a]
    r = o.dist(a, b)
    two_r = o.value_scale(2, r)
    forward = _ray(o, a, b, n, r, two_r)
    backward = _ray(o, b, a, n + 1, r, two_r)  # b, a, x_{-1}, ..., x_{-n}
    return list(reversed(backward[2:])) + forward


def orientation(o: SphereOracle, origin, x, y) -> Orientation:
    """Same-ray / opposite-ray relation of x and y as seen from origin.

    Decidable only when dist(origin,x)/dist(origin,y) is rational: then the
    two rays are walked out to the least common length and compared.  An
    irrational ratio is Incomparable by construction.
    """
    if x == origin or y == origin:
        raise ValueError("origin must differ from both points")
    dx = o.dist(origin, x)
    dy = o.dist(origin, y)
    q = o.value_ratio(dx, dy)
    if q is None:
        return Orientation.INCOMPARABLE
    if x == y:
        return Orientation.PARALLEL
    num, den = q.numerator, q.denominator  # common length = den·dx = num·dy
    ex = _ray(o, origin, x, den, dx, o.value_scale(2, dx))[den]
    ey = _ray(o, origin, y, num, dy, o.value_scale(2, dy))[num]
    return Orientation.PARALLEL if ex == ey else Orientation.ANTIPARALLEL


def segment_construct(o: SphereOracle, x, y, r):
    """The unique z with dist(y,z) = r and dist(x,z) = dist(x,y) + r."""
    if o.value_is_zero(r):
        return y
    dxy = o.dist(x, y)
    q = o.value_ratio(r, dxy)
    if q is None:
        raise ValueError("radius must be a rational multiple of dist(x,y)")
    members = o.sphere(y, r)
    if not members:
        raise NoSuchRadius(y, r)
    expected = o.value_scale(1 + q, dxy)
    hits = [m for m in members if o.dist(x, m) == expected]
    if len(hits) > 1:
        raise AmbiguityViolation(f"both members of sphere({y!r}) are additive")
    if not hits:
        raise SphereDeficiency(y, r)
    return hits[0]


def split_segment(o: SphereOracle, x, z, a, b):
    """The point y between x and z with dist(x,y) = a, dist(y,z) = b."""
    dxz = o.dist(x, z)
    if o.value_is_zero(a):
        if dxz != b:
            raise ValueError("a + b must equal dist(x,z)")
        return x
    if o.value_is_zero(b):
        if dxz != a:
            raise ValueError("a + b must equal dist(x,z)")
        return z
    qa = o.value_ratio(a, dxz)
    qb = o.value_ratio(b, dxz)
    if qa is None or qb is None or qa + qb != 1:
        raise ValueError("need a + b = dist(x,z) with rational ratios")
    members = o.sphere(x, a)
    if not members:
        raise NoSuchRadius(x, a)
    hits = [m for m in members if o.dist(m, z) == b]
    if len(hits) > 1:
        raise AmbiguityViolation("both sphere members split the segment")
    if not hits:
        raise SphereDeficiency(x, a)
    return hits[0]


def _oriented_point(o: SphereOracle, x, ref, r, sense: Orientation):
    """Member of sphere(x, r) whose ray from x has the given sense vs ref.

    Fast path: with q = r/dist(x,ref), a member at distance exactly
    |q−1|·dist(x,ref) from ref is certifiably the parallel one — the
    antiparallel member lies at least (q+1)·dist(x,ref) away, strictly more.
    (Only the parallel side is certified this way: the parallel member's
    distance has no usable upper bound, so matching (q+1)·d does not certify
    antiparallelity.)  Falls back to walking rays out to a common length.
    """
    dref = o.dist(x, ref)
    q = o.value_ratio(r, dref)
    if q is None:
        raise ValueError("radius must be a rational multiple of dist(x,ref)")
    if q <= 0:
        raise ValueError("radius must be positive")
    members = o.sphere(x, r)
    if not members:
        raise NoSuchRadius(x, r)
    expected_par = o.value_scale(abs(q - 1), dref)
    par_hits = [m for m in members if o.dist(m, ref) == expected_par]
    if len(par_hits) == 1:
        if sense is Orientation.PARALLEL:
            return par_hits[0]
        rest = [m for m in members if m != par_hits[0]]
        if rest:
            return rest[0]
        raise SphereDeficiency(x, r)
    oriented = [m for m in members
                if m != x and orientation(o, x, m, ref) is sense]
    if len(oriented) > 1:
        raise AmbiguityViolation(f"two {sense.value} members at {x!r}")
    if not oriented:
        raise SphereDeficiency(x, r)
    return oriented[0]


def directed_point(o: SphereOracle, x, y, r):
    """The unique member of sphere(x, r) on the ray from x through y."""
    return _oriented_point(o, x, y, r, Orientation.PARALLEL)


def zr_sphere_map(o: SphereOracle, a, r, n: int) -> dict:
    """The isometric parametrization k ↦ ℓ(k·r) of the ℤr-hypersphere at a,
    for k ∈ [−n, n]; ℓ(0) = a and ℓ(r) is the first sphere member in the
    oracle's deterministic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return {0: a}
    members = o.sphere(a, r)
    if not members:
        raise NoSuchRadius(a, r)
    line = discrete_line(o, a, members[0], n)
    return {k: line[n + k] for k in range(-n, n + 1)}


@dataclass
class HypersphereReport:
    """Per-point construction data and per-pair bound verification."""
    r_is_member: bool
    points: dict          # t (units of r) -> {"u": Fraction, "v": Fraction}
    skipped: list         # [(t, reason)]
    pairs: list           # one entry per unordered constructed pair


def hypersphere_map(o: SphereOracle, a, b, window, denom_bound: int = 64,
                    monoid: Optional[MonoidDesc] = None):
    """Parametrize the hypersphere through a and b over (N−N) ∩ [−w, w].

    N is the realized-distance monoid at r = dist(a,b), in units of r
    (so 1 ∈ N), supplied by the caller; integers (N = ℤ₊) by default.
    ℓ(t) is built by going out along u·r toward b and back v·r toward a,
    where u is minimal in N with v = u − t ∈ N.  Any admissible u yields the
    same point (two-anchor uniqueness), so construction failures at the
    window edge fall through to the next u.

    Returns (mapping t ↦ point, HypersphereReport).  The report checks, for
    every constructed pair, |s−t|·r ≤ d ≤ (|s−t| + 2·inf-additive)·r and the
    equivalence d = |s−t|·r ⇔ |s−t| ∈ N.
    """
    if a == b:
        raise ValueError("need two distinct points")
    N = monoid if monoid is not None else MonoidDesc.fingen([1])
    if not N.member(1):
        raise ValueError("unit monoid must contain 1 (r is realized)")
    r = o.dist(a, b)
    window = rat(window)
    mapping = {}
    report_points = {}
    skipped = []
    u_cap = 2 * window + 2 * (N.conductor() or 0) + 4
    u_candidates = [u for u in N.elements(u_cap, denom_bound)]
    for t in N.diff_elements(window, denom_bound):
        point, used = None, None
        for u in u_candidates:
            v = u - t
            if v < 0 or not N.member(v):
                continue
            try:
                if u == 0:
                    x = a
                else:
                    x = directed_point(o, a, b, o.value_scale(u, r))
                if v == 0:
                    point = x
                elif u == 0:
                    point = _oriented_point(o, a, b, o.value_scale(v, r),
                                            Orientation.ANTIPARALLEL)
                else:
                    point = directed_point(o, x, a, o.value_scale(v, r))
                used = (u, v)
                break
            except (SphereDeficiency, NoSuchRadius):
                continue
        if point is None:
            skipped.append((t, "window edge"))
            continue
        mapping[t] = point
        report_points[t] = {"u": used[0], "v": used[1]}
    pairs = []
    ts = sorted(mapping)
    for s, t in combinations(ts, 2):
        delta = abs(t - s)
        d = o.dist(mapping[s], mapping[t])
        lower = o.value_scale(delta, r)
        extra = N.min_add(delta)
        entry = {"s": s, "t": t, "delta": delta,
                 "upper_verified": extra is not None,
                 "lower_ok": None, "upper_ok": None}
        try:
            entry["lower_ok"] = not (d < lower)
            if extra is not None:
                entry["upper_ok"] = not (o.value_scale(delta + 2 * extra, r) < d)
        except TypeError:
            pass  # unordered value algebra: bounds not comparable
        entry["tight"] = (d == lower)
        entry["member"] = N.member(delta)
        entry["equivalence_ok"] = entry["tight"] == entry["member"]
        pairs.append(entry)
    report = HypersphereReport(r_is_member=N.member(1), points=report_points,
                               skipped=skipped, pairs=pairs)
    return mapping, report


# ---------------------------------------------------------------------------
# real-line embedding
# ---------------------------------------------------------------------------


@dataclass
class EmbedResult:
    coords: Optional[dict] = None
    obstruction: Optional[tuple] = None

    @property
    def embeddable(self) -> bool:
        return self.coords is not None


def _trichotomy_triple(f: MetricFragment):
    """A 3-subset where no distance equals the sum of the other two."""
    for x, y, z in combinations(f.points, 3):
        a, b, c = f.distance(y, z), f.distance(x, z), f.distance(x, y)
        if a != b + c and b != a + c and c != a + b:
            return (x, y, z)
    return None


def embed_in_real_line(f: MetricFragment) -> EmbedResult:
    """Exact coordinates on ℝ realizing the fragment, or a witness that
    none exist: a triple violating the three-point collinearity criterion,
    or (only possible at exactly 4 points) the full 4-point witness."""
    pts = f.points
    if len(pts) <= 1:
        return EmbedResult(coords={p: ZERO for p in pts})
    if len(pts) == 4:
        return _embed_four(f)
    p0, p1 = pts[0], pts[1]
    d01 = f.distance(p0, p1)
    coords = {p0: ZERO, p1: d01}
    for q in pts[2:]:
        d0, d1 = f.distance(p0, q), f.distance(p1, q)
        signs = [s for s in (1, -1) if abs(s * d0 - d01) == d1]
        if not signs:
            return EmbedResult(obstruction=(p0, p1, q))
        coords[q] = d0 if signs[0] == 1 else -d0
    for u, v in combinations(pts, 2):
        if abs(coords[u] - coords[v]) != f.distance(u, v):
            bad = _trichotomy_triple(f)
            if bad is None:
                # cannot happen away from 4 points; defensive
                return EmbedResult(obstruction=tuple(pts))
            return EmbedResult(obstruction=bad)
    return EmbedResult(coords=coords)


def _embed_four(f: MetricFragment) -> EmbedResult:
    """Exhaustive sign search: the three-point criterion is not valid at
    exactly four points, so try all placements before giving up."""
    pts = f.points
    p0 = pts[0]
    for anchor in pts[1:]:
        d0a = f.distance(p0, anchor)
        rest = [p for p in pts if p not in (p0, anchor)]
        for s1 in (1, -1):
            for s2 in (1, -1):
                coords = {p0: ZERO, anchor: d0a,
                          rest[0]: f.distance(p0, rest[0]) * s1,
                          rest[1]: f.distance(p0, rest[1]) * s2}
                if all(abs(coords[u] - coords[v]) == f.distance(u, v)
                       for u, v in combinations(pts, 2)):
                    return EmbedResult(coords=coords)
    bad = _trichotomy_triple(f)
    return EmbedResult(obstruction=bad if bad is not None else tuple(pts))
