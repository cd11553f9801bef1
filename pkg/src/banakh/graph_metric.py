"""Exact graph-pseudometric calculus.

A graph pseudometric is a positive edge-weight function on a connected graph
whose every edge value equals the shortest-path value between its endpoints.
Two derived quantities drive everything here:

* ``hat``   -- the shortest-path value between any two vertices, and
* ``check`` -- the largest lower bound forced on a pair by some edge:
               max over edges ab (taken in both orientations) of
               max(0, d(ab) - hat(a,x) - hat(b,y)).

A pseudometric is *floppy* when check < hat strictly on every non-edge pair;
floppy graphs extend to full metrics with room to choose every missing value
from a dense family.  ``build_mu`` makes the canonical difference graph of a
monoid, ``extend_to_full`` completes floppy graphs with certified-generic
surd values, and ``floppy_union`` glues fragments with positivity
certificates.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Callable, Optional

from .monoid_algebra import MonoidDesc
from .values import SurdValue, ZERO, primes_from, rat, rational_between, format_rat

__all__ = [
    "GraphMetric",
    "MuGraph",
    "ScaledMu",
    "ExtensionPolicy",
    "ExtensionResult",
    "ExtensionExhausted",
    "ConditionViolation",
    "UnionReport",
    "validate_pseudometric",
    "hat",
    "check",
    "is_floppy_graph",
    "build_mu",
    "extend_to_full",
    "floppy_union",
]


def _pair(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


class GraphMetric:
    """Connected graph with exact positive edge values."""

    def __init__(self, vertices, edges):
        """edges: mapping from 2-tuples of vertex ids to positive values."""
        self.vertices = tuple(sorted(set(vertices)))
        vertex_set = set(self.vertices)
        self.edges = {}
        for (u, v), w in dict(edges).items():
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in vertex_set or v not in vertex_set:
                raise ValueError(f"edge ({u!r},{v!r}) uses an unknown vertex")
            w = w if isinstance(w, SurdValue) else SurdValue.of(w)
            if not w.sign() > 0:
                raise ValueError(f"edge ({u!r},{v!r}) has nonpositive value {w}")
            key = _pair(u, v)
            if key in self.edges and self.edges[key] != w:
                raise ValueError(f"conflicting values for edge {key}")
            self.edges[key] = w
        self.adj = {v: [] for v in self.vertices}
        for (u, v), w in self.edges.items():
            self.adj[u].append((v, w))
            self.adj[v].append((u, w))
        if not self._connected():
            raise ValueError("graph is not connected")

    def _connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for nxt, _ in self.adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(self.vertices)

    def is_full(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2

    def edge_value(self, u: str, v: str) -> Optional[SurdValue]:
        return self.edges.get(_pair(u, v))

    # -- shortest paths ----------------------------------------------------

    def hat_path(self, x: str, y: str) -> SurdValue:
        """Shortest-path value by exact Dijkstra."""
        return self.distances_from(x)[y]

    def distances_from(self, x: str) -> dict:
        if x not in self.adj:
            raise KeyError(f"unknown vertex {x!r}")
        dist = {x: ZERO}
        done = set()
        heap = [(ZERO, x)]
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in self.adj[u]:
                if v in done:
                    continue
                cand = d + w
                if v not in dist or cand < dist[v]:
                    dist[v] = cand
                    heapq.heappush(heap, (cand, v))
        return dist

    def hat(self, x: str, y: str) -> SurdValue:
        return self.hat_path(x, y)

    def check(self, x: str, y: str) -> SurdValue:
        """Largest edge-forced lower bound for the pair (both orientations)."""
        if x not in self.adj or y not in self.adj:
            raise KeyError("unknown vertex")
        from_x = self.distances_from(x)
        from_y = self.distances_from(y)
        best = ZERO
        for (a, b), w in self.edges.items():
            for ha, hb in ((from_x[a], from_y[b]), (from_x[b], from_y[a])):
                cand = w - ha - hb
                if best < cand:
                    best = cand
        return best


class MuGraph(GraphMetric):
    """Windowed difference graph of a monoid M, scaled by a radius.

    Vertices are the elements of (M - M) scaled by r inside [-window, window];
    two vertices are joined exactly when their distance lies in r*(M\\{0}),
    with that distance as the edge value.  The underlying object is infinite;
    ``hat`` therefore uses the closed difference formula
    |x-y| + 2*inf{v in M : v + |x-y| in M}, which is the true value on the
    infinite graph, while ``hat_path`` remains the windowed search
    (they agree given enough window slack).
    """

    def __init__(self, monoid: MonoidDesc, r, window, denom_bound: int = 64):
        self.monoid = monoid
        self.r = rat(r)
        self.window = rat(window)
        self.denom_bound = denom_bound
        if self.r <= 0:
            raise ValueError("radius must be positive")
        units = monoid.diff_elements(self.window / self.r, denom_bound)
        nonzero = [t for t in monoid.elements(2 * self.window / self.r, denom_bound)
                   if t > 0]
        if not nonzero:
            raise ValueError("monoid has no nonzero elements in the window")
        self.value_of = {format_rat(t * self.r): t * self.r for t in units}
        self.unit_of = {format_rat(t * self.r): t for t in units}
        edges = {}
        for ta, tb in combinations(units, 2):
            if monoid.member(abs(ta - tb)):
                edges[(format_rat(ta * self.r), format_rat(tb * self.r))] = \
                    SurdValue(abs(ta - tb) * self.r)
        super().__init__(self.value_of, edges)
        self._hat_units_cache = {}

    def _hat_units(self, delta: Fraction) -> Fraction:
        delta = abs(delta)
        if delta not in self._hat_units_cache:
            extra = self.monoid.min_add(delta)
            if extra is None:
                raise ValueError(f"{delta} is outside the difference set")
            self._hat_units_cache[delta] = delta + 2 * extra
        return self._hat_units_cache[delta]

    def unit_of_pair(self, u: str, v: str) -> Fraction:
        return abs(self.unit_of[u] - self.unit_of[v])

    def hat(self, x: str, y: str) -> SurdValue:
        return SurdValue(self._hat_units(self.unit_of[x] - self.unit_of[y]) * self.r)

    def check(self, x: str, y: str) -> SurdValue:
        return SurdValue(self._check_units(x, y) * self.r)

    def _check_units(self, x: str, y: str) -> Fraction:
        tx, ty = self.unit_of[x], self.unit_of[y]
        best = Fraction(0)
        for (a, b), _ in self.edges.items():
            ta, tb = self.unit_of[a], self.unit_of[b]
            w = abs(ta - tb)
            for ha, hb in ((self._hat_units(ta - tx), self._hat_units(tb - ty)),
                           (self._hat_units(tb - tx), self._hat_units(ta - ty))):
                cand = w - ha - hb
                if cand > best:
                    best = cand
        return best


class ScaledMu(GraphMetric):
    """A difference graph rescaled by a positive (possibly irrational) factor
    and relabeled.  Vertices carry new names; edge values and the closed
    hat/check formulas are the template's, multiplied by the scale.  This is
    how copies with irrational radii attach to a build without leaving exact
    arithmetic: the template stays rational, the scale carries the surd.
    """

    def __init__(self, template: MuGraph, scale, rename: dict):
        if not isinstance(scale, SurdValue):
            scale = SurdValue.of(scale)
        if not scale.sign() > 0:
            raise ValueError("scale must be positive")
        if set(rename) != set(template.vertices):
            raise ValueError("rename must cover exactly the template vertices")
        if len(set(rename.values())) != len(rename):
            raise ValueError("rename must be injective")
        self.template = template
        self.scale = scale
        self._back = {new: old for old, new in rename.items()}
        edges = {(rename[u], rename[v]): scale * template.unit_of_pair(u, v)
                 for (u, v) in template.edges}
        super().__init__(rename.values(), edges)

    def hat(self, x: str, y: str) -> SurdValue:
        t = self.template
        return self.scale * t._hat_units(t.unit_of[self._back[x]]
                                         - t.unit_of[self._back[y]])

    def check(self, x: str, y: str) -> SurdValue:
        return self.scale * self.template._check_units(self._back[x],
                                                       self._back[y])


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def validate_pseudometric(g: GraphMetric):
    """True iff every edge value equals the shortest-path value (path
    semantics, also for difference graphs).  Returns (verdict, witness)."""
    for x in g.vertices:
        dist = GraphMetric.distances_from(g, x)
        for v, w in g.adj[x]:
            if dist[v] != w:
                return False, (x, v)
    return True, None


def hat(g: GraphMetric, x: str, y: str) -> SurdValue:
    return g.hat(x, y)


def check(g: GraphMetric, x: str, y: str) -> SurdValue:
    return g.check(x, y)


def is_floppy_graph(g: GraphMetric):
    """True iff check < hat strictly at every non-edge pair.

    Full graphs are floppy vacuously.  Returns (verdict, witness_pair)."""
    for u, v in combinations(g.vertices, 2):
        if _pair(u, v) in g.edges:
            continue
        if not g.check(u, v) < g.hat(u, v):
            return False, (u, v)
    return True, None


def build_mu(monoid: MonoidDesc, r, window, denom_bound: int = 64) -> MuGraph:
    """The canonical difference graph of a monoid, windowed and scaled by r."""
    return MuGraph(monoid, r, window, denom_bound)


# ---------------------------------------------------------------------------
# generic completion
# ---------------------------------------------------------------------------


class ExtensionExhausted(RuntimeError):
    """Completion ran out of backtracking budget; .pair holds the blocker."""

    def __init__(self, pair, backtracks):
        self.pair = pair
        self.backtracks = backtracks
        super().__init__(f"no admissible value for pair {pair} "
                         f"after {backtracks} backtracks")


@dataclass
class ExtensionPolicy:
    """How to choose values for missing edges.

    The default dense family draws c + eps*sqrt(p) with a fresh prime p per
    assignment, c and eps rational, certified to lie strictly inside the
    open admissible interval.  A custom ``dense_family`` callable receives
    (pair, lo, hi, rng, fresh_prime) and must return a value in (lo, hi).
    """
    seed: int
    max_backtracks: int = 1000
    dense_family: Optional[Callable] = None


@dataclass
class ExtensionResult:
    full: GraphMetric
    assignments: dict
    intervals: dict
    backtracks: int


def _rational_floor_positive(value: SurdValue) -> Fraction:
    """A positive rational certified below a positive value."""
    scale = 8
    while True:
        lo, _ = value.brackets(scale)
        if lo > 0:
            return lo
        scale *= 2


def _default_sample(lo: SurdValue, hi: SurdValue, rng: random.Random,
                    prime: int) -> SurdValue:
    """c + eps*sqrt(prime) strictly inside (lo, hi), c random inside the
    certified rational core of the interval."""
    core_lo = rational_between(lo, hi)
    core_hi = rational_between(SurdValue(core_lo), hi)
    # a seeded rational in [core_lo, core_hi]
    c = core_lo + (core_hi - core_lo) * Fraction(rng.randrange(0, 256), 256)
    gap = min(SurdValue(c) - lo, hi - SurdValue(c))
    margin = _rational_floor_positive(gap)
    eps = margin / (2 * (isqrt(prime) + 1))
    return SurdValue(c, {prime: eps})


def extend_to_full(g: GraphMetric, policy: ExtensionPolicy) -> ExtensionResult:
    """Complete a floppy graph metric to a full metric on the same vertices.

    Missing pairs are processed in lexicographic order; each value is drawn
    from the dense family strictly inside the open interval
    (check, hat) of the pair *at assignment time*.  If a later pair closes up
    (check = hat), the most recent assignment is re-sampled; the budget is
    ``policy.max_backtracks``.  Fresh surd primes make assigned values
    pairwise distinct and rationally unrelated to everything already present.
    """
    verts = list(g.vertices)
    missing = [p for p in combinations(verts, 2) if p not in g.edges]

    used_primes = set()
    for w in g.edges.values():
        used_primes |= w.primes()
    prime_source = (p for p in primes_from(2) if p not in used_primes)

    rng = random.Random(policy.seed)
    sampler = policy.dense_family or (
        lambda pair, lo, hi, r, prime: _default_sample(lo, hi, r, prime))

    base_dist = _all_pairs(g)

    assignments: dict = {}
    intervals: dict = {}
    order: list = []
    dist = dict(base_dist)
    live_edges = dict(g.edges)
    backtracks = 0
    idx = 0
    while idx < len(missing):
        pair = missing[idx]
        lo = _check_from(dist, live_edges, pair)
        hi = dist[pair]
        if lo < hi:
            value = sampler(pair, lo, hi, rng, next(prime_source))
            if not (lo < value < hi):
                raise RuntimeError(f"sampled value {value} escaped ({lo}, {hi})")
            assignments[pair] = value
            intervals[pair] = (lo, hi)
            order.append(pair)
            live_edges[pair] = value
            _shrink(dist, verts, pair, value)
            idx += 1
            continue
        # closed interval: re-sample the most recent assignment
        backtracks += 1
        if not order or backtracks > policy.max_backtracks:
            raise ExtensionExhausted(pair, backtracks)
        dropped = order.pop()
        del assignments[dropped], intervals[dropped], live_edges[dropped]
        dist = dict(base_dist)
        for done in order:
            _shrink(dist, verts, done, assignments[done])
        idx = missing.index(dropped)

    edges = dict(g.edges)
    edges.update(assignments)
    full = GraphMetric(verts, edges)
    ok, bad = validate_pseudometric(full)
    if not ok:
        raise RuntimeError(f"completed graph failed validation at {bad}")
    return ExtensionResult(full=full, assignments=assignments,
                           intervals=intervals, backtracks=backtracks)


def _all_pairs(g: GraphMetric) -> dict:
    dist = {}
    for x in g.vertices:
        from_x = GraphMetric.distances_from(g, x)
        for y, d in from_x.items():
            if x < y:
                dist[(x, y)] = d
    return dist


def _lookup(dist, u, v):
    return ZERO if u == v else dist[_pair(u, v)]


def _shrink(dist, verts, pair, w):
    """Relax all shortest paths through a newly added edge (u, v) = w."""
    u, v = pair
    for i, j in dist:
        through = min(_lookup(dist, i, u) + w + _lookup(dist, v, j),
                      _lookup(dist, i, v) + w + _lookup(dist, u, j))
        if through < dist[(i, j)]:
            dist[(i, j)] = through


def _check_from(dist, edges, pair) -> SurdValue:
    x, y = pair
    best = ZERO
    for (a, b), w in edges.items():
        for ha, hb in ((_lookup(dist, a, x), _lookup(dist, b, y)),
                       (_lookup(dist, b, x), _lookup(dist, a, y))):
            cand = w - ha - hb
            if best < cand:
                best = cand
    return best


# ---------------------------------------------------------------------------
# unions
# ---------------------------------------------------------------------------


class ConditionViolation(ValueError):
    """A union precondition failed; .condition in {1,2,3}, .witness explains."""

    def __init__(self, condition: int, witness):
        self.condition = condition
        self.witness = witness
        super().__init__(f"union condition ({condition}) failed: {witness}")


@dataclass
class UnionReport:
    certified_floppy: bool
    member_floppy: list
    lambdas: list  # per member: (inner, outer) exact minima, None if vacuous


def floppy_union(p: GraphMetric, family: list) -> tuple[GraphMetric, UnionReport]:
    """Glue floppy fragments onto a full pseudometric.

    Preconditions checked exactly: (1) every member meets the base, (2) the
    member's hat agrees with the base on shared pairs, (3) distinct members
    meet only inside the base.  The report carries, per member, the two
    positivity minima that certify floppiness of the union: over glue points
    a,b the quantities hat_f(a,x) + hat_f(x,b) - hat_f(a,b) for inner x and
    p(a,y) + p(y,b) - p(a,b) for outer y.
    """
    if not p.is_full():
        raise ValueError("base of a union must be a full pseudometric")
    base_verts = set(p.vertices)
    shares = []
    for i, f in enumerate(family):
        shared = sorted(set(f.vertices) & base_verts)
        if not shared:
            raise ConditionViolation(1, f"member {i} is disjoint from the base")
        for x, y in combinations(shared, 2):
            if f.hat(x, y) != p.edge_value(x, y):
                raise ConditionViolation(
                    2, f"member {i} disagrees with the base on ({x},{y})")
        shares.append(shared)
    for (i, f), (j, h) in combinations(enumerate(family), 2):
        overlap = (set(f.vertices) & set(h.vertices)) - base_verts
        if overlap:
            raise ConditionViolation(
                3, f"members {i},{j} overlap outside the base: {sorted(overlap)}")

    verts = set(p.vertices)
    edges = dict(p.edges)
    for f in family:
        verts |= set(f.vertices)
        for key, w in f.edges.items():
            if key in edges and edges[key] != w:
                raise ConditionViolation(2, f"edge {key} value conflict")
            edges[key] = w
    union = GraphMetric(verts, edges)

    member_floppy = []
    lambdas = []
    certified = True
    for f, shared in zip(family, shares):
        verdict, _ = is_floppy_graph(f)
        member_floppy.append(verdict)
        inner = _positivity_min(
            [f.hat(a, x) + f.hat(x, b) - f.hat(a, b)
             for x in set(f.vertices) - base_verts
             for a in shared for b in shared])
        outer = _positivity_min(
            [p.edge_value(a, y) + p.edge_value(y, b)
             - (ZERO if a == b else p.edge_value(a, b))
             for y in base_verts - set(f.vertices)
             for a in shared for b in shared])
        lambdas.append((inner, outer))
        for bound in (inner, outer):
            if bound is not None and not bound.sign() > 0:
                certified = False
        if not verdict:
            certified = False
    report = UnionReport(certified_floppy=certified,
                         member_floppy=member_floppy, lambdas=lambdas)
    return union, report


def _positivity_min(values):
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    return best
