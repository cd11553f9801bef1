"""Exact decision procedures on submonoids of the nonnegative rationals.

A monoid here is a subset M of Q+ with 0 in M and M + M = M.  Three decidable
description classes are supported:

* ``fingen``    -- all finite nonnegative-integer combinations of finitely
                   many positive rational generators,
* ``groupcone`` -- the nonnegative part of the subgroup of Q generated by
                   finitely many rationals (always a half-group),
* ``closure``   -- a named class with hand-verified closed-form membership
                   (see ``CLOSURES``).

Finitely generated monoids are scaled by the lcm of the generator
denominators to a numerical semigroup in the nonnegative integers.  Its
Apery set (computed by a shortest-path search over residues modulo the
smallest generator) yields the conductor, so membership, half-group and
divisibility verdicts below are complete, never sampled.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, NamedTuple, Optional

from .values import rat

__all__ = [
    "MonoidDesc",
    "DivisibilityWitness",
    "DzikResult",
    "MonoidMembershipError",
    "delta_p",
    "div_p",
    "dzik_reduce",
    "is_half_group",
    "is_p_divisible_in",
    "is_floppy",
    "ddot_set",
    "CLOSURE_IDS",
]


# ---------------------------------------------------------------------------
# p-free parts and the reduction recursion
# ---------------------------------------------------------------------------


class MonoidMembershipError(ValueError):
    """A trace element was denied by the membership oracle."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(
            f"trace element {element} is not in the monoid; the monoid is "
            f"not p-divisible where the reduction needs it to be")


def delta_p(x: int, p: int) -> int:
    """The p-free part of x: its largest divisor not divisible by p."""
    if x < 1:
        raise ValueError(f"p-free part requires a positive integer, got {x}")
    _require_prime(p)
    while x % p == 0:
        x //= p
    return x


def div_p(x: int, y: int, p: int) -> int:
    """The unique k with 1 <= k < p and k*y congruent to x modulo p."""
    _require_prime(p)
    if x % p == 0 or y % p == 0:
        raise ValueError(f"div_p needs both arguments coprime to {p}")
    return (x * pow(y, -1, p)) % p


class DzikResult(NamedTuple):
    value: int
    trace: tuple


def dzik_reduce(a: int, b: int, p: int,
                member: Optional[Callable[[int], bool]] = None) -> DzikResult:
    """Run the reduction recursion on (a, b) down to the p-free gcd.

    Starting from the p-free parts of a and b, each step keeps the smaller
    value x and replaces the larger value y by the p-free part of y + k*x,
    where k < p is chosen so that the sum is divisible by p.  The pair sums
    strictly decrease, and the recursion stops when both entries agree; the
    common value is the p-free part of gcd(a, b).

    ``member`` is an optional membership oracle for a monoid M containing a
    and b; every trace element is checked against it and a denial raises
    MonoidMembershipError (for monoids p-divisible in the right domain the
    trace provably stays inside M).
    """
    if a < 1 or b < 1:
        raise ValueError("dzik_reduce needs positive integers")
    _require_prime(p)
    check = member if member is not None else (lambda n: True)

    ak, bk = delta_p(a, p), delta_p(b, p)
    trace = [(ak, bk)]
    for v in (ak, bk):
        if not check(v):
            raise MonoidMembershipError(v)
    while ak != bk:
        x, y = min(ak, bk), max(ak, bk)
        k = div_p(-y, x, p)
        successor = delta_p(y + k * x, p)
        if x + successor >= ak + bk:
            raise RuntimeError("reduction sums failed to decrease")
        ak, bk = x, successor
        trace.append((ak, bk))
        if not check(successor):
            raise MonoidMembershipError(successor)
    return DzikResult(value=ak, trace=tuple(trace))


def _require_prime(p: int) -> None:
    from .values import is_prime
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


# ---------------------------------------------------------------------------
# numerical-semigroup core for finitely generated monoids
# ---------------------------------------------------------------------------


class _Semigroup:
    """Integer numerical semigroup <gens> with complete membership."""

    def __init__(self, gens: tuple[int, ...]):
        self.gens = gens
        self.step = gcd(*gens) if len(gens) > 1 else gens[0]
        reduced = tuple(sorted({g // self.step for g in gens}))
        self.reduced = reduced
        self.apery = _apery_set(reduced)
        m0 = reduced[0]
        # conductor of the reduced semigroup: least c with c + Z+ inside it
        self.reduced_conductor = 0 if m0 == 1 else max(self.apery) - m0 + 1

    def member(self, n: int) -> bool:
        if n < 0 or n % self.step:
            return False
        m = n // self.step
        return m >= self.apery[m % self.reduced[0]]

    def conductor(self) -> int:
        """Least integer c >= 0 with every multiple of the step >= c inside."""
        return self.reduced_conductor * self.step

    def smallest_gap(self) -> Optional[int]:
        for m in range(self.reduced_conductor):
            if m < self.apery[m % self.reduced[0]]:
                return m * self.step
        return None


def _apery_set(reduced_gens: tuple[int, ...]) -> list[int]:
    """Minimal semigroup element in each residue class mod the least generator."""
    m0 = reduced_gens[0]
    dist = [None] * m0
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        val, res = heapq.heappop(heap)
        if dist[res] != val:
            continue
        for g in reduced_gens:
            nxt = (res + g) % m0
            cand = val + g
            if dist[nxt] is None or cand < dist[nxt]:
                dist[nxt] = cand
                heapq.heappush(heap, (cand, nxt))
    return dist


# ---------------------------------------------------------------------------
# named closed-form closure classes
# ---------------------------------------------------------------------------


def _dyadic_part(q: int) -> tuple[int, int]:
    """Split q > 0 as (2**k, odd)."""
    two = q & -q
    return two, q // two


def _omega_member(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0 and x != 1


def _omega_min_add(d: Fraction) -> Optional[Fraction]:
    if d.denominator != 1 or d <= 0:
        return Fraction(0) if d == 0 else None
    return Fraction(2) if d == 1 else Fraction(0)


def _dyadic_member(x: Fraction) -> bool:
    return x >= 0 and _dyadic_part(x.denominator)[1] == 1


def _dpt_class(x: Fraction) -> Optional[int]:
    """Residue class a0 of a denominator-3*2^k rational, else None."""
    two, odd = _dyadic_part(x.denominator)
    if odd != 3:
        return None
    return (x.numerator * pow(two, -1, 3)) % 3


def _dpt_member(x: Fraction) -> bool:
    if x == 0:
        return True
    if x < 0:
        return False
    if _dyadic_member(x):
        return True
    a0 = _dpt_class(x)
    return a0 is not None and x > Fraction(a0, 3)


def _dpt_diff_member(x: Fraction) -> bool:
    return _dyadic_part(x.denominator)[1] in (1, 3)


def _dpt_min_add(d: Fraction) -> Optional[Fraction]:
    if _dpt_member(d):
        return Fraction(0)
    if d <= 0:
        return None
    a0 = _dpt_class(d)
    if a0 is None:
        return None
    # d <= a0/3 here; minimize over the three residue classes a helper
    # element v can live in (dyadic, complementary, same class)
    third = Fraction(a0, 3)
    candidates = [
        third - d,
        Fraction(3 - a0, 3),
        max(third, Fraction((2 * a0) % 3, 3) - d),
    ]
    return min(candidates)


@dataclass(frozen=True)
class _Closure:
    cid: str
    member: Callable[[Fraction], bool]
    diff_member: Callable[[Fraction], bool]
    min_add: Callable[[Fraction], Optional[Fraction]]
    floppy: tuple
    half_group: tuple
    denominators: Callable[[int], list]
    ddot_empty: bool
    divisibility: Callable[[int, str], Optional[Fraction]]
    doc: str


def _powers_of_two(bound: int) -> list[int]:
    out, q = [], 1
    while q <= bound:
        out.append(q)
        q *= 2
    return out


def _dpt_denoms(bound: int) -> list[int]:
    out = _powers_of_two(bound)
    out += [3 * q for q in _powers_of_two(bound // 3)] if bound >= 3 else []
    return sorted(out)


def _dpt_counterexample(p: int, domain: str) -> Optional[Fraction]:
    if domain == "Z_plus":
        return None  # nonnegative integers are dyadic, hence members
    if p == 3:
        return Fraction(1, 3)
    if p % 3 == 2:
        return Fraction(5, 12)
    return Fraction(13, 48)


CLOSURES = {
    "omega-minus-1": _Closure(
        cid="omega-minus-1",
        member=_omega_member,
        diff_member=lambda x: x.denominator == 1,
        min_add=_omega_min_add,
        floppy=(True, None),
        half_group=(False, (Fraction(2), Fraction(3))),
        denominators=lambda bound: [1],
        ddot_empty=False,
        divisibility=lambda p, domain: Fraction(1),
        doc="nonnegative integers without 1",
    ),
    "dyadic": _Closure(
        cid="dyadic",
        member=_dyadic_member,
        diff_member=lambda x: _dyadic_part(x.denominator)[1] == 1,
        min_add=lambda d: Fraction(0) if _dyadic_member(d) else None,
        floppy=(True, None),
        half_group=(True, None),
        denominators=_powers_of_two,
        ddot_empty=True,
        divisibility=lambda p, domain: None,
        doc="nonnegative dyadic rationals",
    ),
    "dyadic-plus-thirds": _Closure(
        cid="dyadic-plus-thirds",
        member=_dpt_member,
        diff_member=_dpt_diff_member,
        min_add=_dpt_min_add,
        floppy=(False, Fraction(1, 3)),
        half_group=(False, (Fraction(1, 4), Fraction(7, 12))),
        denominators=_dpt_denoms,
        ddot_empty=True,
        divisibility=_dpt_counterexample,
        doc="monoid generated by {2^-n : n>=1} and {1/3 + 2^-n : n>=1}",
    ),
}

CLOSURE_IDS = tuple(sorted(CLOSURES))


# ---------------------------------------------------------------------------
# monoid descriptions
# ---------------------------------------------------------------------------


class MonoidDesc:
    """A decidable description of a submonoid of the nonnegative rationals."""

    def __init__(self, variant: str, generators=(), closure_id: str | None = None):
        if variant not in ("fingen", "groupcone", "closure"):
            raise ValueError(f"unknown monoid variant {variant!r}")
        self.variant = variant
        self.generators = tuple(sorted({rat(g) for g in generators}))
        self.closure_id = closure_id
        self._closure = None
        self._semigroup = None
        self.scale = 1
        self.cone_step = None

        if variant == "closure":
            if closure_id not in CLOSURES:
                raise ValueError(f"unknown closure id {closure_id!r}; "
                                 f"known: {', '.join(CLOSURE_IDS)}")
            self._closure = CLOSURES[closure_id]
            return
        if any(g <= 0 for g in self.generators):
            raise ValueError("generators must be positive")
        if not self.generators:
            return  # the zero monoid
        self.scale = lcm(*(g.denominator for g in self.generators)) \
            if len(self.generators) > 1 else self.generators[0].denominator
        scaled = tuple(int(g * self.scale) for g in self.generators)
        if variant == "fingen":
            self._semigroup = _Semigroup(scaled)
        else:
            self.cone_step = Fraction(gcd(*scaled) if len(scaled) > 1
                                      else scaled[0], self.scale)

    # -- identity --------------------------------------------------------

    def _key(self):
        return (self.variant, self.generators, self.closure_id)

    def __eq__(self, other):
        return isinstance(other, MonoidDesc) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.variant == "closure":
            return f"MonoidDesc(closure {self.closure_id})"
        gens = ",".join(str(g) for g in self.generators)
        return f"MonoidDesc({self.variant} <{gens}>)"

    @classmethod
    def fingen(cls, generators) -> "MonoidDesc":
        return cls("fingen", generators)

    @classmethod
    def groupcone(cls, generators) -> "MonoidDesc":
        return cls("groupcone", generators)

    @classmethod
    def closure(cls, closure_id: str) -> "MonoidDesc":
        return cls("closure", (), closure_id)

    def is_zero_monoid(self) -> bool:
        return self.variant != "closure" and not self.generators

    # -- membership --------------------------------------------------------

    def member(self, x) -> bool:
        x = rat(x)
        if self._closure:
            return self._closure.member(x)
        if self.is_zero_monoid():
            return x == 0
        if self.variant == "groupcone":
            return x >= 0 and (x / self.cone_step).denominator == 1
        scaled = x * self.scale
        return scaled.denominator == 1 and self._semigroup.member(scaled.numerator)

    def diff_member(self, x) -> bool:
        """Membership in the difference set M - M."""
        x = rat(x)
        if self._closure:
            return self._closure.diff_member(x)
        if self.is_zero_monoid():
            return x == 0
        step = self.cone_step if self.variant == "groupcone" else self._step()
        return (x / step).denominator == 1

    def _step(self) -> Fraction:
        """The gcd of M: M - M is exactly its integer multiples."""
        if self.variant == "groupcone":
            return self.cone_step
        return Fraction(self._semigroup.step, self.scale)

    def conductor(self) -> Optional[Fraction]:
        """Least c with every multiple of the gcd above c a member; None if n/a."""
        if self.variant == "fingen" and not self.is_zero_monoid():
            return Fraction(self._semigroup.conductor(), self.scale)
        if self.variant == "groupcone" and not self.is_zero_monoid():
            return Fraction(0)
        return None

    # -- infima -------------------------------------------------------------

    def min_add(self, d) -> Optional[Fraction]:
        """inf{v in M : v + d in M} as an exact value, None for the empty set.

        The infimum need not be attained for dense closure classes; for
        fingen/groupcone it always is.
        """
        d = rat(d)
        if self._closure:
            return self._closure.min_add(d)
        if self.member(d):
            return Fraction(0)
        if self.is_zero_monoid() or not self.diff_member(d):
            return None
        if self.variant == "groupcone":
            return max(Fraction(0), -d)
        sg = self._semigroup
        n = int(d * self.scale) // sg.step  # reduced units
        start = max(0, -n)
        limit = sg.reduced_conductor + start + 1
        for v in range(start, limit + 1):
            if (sg.apery[v % sg.reduced[0]] <= v
                    and sg.apery[(v + n) % sg.reduced[0]] <= v + n):
                return Fraction(v * sg.step, self.scale)
        return None

    # -- enumeration ----------------------------------------------------------

    def elements(self, window, denom_bound: int = 64) -> list[Fraction]:
        """Sorted members of M in [0, window] (denominator-bounded for closures)."""
        window = rat(window)
        if self.is_zero_monoid():
            return [Fraction(0)]
        if self._closure:
            seen = set()
            for q in self._closure.denominators(denom_bound):
                for num in range(0, int(window * q) + 1):
                    x = Fraction(num, q)
                    if x <= window and self.member(x):
                        seen.add(x)
            return sorted(seen)
        step = self._step()
        out = []
        k = 0
        while k * step <= window:
            if self.member(k * step):
                out.append(k * step)
            k += 1
        return out

    def diff_elements(self, window, denom_bound: int = 64) -> list[Fraction]:
        """Sorted members of M - M in [-window, window]."""
        window = rat(window)
        if self.is_zero_monoid():
            return [Fraction(0)]
        if self._closure:
            seen = {Fraction(0)}
            for q in self._closure.denominators(denom_bound):
                for num in range(1, int(window * q) + 1):
                    x = Fraction(num, q)
                    if x <= window and self.diff_member(x):
                        seen.update((x, -x))
            return sorted(seen)
        step = self._step()
        top = int(window / step)
        return [k * step for k in range(-top, top + 1)]


@dataclass(frozen=True)
class DivisibilityWitness:
    """Outcome of a p-divisibility check.

    kind is "divisible", "counterexample" (element holds the witness s with
    p*s in M, s in the domain, s not in M), or "inconclusive".
    """
    kind: str
    element: Optional[Fraction] = None


# ---------------------------------------------------------------------------
# verdict operations
# ---------------------------------------------------------------------------


def is_half_group(monoid: MonoidDesc, bound=None):
    """Decide whether the symmetrization of M is a group under addition.

    Returns (verdict, witness): verdict True/False, or None when the caller
    capped the search below the conductor (inconclusive).  The witness for a
    False verdict is a pair (a, b) of members whose difference b - a is in
    (M - M) but not in M.
    """
    if monoid.variant == "groupcone" or monoid.is_zero_monoid():
        return True, None
    if monoid.variant == "closure":
        return CLOSURES[monoid.closure_id].half_group
    sg = monoid._semigroup
    conductor = monoid.conductor()
    if bound is not None and rat(bound) < conductor:
        return None, f"bound below conductor {conductor}"
    gap = sg.smallest_gap()
    if gap is None:
        return True, None
    gap_q = Fraction(gap, monoid.scale)
    a = next(x for x in monoid.elements(conductor + gap_q)
             if x > 0 and monoid.member(x + gap_q))
    return False, (a, a + gap_q)


def is_p_divisible_in(monoid: MonoidDesc, p: int, domain: str = "M_minus_M",
                      bound=None) -> DivisibilityWitness:
    """Check whether S intersected with (1/p)M lies inside M.

    S is the nonnegative integers ("Z_plus") or the difference set
    ("M_minus_M").  Verdicts for fingen/groupcone are complete: candidate
    counterexamples repeat periodically beyond the conductor, so a bounded
    scan decides.
    """
    _require_prime(p)
    if domain not in ("Z_plus", "M_minus_M"):
        raise ValueError(f"unknown domain {domain!r}")
    if monoid.is_zero_monoid():
        return DivisibilityWitness("divisible")
    if monoid.variant == "closure":
        witness = CLOSURES[monoid.closure_id].divisibility(p, domain)
        if witness is None:
            return DivisibilityWitness("divisible")
        _assert_counterexample(monoid, p, domain, witness)
        return DivisibilityWitness("counterexample", witness)

    if domain == "M_minus_M":
        step = monoid._step()
        if monoid.variant == "groupcone":
            return DivisibilityWitness("divisible")
        sg = monoid._semigroup
        for k in range(sg.reduced_conductor):
            s = k * step
            if monoid.member(p * s) and not monoid.member(s):
                return DivisibilityWitness("counterexample", s)
        return DivisibilityWitness("divisible")

    # domain Z_plus: integer candidates; beyond the conductor membership of
    # s and p*s depends only on s modulo the scaled step, so one extra
    # period suffices for completeness
    conductor = monoid.conductor()
    period = (monoid._semigroup.step if monoid.variant == "fingen"
              else monoid.cone_step.numerator)
    top = int(conductor) + p * period + 2
    if bound is not None:
        top = min(top, int(rat(bound)))
        complete = rat(bound) >= int(conductor) + p * period + 2
    else:
        complete = True
    for s in range(top + 1):
        if monoid.member(p * s) and not monoid.member(s):
            return DivisibilityWitness("counterexample", Fraction(s))
    return DivisibilityWitness("divisible" if complete else "inconclusive")


def _assert_counterexample(monoid, p, domain, s):
    ok = (monoid.member(p * s) and not monoid.member(s)
          and (s.denominator == 1 and s >= 0 if domain == "Z_plus"
               else monoid.diff_member(s)))
    if not ok:
        raise RuntimeError(f"stored divisibility witness {s} failed its facts")


def is_floppy(monoid: MonoidDesc, window=None, denom_bound: int = 64):
    """Decide floppiness: any r attaining r = inf{a+b : a,b in M, r = b-a}
    must already belong to M.

    Monoids with a positive least nonzero element are floppy outright; the
    dense closure classes ship hand-verified infimum formulas, so the verdict
    is exact there as well.  Returns (verdict, witness_r_or_None).
    """
    if monoid.variant == "closure":
        return CLOSURES[monoid.closure_id].floppy
    # fingen/groupcone (and the zero monoid): inf of the nonzero elements is
    # the smallest scaled generator, which is positive
    return True, None


def ddot_set(monoid: MonoidDesc, window, denom_bound: int = 64) -> list[Fraction]:
    """Members r <= window that are not sums of two nonzero members.

    For a rational monoid the rational-multiples restriction in the defining
    condition is vacuous, so this is plain two-term indecomposability.
    """
    window = rat(window)
    if monoid.variant == "closure" and CLOSURES[monoid.closure_id].ddot_empty:
        return []
    members = monoid.elements(window, denom_bound)
    member_set = set(members)
    out = []
    for r in members:
        if r == 0:
            continue
        if not any(0 < x < r and (r - x) in member_set for x in members):
            out.append(r)
    return out
