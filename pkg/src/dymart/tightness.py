"""Zero-insertion functions, their census bookkeeping, and the exact
inequalities that bound how far they sit from strong variation.

Fixing a set Z of positions with census function c(i) = |Z ∩ {0..i}|, the
point map here weighs input bit i by 2^-(i + c(i) + 1):

    fz(0.x) = sum over i < |x| of x[i] * 2^-(i + c(i) + 1)

It is monotone and exactly evaluable at dyadics, with difference quotients
controlled by the census:

    fz(x + 2^-n) - fz(x) >= 2^(-c(n)-n)                (step bound)
    (fz(y) - fz(x)) / (y - x) > 2^(-c(n)-1),  n = ⌈-lg(y-x)⌉   (slope bound)

A closely related stretching operation on raw bit streams (``insert_zeros``)
writes a 0 at every position in Z and the source bits elsewhere.  For the
empty set and singletons the two views coincide (bit i lands at position
i + c(i)); when Z places an insertion inside (i, i + c(i)] the stream shifts
bits further right than the weight formula, the maps genuinely differ, and
only the weight formula satisfies the two bounds above on all of them (the
streamed map breaks the step bound already at Z = {0,1,2}, x = 0, n = 1).
The companion betting strategy is tied to the streamed view: it goes all-in
on 0 exactly at insertion positions, so its capital along any stretched
sequence is 2**c(n-1) after n bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dyadic import Dyadic, Word, exact_ceil_lg
from .errors import InsufficientBitsError, ParseError
from .funcs import FnOracle, WeakFn
from .martingale import ExactMartingale, ProductForm


class CensusSet:
    """A decidable set of insertion positions with its census function."""

    def __init__(self, member_fn, name, finite_members=None):
        self._member = member_fn
        self.name = name
        self.finite_members = finite_members  # sorted tuple or None
        self._census = [0]  # census[i+1] = |Z ∩ {0..i}|

    def __contains__(self, i):
        return bool(self._member(i))

    def census(self, i):
        """|Z ∩ {0..i}|; census(-1) = 0."""
        if i < 0:
            return 0
        while len(self._census) <= i + 1:
            j = len(self._census) - 1
            self._census.append(self._census[-1] + (1 if j in self else 0))
        return self._census[i + 1]

    @property
    def is_finite(self):
        return self.finite_members is not None

    @staticmethod
    def parse(spec):
        """"" or "empty" | "1,3,5" | "pow2" | "tower"."""
        spec = spec.strip()
        if spec in ("", "empty", "none", "∅"):
            return CensusSet(lambda i: False, "empty", finite_members=())
        if spec == "pow2":
            return CensusSet(lambda i: i > 0 and (i & (i - 1)) == 0, "pow2")
        if spec == "tower":
            members = frozenset((1, 2, 4, 16, 65536))
            return CensusSet(lambda i: i in members, "tower",
                             finite_members=tuple(sorted(members)))
        try:
            members = frozenset(int(p) for p in spec.split(","))
        except ValueError:
            raise ParseError(f"cannot parse position set {spec!r}") from None
        if any(m < 0 for m in members):
            raise ParseError("positions must be nonnegative")
        return CensusSet(lambda i: i in members,
                         ",".join(str(m) for m in sorted(members)),
                         finite_members=tuple(sorted(members)))


def insert_zeros(prefix, zset, out_len):
    """First out_len bits of the stretched sequence: bit i is 0 when i is an
    insertion position, else the next unused bit of prefix."""
    need = out_len - zset.census(out_len - 1)
    if need > len(prefix):
        raise InsufficientBitsError(
            f"need {need} source bits for {out_len} output bits, "
            f"got {len(prefix)}")
    out = Word(0, 0)
    for i in range(out_len):
        if i in zset:
            out = out.append(0)
        else:
            out = out.append(prefix[i - zset.census(i)])
    return out


def insertion_value(x, zset):
    """Exact image of 0.x: sum of x[i] * 2^-(i + census(i) + 1), a Dyadic."""
    if not isinstance(x, Word):
        raise TypeError("insertion_value expects a Word")
    num = 0
    max_exp = len(x) + zset.census(len(x) - 1) + 1
    for i, bit in enumerate(x):
        if bit:
            num += 1 << (max_exp - (i + zset.census(i) + 1))
    return Dyadic(num, max_exp)


def limit_at_one(zset, horizon):
    """Partial sum of the all-ones image: sum over input bits i < horizon of
    2^-(i + census(i) + 1).  The tail beyond the horizon is below
    2^-(horizon + census(horizon-1))."""
    if horizon == 0:
        return Dyadic(0)
    max_exp = horizon + zset.census(horizon - 1) + 1
    num = 0
    for i in range(horizon):
        num += 1 << (max_exp - (i + zset.census(i) + 1))
    return Dyadic(num, max_exp)


class ZeroInsertionFn(FnOracle):
    """The point map fz on [0, 1), exact at dyadics, monotone ascending.

    The value at 1 is not part of the family's domain.  ``scaled=True``
    grafts the constant 1 on at the right endpoint (the standard trick for
    feeding a monotone map with computable right endpoint to the pullback
    machinery); otherwise, for finite sets the exact supremum is used and
    for infinite sets there is no exact value at 1 (``has_one`` is False,
    approximate queries remain available).
    """

    def __init__(self, zset, scaled=False):
        if not isinstance(zset, CensusSet):
            zset = CensusSet.parse(zset)
        self.zset = zset
        self.scaled = scaled
        self.monotone = True
        self.name = f"fz{'_scaled' if scaled else ''}:{zset.name}"
        self.has_one = scaled or zset.is_finite

    def at(self, q):
        d = q if isinstance(q, Dyadic) else Dyadic.from_fraction(Fraction(q))
        if d == 1:
            return Fraction(self.at_one())
        return Fraction(insertion_value(Word.from_point(d), self.zset))

    def at_one(self):
        if self.scaled:
            return Fraction(1)
        if self.zset.is_finite:
            members = self.zset.finite_members
            horizon = (members[-1] + 1) if members else 0
            # beyond the last member the census is constant, so the tail
            # is an exact geometric sum
            tail = Dyadic(1, horizon + len(members))
            return Fraction(limit_at_one(self.zset, horizon) + tail)
        raise ValueError(f"{self.name}: no exact value at 1 for an "
                         "infinite insertion set")

    def approx_at_one(self, r):
        """Truncated limit, within 2^-r (monotone from below)."""
        return Fraction(limit_at_one(self.zset, r + 1))

    def as_weak(self):
        query_one = ((lambda r: self.at_one()) if self.has_one
                     else self.approx_at_one)
        return WeakFn(self.name, lambda w, r: self.at(w.value()),
                      query_one_fn=query_one)


class NormalizedInsertionFn(FnOracle):
    """The insertion map scaled by 1/f(1): monotone with endpoints 0 and 1.

    Values are general rationals (the scale is usually not dyadic).
    Finite insertion sets only, since the exact value at 1 is needed.
    """

    monotone = True

    def __init__(self, zset):
        self.inner = ZeroInsertionFn(zset)
        self.scale = 1 / Fraction(self.inner.at_one())
        self.name = f"fz_norm:{self.inner.zset.name}"

    def at(self, q):
        return Fraction(self.inner.at(q)) * self.scale

    def at_one(self):
        return Fraction(1)


def z_bettor(zset):
    """The betting strategy matched to the insertion set: all-in on 0 at
    insertion positions, idle elsewhere; capital 2**census(n-1) after n
    bits of any stretched sequence."""
    if not isinstance(zset, CensusSet):
        zset = CensusSet.parse(zset)
    edges = (
        (((1, 0, 0), (1, 0, 0)),     # class 0: free position
         ((2, 0, 0), (0, 0, 1))),    # class 1: insertion position
        (((1, 0, 1), (1, 0, 1)),
         ((1, 0, 1), (1, 0, 1))),    # dead: capital is 0
    )
    pf = ProductForm(edges, classes_fn=lambda i: 1 if i in zset else 0)
    return ExactMartingale(f"zbettor:{zset.name}", product_form=pf)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of one exact inequality check, both sides included."""

    ok: bool
    lhs: Fraction
    rhs: Fraction
    label: str

    def line(self):
        rel = ">=" if self.ok else "<"
        return f"{self.label}: {self.lhs} {rel} {self.rhs}"


def verify_strong_ratio(zset, x, n):
    """Exact check of fz(x + 2^-n) - fz(x) >= 2^(-c(n)-n) for dyadic x."""
    if not isinstance(zset, CensusSet):
        zset = CensusSet.parse(zset)
    x = Dyadic(x) if not isinstance(x, Dyadic) else x
    step = Dyadic(1, n)
    if not (Dyadic(0) <= x and x + step < Dyadic(1)):
        raise ValueError("need x and x + 2^-n inside [0, 1)")
    fn = ZeroInsertionFn(zset)
    lhs = fn.at(x + step) - fn.at(x)
    rhs = Fraction(1, 1 << (zset.census(n) + n))
    return BoundCheck(lhs >= rhs, lhs, rhs,
                      f"step bound z={zset.name} x={x} n={n}")


def ceil_neg_lg(t):
    """Smallest integer n with 2^-n <= t, for rational t in (0, 1]."""
    t = Fraction(t)
    if not 0 < t <= 1:
        raise ValueError("need 0 < t <= 1")
    return exact_ceil_lg(1 / t)


def verify_ratio(zset, x, y):
    """Exact check of the slope bound for dyadic 0 <= x < y < 1:
    (fz(y) - fz(x)) / (y - x) > 2^(-c(n)-1) with n = ⌈-lg(y-x)⌉."""
    if not isinstance(zset, CensusSet):
        zset = CensusSet.parse(zset)
    x = Dyadic(x) if not isinstance(x, Dyadic) else x
    y = Dyadic(y) if not isinstance(y, Dyadic) else y
    if not Dyadic(0) <= x < y < Dyadic(1):
        raise ValueError("need 0 <= x < y < 1")
    fn = ZeroInsertionFn(zset)
    gap = Fraction(y - x)
    n = ceil_neg_lg(gap)
    lhs = (fn.at(y) - fn.at(x)) / gap
    rhs = Fraction(1, 1 << (zset.census(n) + 1))
    return BoundCheck(lhs > rhs, lhs, rhs,
                      f"slope bound z={zset.name} x={x} y={y}")


ZOO_SPECS = ("empty", "1", "0,1,2", "0,2,4", "pow2", "tower")


def zoo():
    """The standard test family of insertion sets."""
    return [CensusSet.parse(s) for s in ZOO_SPECS]
