"""Monotonization of a function on the dyadics by priority clamping.

Every dyadic q in (0, 1) has a unique shortest expansion q = 0.y1; its
*exponent* e_q = |y| + 1 measures how coarse the grid containing q is, and
its neighbors pred(q) < q < succ(q) are the closest dyadics of strictly
smaller exponent.  Giving coarser points priority, the monotone patch of f
is

    g(0) = f(0),  g(1) = f(1),
    g(q) = max(g(pred(q)), min(g(succ(q)), f(q)))

which keeps f's value wherever that respects the already-fixed coarser
values and clamps minimally otherwise.  The recursion is well founded
because both neighbors have smaller exponent.

``patch_reference`` evaluates g exactly (the oracle role).
``patch_approx`` is the one-pass approximation: it walks the bits of the
input, maintaining running approximations (lo, hi) of g at the bracketing
neighbors, and needs one f-query per bit at the target precision only --
max/min of values known within 2^-r stay within 2^-r.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import Dyadic, Word
from .martingale import Report, Violation


def exponent_pred_succ(q):
    """(exponent, predecessor, successor) of a dyadic in [0, 1].

    The endpoints have exponent 0 and no neighbors (None, None).  For
    q = 0.y1: pred = 0.y, and succ = 1 when y is all ones, else 0.z1 where
    y = z 0 1^k.
    """
    q = Dyadic(q) if not isinstance(q, Dyadic) else q
    if not Dyadic(0) <= q <= Dyadic(1):
        raise ValueError(f"{q} outside [0, 1]")
    if q == Dyadic(0) or q == Dyadic(1):
        return 0, None, None
    e = q.exp
    y = Word(q.num >> 1, e - 1)  # q = 0.y1
    pred = y.value()
    if y.is_all_ones():
        succ = Dyadic(1)
    else:
        # strip trailing ones, then the final 0 becomes a 1
        k, n = y.k, y.n
        while k & 1:
            k >>= 1
            n -= 1
        succ = Dyadic((k | 1), n)
    return e, pred, succ


def patch_reference(f, q, _memo=None):
    """Exact monotone patch g(q); f must be exactly evaluable on all
    dyadics of exponent <= e_q."""
    q = Dyadic(q) if not isinstance(q, Dyadic) else q
    memo = {} if _memo is None else _memo
    hit = memo.get(q)
    if hit is not None:
        return hit
    e, pred, succ = exponent_pred_succ(q)
    if e == 0:
        val = Fraction(f.at_one() if q == Dyadic(1) else f.at(q))
    else:
        g_lo = patch_reference(f, pred, memo)
        g_hi = patch_reference(f, succ, memo)
        val = max(g_lo, min(g_hi, Fraction(f.at(q))))
    memo[q] = val
    return val


def patch_table(f, exp):
    """g on the whole 2^-exp grid, as a list indexed by k."""
    memo = {}
    return [patch_reference(f, Dyadic(k, exp), memo)
            for k in range((1 << exp) + 1)]


def patch_approx(f_weak, x, r, reference=None):
    """Approximate g(0.x) within 2^-r using only approximate f-access.

    Walks the bits of x (trailing zeros first removed; they do not change
    the value) keeping ``lo ~ g(pred(0.s1))`` and ``hi ~ g(succ(0.s1))``
    within 2^-r for the current prefix s.  Each step folds in one f-query
    at an interior point, at precision r: max/min preserve the error bound,
    so no precision inflation is needed.

    ``reference`` (a function q -> exact g(q)) turns on the loop-invariant
    runtime check; it exists because the invariant is the correctness
    argument and is cheap to assert against the exact patch.
    """
    x = x.strip_trailing_zeros()
    tol = Fraction(1, 1 << r)
    lo = f_weak.query(Word(0, 0), r)
    hi = f_weak.query_one(r)
    s = Word(0, 0)
    for i in range(len(x)):
        if reference is not None:
            probe = s.append(1).value()
            _, pred, succ = exponent_pred_succ(probe)
            assert abs(lo - reference(pred)) <= tol, \
                f"invariant: lo off at {s}"
            assert abs(hi - reference(succ)) <= tol, \
                f"invariant: hi off at {s}"
        mid = max(lo, min(hi, f_weak.query(s.append(1), r)))
        if x[i] == 0:
            hi = mid
        else:
            lo = mid
        s = s.append(x[i])
    return lo


def strong_increase_check(f, g_at, x0, C, exp):
    """Exact two-sided check of (g(x) - f(x0)) / (x - x0) >= C on the whole
    2^-exp grid (x != x0); lists every violating grid point."""
    x0 = Dyadic(x0) if not isinstance(x0, Dyadic) else x0
    C = Fraction(C)
    base = Fraction(f.at_one() if x0 == Dyadic(1) else f.at(x0))
    violations = []
    checked = 0
    for k in range((1 << exp) + 1):
        x = Dyadic(k, exp)
        if x == x0:
            continue
        checked += 1
        gap = Fraction(x) - Fraction(x0)
        lhs = g_at(x) - base
        # sign-aware cross-multiplication: lhs/gap >= C
        if gap > 0:
            ok = lhs >= C * gap
        else:
            ok = lhs <= C * gap
        if not ok:
            violations.append(Violation(_fmt(x), "slope",
                                        f"(g-f(x0))/(x-x0) = {lhs / gap} < {C}"))
    return Report(f"strong-increase check at x0={_fmt(x0)} grid 2^-{exp}",
                  checked, violations)


def _fmt(q):
    return f"{q.numerator}/{q.denominator}"
