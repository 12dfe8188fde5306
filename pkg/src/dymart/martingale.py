"""Betting strategies on binary words and their conservative transforms.

A martingale here is a total, exactly evaluable map from words to
nonnegative exact rationals obeying the fair-bet identity
``d(w) = (d(w0) + d(w1)) / 2`` with ``d(λ) <= 1``.  Built-ins are
*product-form*: the value along a path is a product of per-step dyadic
factors driven by a tiny state machine, which is what the kernels in
:mod:`dymart.kernels` exploit.  Values of derived strategies (conservative
transform, savings wrapper) may be general rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .dyadic import Word
from .errors import PrecisionContractError

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class ConservativeCert:
    """Witness that single-step bet ratios stay within [lower, upper]."""

    lower: Fraction = HALF
    upper: Fraction = THREE_HALVES
    source: str = ""


@dataclass(frozen=True)
class ProductForm:
    """Finite-state product description of a martingale with d(λ) = 1.

    ``edges[state][cls][bit] = (num, dexp, next_state)`` gives the per-step
    capital factor num/2**dexp; ``classes_fn(i)`` tags position i (pattern
    phase, insertion-set membership).  The kernel validates that the two
    factors at every (state, class) average to one.
    """

    edges: tuple
    start: int = 0
    classes_fn: object = staticmethod(lambda i: 0)

    def descriptor(self):
        max_num = max(f[0] for st in self.edges for c in st for f in c)
        max_dexp = max(f[1] for st in self.edges for c in st for f in c)
        desc = (len(self.edges), self.start, self.edges, max_num, max_dexp)
        kernels.validate(desc)
        return desc

    def classes(self, n):
        fn = self.classes_fn
        return tuple(fn(i) for i in range(n))

    def transformed(self):
        """Factor map f -> (1+f)/2; implements the half-bet damping."""
        new_edges = tuple(
            tuple(tuple(_halfbet(f) for f in per_cls) for per_cls in per_state)
            for per_state in self.edges)
        return ProductForm(new_edges, self.start, self.classes_fn)


def _halfbet(factor):
    num, dexp, nxt = factor
    return _dyadic_factor(num + (1 << dexp), dexp + 1, nxt)


def _dyadic_factor(num, dexp, nxt):
    while num and num % 2 == 0 and dexp > 0:
        num //= 2
        dexp -= 1
    return (num, dexp, nxt)


class ExactMartingale:
    """Total exact-valued strategy; the oracle role in every check."""

    def __init__(self, name, fn=None, *, product_form=None, initial=None,
                 conservative=None):
        self.name = name
        self._fn = fn
        self.product_form = product_form
        self._desc = product_form.descriptor() if product_form else None
        self.initial = Fraction(1) if initial is None else Fraction(initial)
        self.conservative = conservative
        self._cache = {}

    def at(self, w):
        """Exact d(w) as a Fraction."""
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        if self._desc is not None:
            num, dexp = kernels.cell_value(
                self._desc, self.product_form.classes(len(w)), len(w), w.k)
            val = self.initial * Fraction(num, 1 << dexp)
        else:
            val = Fraction(self._fn(w))
        if len(self._cache) < 1 << 18:
            self._cache[w] = val
        return val

    def __repr__(self):
        return f"ExactMartingale({self.name!r})"


def uniform():
    pf = ProductForm(((((1, 0, 0), (1, 0, 0)),),))
    return ExactMartingale("uniform", product_form=pf,
                           conservative=ConservativeCert(source="uniform"))


def allin_zeros():
    """Doubles on every 0 while the prefix is all zeros; dies at the first 1."""
    edges = (
        (((2, 0, 0), (0, 0, 1)),),   # alive: all-zero prefix so far
        (((1, 0, 1), (1, 0, 1)),),   # dead: value is already 0
    )
    return ExactMartingale("allin_zeros", product_form=ProductForm(edges))


def pattern_bettor(pattern):
    """Bets half its capital that the next bit continues ``pattern`` cyclically."""
    if not isinstance(pattern, Word):
        pattern = Word.parse(pattern)
    if len(pattern) == 0:
        raise ValueError("pattern must be nonempty")
    bits = tuple(pattern)
    per_state = tuple(
        ((3, 1, 0), (1, 1, 0)) if b == 0 else ((1, 1, 0), (3, 1, 0))
        for b in bits)
    pf = ProductForm((per_state,), classes_fn=lambda i: i % len(bits))
    return ExactMartingale(f"pattern:{pattern}", product_form=pf,
                           conservative=ConservativeCert(source="pattern"))


def conservative_transform(mart):
    """Half-bet damping: d'(λ) = d(λ), d'(wb) = d'(w) (1 + ρ(wb)) / 2
    with ρ(wb) = d(wb)/d(w), and ρ := 1 once capital hits zero.

    Output ratios live in [1/2, 3/2]; moreover d'(w)^2 >= d(w) d(λ) while
    capital is positive (AM-GM on the step factors).
    """
    cert = ConservativeCert(source=f"transform({mart.name})")
    if mart.product_form is not None:
        return ExactMartingale(f"conservative:{mart.name}",
                               product_form=mart.product_form.transformed(),
                               initial=mart.initial, conservative=cert)

    def value(w):
        v = mart.at(Word(0, 0))
        prev = v
        for i in range(1, len(w) + 1):
            cur = mart.at(w.prefix(i))
            rho = cur / prev if prev > 0 else Fraction(1)
            v *= (1 + rho) / 2
            prev = cur
        return v

    return ExactMartingale(f"conservative:{mart.name}", value,
                           conservative=cert)


def savings_wrapper(mart):
    """Moves half the live stake into a frozen reserve each time the input's
    capital crosses the next power of two.

    The reserve never shrinks, so once d has reached 2^k (crossing every
    level up to k) the wrapper's capital stays >= k on every extension.  A
    hard floor of half the running peak is unattainable for any martingale
    (averaging pulls the off-branch down), so the guarantee is the classic
    one-unit-per-doubling reserve.
    """

    def value(w):
        level = 0
        reserve = Fraction(0)
        mult = Fraction(1)
        v = mart.at(Word(0, 0))
        for i in range(len(w) + 1):
            if i > 0:
                v = mart.at(w.prefix(i))
            while v >= 1 << (level + 1):
                reserve += mult * v / 2
                mult /= 2
                level += 1
        return reserve + mult * v

    out = ExactMartingale(f"savings:{mart.name}", value,
                          conservative=mart.conservative)
    return out


@dataclass(frozen=True)
class Violation:
    where: str
    kind: str
    detail: str

    def line(self):
        return f"{self.kind} at {self.where}: {self.detail}"


@dataclass
class Report:
    title: str
    checked: int
    violations: list

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        head = "pass" if self.ok else f"FAIL ({len(self.violations)})"
        out = [f"{self.title}: {head} [{self.checked} checks]"]
        out.extend("  " + v.line() for v in self.violations[:50])
        if len(self.violations) > 50:
            out.append(f"  ... {len(self.violations) - 50} more")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def verify_martingale(mart, depth):
    """Exact averaging identity and nonnegativity on all |w| <= depth.

    Reports violations instead of raising; also flags d(λ) > 1.
    """
    violations = []
    checked = 0
    root = mart.at(Word(0, 0))
    if root > 1:
        violations.append(Violation("λ", "initial",
                                    f"d(λ) = {root} exceeds 1"))
    for n in range(depth + 1):
        for k in range(1 << n):
            w = Word(k, n)
            v = mart.at(w)
            checked += 1
            if v < 0:
                violations.append(Violation(str(w), "nonneg", f"d = {v}"))
            if 2 * v != mart.at(w.append(0)) + mart.at(w.append(1)):
                violations.append(Violation(
                    str(w), "identity",
                    f"d = {v}, children average "
                    f"{(mart.at(w.append(0)) + mart.at(w.append(1))) / 2}"))
    return Report(f"martingale identity for {mart.name} (depth {depth})",
                  checked, violations)


def verify_conservative(mart, depth):
    """Exact ratio bounds d(w)/2 <= d(wb) <= 3 d(w)/2 and the derived cap
    d(w) <= (3/2)^|w| on all |w| <= depth."""
    violations = []
    checked = 0
    for n in range(depth + 1):
        cap = THREE_HALVES ** n
        for k in range(1 << n):
            w = Word(k, n)
            v = mart.at(w)
            checked += 1
            if v > cap:
                violations.append(Violation(str(w), "cap",
                                            f"d = {v} > (3/2)^{n}"))
            if n < depth:
                for bit in (0, 1):
                    child = mart.at(w.append(bit))
                    if not (v * HALF <= child <= v * THREE_HALVES):
                        violations.append(Violation(
                            str(w.append(bit)), "ratio",
                            f"parent {v}, child {child}"))
    return Report(f"conservative bounds for {mart.name} (depth {depth})",
                  checked, violations)


class ApproxMartingale:
    """Approximation contract: query(w, r) is within 2^-r of the true d(w)."""

    def __init__(self, name, query_fn, *, conservative=None, true_mart=None):
        self.name = name
        self._query = query_fn
        self.conservative = conservative
        self.true_mart = true_mart

    def query(self, w, r):
        v = Fraction(self._query(w, r))
        if v < -Fraction(1, 1 << r):
            # a true martingale is nonnegative, so this is detectable
            raise PrecisionContractError(
                f"{self.name}: query({w}, {r}) = {v} is below -2^-{r}")
        return v


def as_approx(mart):
    """Trivial wrapper: exact values at every precision."""
    return ApproxMartingale(mart.name, lambda w, r: mart.at(w),
                            conservative=mart.conservative, true_mart=mart)


def capital_trace(approx, s, r):
    """Approximate capital along all prefixes of s (length |s| + 1)."""
    return [approx.query(p, r) for p in s.prefixes()]


BUILTIN_NAMES = ("uniform", "allin_zeros", "pattern:<word>",
                 "zbettor:<zset>", "conservative:<name>", "savings:<name>")


def by_name(name):
    """Resolve a strategy name: uniform | allin_zeros | pattern:w |
    zbettor:zspec | conservative:inner | savings:inner."""
    if name == "uniform":
        return uniform()
    if name == "allin_zeros":
        return allin_zeros()
    if name.startswith("pattern:"):
        return pattern_bettor(name.split(":", 1)[1])
    if name.startswith("zbettor:"):
        from .tightness import z_bettor
        return z_bettor(name.split(":", 1)[1])
    if name.startswith("conservative:"):
        return conservative_transform(by_name(name.split(":", 1)[1]))
    if name.startswith("savings:"):
        return savings_wrapper(by_name(name.split(":", 1)[1]))
    raise ValueError(f"unknown martingale {name!r}; "
                     f"known forms: {', '.join(BUILTIN_NAMES)}")
