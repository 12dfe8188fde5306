"""Exact dyadic-rational arithmetic, binary words, and dyadic intervals.

Everything here is exact: a ``Dyadic`` is ``num / 2**exp`` with arbitrary
precision integers, a ``Word`` is a finite bit string ``w`` standing both for
the rational ``0.w`` and for the closed interval ``[0.w, 0.w + 2^-|w|]``, and
there is no floating point anywhere.  General (non power-of-two denominator)
rationals are handled by ``fractions.Fraction``; ``Dyadic`` interoperates
with it transparently.
"""

from __future__ import annotations

import numbers
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError

_WORD_RE = re.compile(r"[01]*\Z")
_RAT_RE = re.compile(r"(-?\d+)(?:/(\d+))?\Z")


class Dyadic:
    """A rational of the form ``num / 2**exp``, kept in lowest terms.

    Canonical form: ``exp >= 0`` and ``gcd(num, 2**exp) == 1``, i.e. the
    numerator is odd whenever ``exp > 0``; zero is ``(0, 0)``.  Equality is
    therefore structural and hashing cheap.  Addition, subtraction,
    multiplication, comparison, min/max and scaling by powers of two are
    closed and exact; true division is deliberately not provided (it leaves
    the dyadics -- use Fraction when a quotient is genuinely needed).
    """

    __slots__ = ("num", "exp")

    def __init__(self, num, exp=0):
        if isinstance(num, Dyadic):
            num, exp = num.num, num.exp + exp
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        else:
            # strip common factors of two
            tz = (num & -num).bit_length() - 1
            if tz > exp:
                tz = exp
            if tz:
                num >>= tz
                exp -= tz
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_fraction(q):
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return Dyadic(q.numerator, den.bit_length() - 1)

    @staticmethod
    def parse(text):
        """Parse "p", "p/q" (q a power of two) or a binary "0.bits" form."""
        text = text.strip()
        if text.startswith("0.") and _WORD_RE.match(text[2:]):
            bits = text[2:]
            return Dyadic(int(bits, 2) if bits else 0, len(bits))
        m = _RAT_RE.match(text)
        if not m:
            raise ParseError(f"cannot parse rational {text!r}")
        p = int(m.group(1))
        q = int(m.group(2)) if m.group(2) else 1
        if q == 0 or q & (q - 1):
            raise ParseError(f"{text!r} is not a dyadic rational "
                             "(denominator must be a positive power of two)")
        return Dyadic(p, q.bit_length() - 1)

    # -- Rational protocol -------------------------------------------------

    @property
    def numerator(self):
        return self.num

    @property
    def denominator(self):
        return 1 << self.exp

    def as_fraction(self):
        return Fraction(self.num, 1 << self.exp)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.as_fraction() + other
            return NotImplemented
        e = max(self.exp, o.exp)
        return Dyadic((self.num << (e - self.exp)) + (o.num << (e - o.exp)), e)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.as_fraction() - other
            return NotImplemented
        e = max(self.exp, o.exp)
        return Dyadic((self.num << (e - self.exp)) - (o.num << (e - o.exp)), e)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Fraction):
                return other - self.as_fraction()
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.as_fraction() * other
            return NotImplemented
        return Dyadic(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __pos__(self):
        return self

    def __abs__(self):
        return Dyadic(abs(self.num), self.exp)

    def scale_pow2(self, j):
        """Exact multiplication by 2**j (j may be negative)."""
        return Dyadic(self.num, self.exp - j)

    def half(self):
        return Dyadic(self.num, self.exp + 1)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return Dyadic(self.num ** n, self.exp * n)

    # division only where it stays exact inside the dyadics
    def __truediv__(self, other):
        q = self.as_fraction() / (other.as_fraction()
                                  if isinstance(other, Dyadic) else other)
        return q

    def __rtruediv__(self, other):
        return other / self.as_fraction()

    def __floor__(self):
        return self.num >> self.exp

    def __ceil__(self):
        return -((-self.num) >> self.exp)

    def __trunc__(self):
        n = self.__floor__()
        return n if self >= 0 else self.__ceil__()

    def __round__(self, ndigits=None):
        raise TypeError("round() is ambiguous for Dyadic; use round_to_grid")

    def __float__(self):
        raise TypeError("Dyadic refuses float conversion; the core is "
                        "float-free by design")

    # -- comparisons -------------------------------------------------------

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (Fraction, numbers.Rational)):
                lhs = self.num * other.denominator
                rhs = other.numerator << self.exp
                return (lhs > rhs) - (lhs < rhs)
            return None
        e = max(self.exp, o.exp)
        lhs = self.num << (e - self.exp)
        rhs = o.num << (e - o.exp)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        # must agree with Fraction/int hashing since we compare equal to them
        return hash(self.as_fraction())

    # -- rendering ---------------------------------------------------------

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self):
        return f"{self.num}/{1 << self.exp}"

    def binary(self):
        """Binary positional rendering, e.g. 5/8 -> "0.101"."""
        if self.num < 0:
            return "-" + (-self).binary()
        whole = self.num >> self.exp
        frac = self.num - (whole << self.exp)
        if self.exp == 0:
            return str(whole)
        return f"{whole}.{frac:0{self.exp}b}"


# Registration (not subclassing) keeps the class free of the ABC's float
# protocol while letting Fraction compare against Dyadic exactly.
numbers.Rational.register(Dyadic)

ZERO = Dyadic(0)
ONE = Dyadic(1)


def parse_rational(text):
    """Parse "p" or "p/q" into an exact Fraction (any denominator)."""
    m = _RAT_RE.match(text.strip())
    if not m:
        raise ParseError(f"cannot parse rational {text!r}")
    q = int(m.group(2)) if m.group(2) else 1
    if q == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), q)


def fmt_rational(q):
    """Render an exact rational as "p/q" (denominator always shown)."""
    return f"{q.numerator}/{q.denominator}"


class Word:
    """A finite binary string; doubles as the interval ``[0.w, 0.w+2^-|w|]``.

    Stored as ``(bits-as-integer, length)`` so leading zeros are significant:
    "0" and "00" are distinct words with distinct intervals.
    """

    __slots__ = ("k", "n")

    def __init__(self, k, n):
        if n < 0 or k < 0 or k >> n:
            raise ValueError(f"invalid word ({k}, {n})")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @staticmethod
    def parse(text):
        text = text.strip()
        if text in ("λ", "lambda", "-", ""):
            return EMPTY
        if not _WORD_RE.match(text):
            raise ParseError(f"word must be over {{0,1}}: {text!r}")
        return Word(int(text, 2), len(text))

    @staticmethod
    def from_bits(bits):
        k = 0
        n = 0
        for b in bits:
            k = (k << 1) | (1 if b else 0)
            n += 1
        return Word(k, n)

    @staticmethod
    def from_point(q, length=None):
        """The word w with 0.w == q; shortest one unless a length is given."""
        d = q if isinstance(q, Dyadic) else Dyadic.from_fraction(Fraction(q))
        if not (ZERO <= d < ONE):
            raise ValueError(f"no word has value {d}")
        if length is None:
            length = d.exp
        if length < d.exp:
            raise ValueError(f"{d} needs at least {d.exp} bits")
        return Word(d.num << (length - d.exp), length)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.k >> (self.n - 1 - i)) & 1

    def __iter__(self):
        for i in range(self.n):
            yield (self.k >> (self.n - 1 - i)) & 1

    def __eq__(self, other):
        return (isinstance(other, Word) and self.k == other.k
                and self.n == other.n)

    def __hash__(self):
        return hash((self.k, self.n))

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __str__(self):
        return format(self.k, f"0{self.n}b") if self.n else "λ"

    def __add__(self, other):
        if isinstance(other, Word):
            return Word((self.k << other.n) | other.k, self.n + other.n)
        return NotImplemented

    def append(self, bit):
        return Word((self.k << 1) | (1 if bit else 0), self.n + 1)

    def prefix(self, length):
        return Word(self.k >> (self.n - length), length)

    def prefixes(self):
        """All prefixes from λ up to the word itself, in order."""
        return [self.prefix(i) for i in range(self.n + 1)]

    def is_prefix_of(self, other):
        return other.n >= self.n and (other.k >> (other.n - self.n)) == self.k

    def is_all_ones(self):
        return self.k == (1 << self.n) - 1

    def strip_trailing_zeros(self):
        k, n = self.k, self.n
        if k == 0:
            return EMPTY
        tz = (k & -k).bit_length() - 1
        return Word(k >> tz, n - tz)

    def value(self):
        """The dyadic rational 0.w."""
        return Dyadic(self.k, self.n)


EMPTY = Word(0, 0)


def all_words(max_len, min_len=0):
    """Every word with min_len <= |w| <= max_len, in (length, value) order."""
    for n in range(min_len, max_len + 1):
        for k in range(1 << n):
            yield Word(k, n)


def word_value(w):
    """The rational 0.w, exactly."""
    return w.value()


def gamma(w):
    """The closed dyadic interval [0.w, 0.w + 2^-|w|] as a (lo, hi) pair."""
    return Dyadic(w.k, w.n), Dyadic(w.k + 1, w.n)


def lex_successor(w):
    """Same-length word x' with 0.x' = 0.x + 2^-|x|; None for 1^n."""
    if w.is_all_ones():
        return None
    return Word(w.k + 1, w.n)


@dataclass(frozen=True)
class GridPoint:
    """A dyadic rational on the 2^-grid grid (value * 2**grid is integral)."""

    value: Dyadic
    grid: int

    def __post_init__(self):
        if self.grid < 0:
            raise ValueError("grid exponent must be nonnegative")
        if self.value.exp > self.grid:
            raise ValueError(f"{self.value} is not on the 2^-{self.grid} grid")

    @property
    def index(self):
        """value * 2**grid as an integer."""
        return self.value.num << (self.grid - self.value.exp)


def round_to_grid(q, m):
    """Nearest multiple of 2^-m to the exact rational q, ties toward +inf.

    The result is within 2^-(m+1) of q.
    """
    if m < 0:
        raise ValueError("grid exponent must be nonnegative")
    if isinstance(q, Dyadic):
        q = q.as_fraction()
    scaled = q * (1 << m) + Fraction(1, 2)
    k = scaled.numerator // scaled.denominator  # floor
    return GridPoint(Dyadic(k, m), m)


def clamp_unit(a, b):
    """Force grid points into 0 <= a <= b <= 1, first a then b.

    Order matters: b is clamped below by the already-clamped a.
    """
    if a.grid != b.grid:
        raise ValueError("clamp_unit needs a shared grid exponent")
    m = a.grid
    av = min(max(a.value, ZERO), ONE)
    bv = min(max(av, b.value), ONE)
    return GridPoint(Dyadic(av), m), GridPoint(Dyadic(bv), m)


def minimal_cover(a, b, m=None):
    """Prefix-minimal words w with interval(w) inside [a, b], left to right.

    a and b must be on the 2^-m grid with 0 <= a <= b <= 1.  The greedy scan
    repeatedly takes the shortest word whose interval starts at the running
    position and stays inside [a, b].  The result S satisfies: the intervals
    tile [a, b] exactly (empty when a == b), every length is <= m, no length
    occurs more than twice, |S| <= 2m+1, and sum(2^-|w|) == b - a.
    """
    if isinstance(a, GridPoint):
        if m is None:
            m = a.grid
        a = a.value
    if isinstance(b, GridPoint):
        b = b.value
    if m is None:
        raise ValueError("grid exponent required")
    a, b = Dyadic(a), Dyadic(b)
    if not (ZERO <= a <= b <= ONE):
        raise ValueError(f"need 0 <= {a} <= {b} <= 1")
    if a.exp > m or b.exp > m:
        raise ValueError("endpoints must lie on the 2^-m grid")

    cover = []
    z = a
    while z < b:
        for length in range(z.exp, m + 1):
            step = Dyadic(1, length)
            if z + step <= b:
                cover.append(Word(z.num << (length - z.exp), length))
                z = z + step
                break
        else:  # unreachable for on-grid inputs: length == m always fits
            raise AssertionError("greedy cover failed to advance")
    return cover


def affine_transform(x, j, a):
    """Exact 2**j * x + a for dyadic x and a and integer j."""
    return x.scale_pow2(j) + a


def exact_ceil_lg(q):
    """Smallest integer t with 2**t >= q, for rational q > 0.

    Pure integer power comparisons; no logarithms anywhere.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError("exact_ceil_lg needs a positive rational")
    p, s = q.numerator, q.denominator
    t = p.bit_length() - s.bit_length() - 1  # 2**t < q always
    while not ((s << t) >= p if t >= 0 else s >= (p << -t)):
        t += 1
    return t
