"""Exact arithmetic in the Gaussian integers Z[i] and the field Q(i).

Values are immutable.  Every nonzero Gaussian integer has a unique canonical
associate in the quarter plane ``re > 0, im >= 0``; gcds, factorizations and
power-free parts are always reported in that normal form so results are
reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import factorint

from .errors import DomainError, UsageError

__all__ = [
    "GaussianInt",
    "GaussianRational",
    "GaussianPrime",
    "Factorization",
    "I",
    "UNITS",
    "norm",
    "canonical_associate",
    "euclid_divmod",
    "gcd",
    "lcm",
    "factor",
    "valuation",
    "kth_power_part",
    "divisors",
    "parse_gaussian",
    "parse_rational",
    "gaussian_primes_up_to",
]


def _round_half_even(n: int, d: int) -> int:
    """Nearest integer to n/d (d > 0), ties to even."""
    q, r = divmod(n, d)
    twice = 2 * r
    if twice > d or (twice == d and q & 1):
        q += 1
    return q


class GaussianInt:
    """An element ``re + im*i`` of Z[i] with arbitrary-precision parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianInt is immutable")

    @classmethod
    def coerce(cls, value) -> GaussianInt:
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, GaussianRational):
            if value.den == ONE:
                return value.num
            raise ValueError(f"{value} is not integral")
        if isinstance(value, str):
            return parse_gaussian(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianInt")

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re + other, self.im)
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re - other, self.im)
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return GaussianInt(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        if isinstance(other, GaussianInt):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianInt(a * c - b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent in Z[i]; use GaussianRational")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __floordiv__(self, other):
        return euclid_divmod(self, GaussianInt.coerce(other))[0]

    def __mod__(self, other):
        return euclid_divmod(self, GaussianInt.coerce(other))[1]

    def __truediv__(self, other):
        return GaussianRational(self, GaussianInt.coerce(other))

    def __rtruediv__(self, other):
        return GaussianRational(GaussianInt.coerce(other), self)

    # comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    # helpers --------------------------------------------------------------
    def conjugate(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.re * self.re + self.im * self.im == 1

    def divides(self, other) -> bool:
        """True iff self | other in Z[i]."""
        other = GaussianInt.coerce(other)
        n = self.norm()
        if n == 0:
            return not other
        p = other * self.conjugate()
        return p.re % n == 0 and p.im % n == 0

    def exact_div(self, other) -> GaussianInt:
        """self / other, which must be exact."""
        other = GaussianInt.coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[i]")
        p = self * other.conjugate()
        qr, rr = divmod(p.re, n)
        qi, ri = divmod(p.im, n)
        if rr or ri:
            raise ValueError(f"{other} does not divide {self}")
        return GaussianInt(qr, qi)

    def key(self):
        """Deterministic sort key: norm, then (re, im)."""
        return (self.norm(), self.re, self.im)

    def __str__(self):
        return format_gaussian(self)

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, GaussianInt(-1, 0), GaussianInt(0, -1))


def norm(z) -> int:
    z = GaussianInt.coerce(z)
    return z.re * z.re + z.im * z.im


def canonical_associate(z) -> tuple[GaussianInt, GaussianInt]:
    """Return ``(c, u)`` with ``c = u*z`` in the quarter plane re > 0, im >= 0."""
    z = GaussianInt.coerce(z)
    if not z:
        return ZERO, ONE
    for u in UNITS:
        c = u * z
        if c.re > 0 and c.im >= 0:
            return c, u
    raise AssertionError("unreachable")


def euclid_divmod(a, b) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division ``a = q*b + r`` with ``norm(r) <= norm(b)/2``.

    Each component of ``a/b`` is rounded to the nearest integer, ties to even.
    """
    a = GaussianInt.coerce(a)
    b = GaussianInt.coerce(b)
    n = b.norm()
    if n == 0:
        raise UsageError("Euclidean division by zero")
    p = a * b.conjugate()
    q = GaussianInt(_round_half_even(p.re, n), _round_half_even(p.im, n))
    return q, a - q * b


def gcd(a, b) -> GaussianInt:
    a = GaussianInt.coerce(a)
    b = GaussianInt.coerce(b)
    if not a and not b:
        raise DomainError("gcd(0, 0) is undefined")
    ar, ai, br, bi = a.re, a.im, b.re, b.im
    if ai == 0 and bi == 0:
        return GaussianInt(math.gcd(ar, br), 0)
    # pull out the common rational content first; it keeps the loop short
    c = math.gcd(math.gcd(ar, ai), math.gcd(br, bi))
    ar, ai, br, bi = ar // c, ai // c, br // c, bi // c
    while br or bi:
        n = br * br + bi * bi
        qr = _round_half_even(ar * br + ai * bi, n)
        qi = _round_half_even(ai * br - ar * bi, n)
        ar, ai, br, bi = br, bi, ar - qr * br + qi * bi, ai - qr * bi - qi * br
    return canonical_associate(GaussianInt(ar * c, ai * c))[0]


def lcm(a, b) -> GaussianInt:
    a = GaussianInt.coerce(a)
    b = GaussianInt.coerce(b)
    if not a or not b:
        return ZERO
    return canonical_associate((a * b).exact_div(gcd(a, b)))[0]


# ---------------------------------------------------------------------------
# primes and factorization


@dataclass(frozen=True)
class GaussianPrime:
    value: GaussianInt
    kind: str  # "ramified", "split" or "inert"

    def __post_init__(self):
        if self.kind not in ("ramified", "split", "inert"):
            raise ValueError(f"unknown prime kind {self.kind!r}")

    @property
    def norm(self) -> int:
        return self.value.norm()

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Factorization:
    unit: GaussianInt
    factors: tuple[tuple[GaussianPrime, int], ...]

    def expand(self) -> GaussianInt:
        z = self.unit
        for p, e in self.factors:
            z = z * p.value**e
        return z

    def __iter__(self):
        return iter(self.factors)


def _sqrt_minus_one(p: int) -> int:
    """A square root of -1 modulo a prime p = 1 (mod 4)."""
    for c in range(2, p):
        s = pow(c, (p - 1) // 4, p)
        if s * s % p == p - 1:
            return s
    raise ValueError(f"{p} is not a prime congruent to 1 mod 4")


@lru_cache(maxsize=4096)
def split_rational_prime(p: int) -> tuple[GaussianPrime, ...]:
    """The canonical Gaussian primes above the rational prime p."""
    if p == 2:
        return (GaussianPrime(GaussianInt(1, 1), "ramified"),)
    if p % 4 == 3:
        return (GaussianPrime(GaussianInt(p, 0), "inert"),)
    s = _sqrt_minus_one(p)
    pi = gcd(GaussianInt(p, 0), GaussianInt(s, 1))
    other = canonical_associate(pi.conjugate())[0]
    pair = sorted([pi, other], key=GaussianInt.key)
    return tuple(GaussianPrime(v, "split") for v in pair)


def _strip(z: GaussianInt, p: GaussianInt) -> tuple[GaussianInt, int]:
    e = 0
    n = p.norm()
    pc = p.conjugate()
    while True:
        t = z * pc
        if t.re % n or t.im % n:
            return z, e
        z = GaussianInt(t.re // n, t.im // n)
        e += 1


def factor(z) -> Factorization:
    """Factor a nonzero Gaussian integer into canonical primes times a unit."""
    z = GaussianInt.coerce(z)
    if not z:
        raise DomainError("cannot factor 0")
    rest = z
    factors = []
    for p in sorted(factorint(z.norm())):
        for gp in split_rational_prime(p):
            rest, e = _strip(rest, gp.value)
            if e:
                factors.append((gp, e))
    if not rest.is_unit():
        raise AssertionError(f"factorization of {z} left cofactor {rest}")
    factors.sort(key=lambda fe: fe[0].value.key())
    return Factorization(rest, tuple(factors))


def valuation(z, p) -> int:
    """Exponent of the prime p in z (z a nonzero GaussianInt or GaussianRational)."""
    pv = p.value if isinstance(p, GaussianPrime) else GaussianInt.coerce(p)
    if isinstance(z, GaussianRational):
        if not z:
            raise DomainError("valuation of 0 is undefined")
        return _strip(z.num, pv)[1] - _strip(z.den, pv)[1]
    z = GaussianInt.coerce(z)
    if not z:
        raise DomainError("valuation of 0 is undefined")
    return _strip(z, pv)[1]


def kth_power_part(z, k: int) -> tuple[GaussianInt, GaussianInt]:
    """Split ``z = unit * d**k * rest`` with d maximal; both returned canonical."""
    if k < 1:
        raise ValueError("k must be positive")
    if not GaussianInt.coerce(z):
        raise DomainError("kth_power_part of 0 is undefined")
    fac = factor(z)
    d = ONE
    rest = ONE
    for p, e in fac:
        q, r = divmod(e, k)
        d = d * p.value**q
        rest = rest * p.value**r
    return canonical_associate(d)[0], canonical_associate(rest)[0]


def divisors(z) -> list[GaussianInt]:
    """All canonical divisors of a nonzero Gaussian integer, sorted by key."""
    out = [ONE]
    for p, e in factor(z):
        pw = [p.value**j for j in range(e + 1)]
        out = [d * q for d in out for q in pw]
    return sorted((canonical_associate(d)[0] for d in out), key=GaussianInt.key)


def gaussian_primes_up_to(bound: int) -> list[GaussianInt]:
    """Canonical Gaussian primes of norm <= bound, ordered by key."""
    out = []
    if bound >= 2:
        out.append(GaussianInt(1, 1))
    sieve = bytearray([1]) * (bound + 1)
    for p in range(3, bound + 1):
        if not sieve[p] or p % 2 == 0:
            continue
        for mult in range(p * p, bound + 1, p):
            sieve[mult] = 0
        if p % 4 == 1:
            out.extend(gp.value for gp in split_rational_prime(p))
        elif p * p <= bound:
            out.append(GaussianInt(p, 0))
    return sorted(out, key=GaussianInt.key)


# ---------------------------------------------------------------------------
# Q(i)


class GaussianRational:
    """An element num/den of Q(i) kept in lowest terms with canonical den."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = GaussianInt.coerce(num)
        den = GaussianInt.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = ZERO, ONE
        elif num.im == 0 and den.im == 0:
            # both rational: plain integer reduction, positive denominator
            n, d = num.re, den.re
            g = math.gcd(n, d) if d > 0 else -math.gcd(n, d)
            num, den = (GaussianInt(n // g), GaussianInt(d // g)) if g != 1 else (num, den)
        elif den != ONE:
            g = gcd(num, den)
            if g != ONE:
                num = num.exact_div(g)
                den = den.exact_div(g)
            den, u = canonical_associate(den)
            num = num * u
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _integral(cls, num: GaussianInt) -> GaussianRational:
        # skips normalization: num/1 is already in lowest terms
        r = object.__new__(cls)
        object.__setattr__(r, "num", num)
        object.__setattr__(r, "den", ONE)
        return r

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int):
            return cls._integral(GaussianInt(value))
        if isinstance(value, GaussianInt):
            return cls._integral(value)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, str):
            return parse_rational(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            if self.den == ONE:
                return GaussianRational._integral(self.num + other.num)
            return GaussianRational(self.num + other.num, self.den)
        return GaussianRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = object.__new__(GaussianRational)
        object.__setattr__(r, "num", -self.num)
        object.__setattr__(r, "den", self.den)
        return r

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == ONE and other.den == ONE:
            return GaussianRational._integral(self.num * other.num)
        return GaussianRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(self.den**-k, self.num**-k)
        return GaussianRational(self.num**k, self.den**k)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, GaussianInt)):
            return self.den == ONE and self.num == other
        return NotImplemented

    def __hash__(self):
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def is_integral(self) -> bool:
        return self.den == ONE

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.num.conjugate(), self.den.conjugate())

    def norm(self):

        return Fraction(self.num.norm(), self.den.norm())

    def __complex__(self):
        return complex(self.num.re, self.num.im) / complex(self.den.re, self.den.im)

    def __str__(self):
        return format_rational(self)

    def __repr__(self):
        return f"GaussianRational({self.num!r}, {self.den!r})"


# ---------------------------------------------------------------------------
# text grammar: "3-4i", "0", "i", "-i", "(1+2i)/5", "-2/27"


def format_gaussian(z: GaussianInt) -> str:
    a, b = z.re, z.im
    if b == 0:
        return str(a)
    if b == 1:
        imag = "i"
    elif b == -1:
        imag = "-i"
    else:
        imag = f"{b}i"
    if a == 0:
        return imag
    if imag.startswith("-"):
        return f"{a}{imag}"
    return f"{a}+{imag}"


def _wrap(z: GaussianInt) -> str:
    s = format_gaussian(z)
    return f"({s})" if z.re and z.im else s


def format_rational(q: GaussianRational) -> str:
    if q.den == ONE:
        return format_gaussian(q.num)
    return f"{_wrap(q.num)}/{_wrap(q.den)}"


_GAUSS_RE = re.compile(
    r"""^\s*(?:
        (?P<re>[+-]?\d+)(?:(?P<isign>[+-])(?P<im>\d*)i)?   # a, a+bi, a-i
      | (?P<only>[+-]?\d*)i                               # bi, i, -i
    )\s*$""",
    re.VERBOSE,
)


def parse_gaussian(text: str) -> GaussianInt:
    """Parse the ``a+bi`` grammar used on every text surface."""
    m = _GAUSS_RE.match(text)
    if not m:
        raise ValueError(f"not a Gaussian integer: {text!r}")
    if m.group("only") is not None:
        coef = m.group("only")
        if coef in ("", "+"):
            return GaussianInt(0, 1)
        if coef == "-":
            return GaussianInt(0, -1)
        return GaussianInt(0, int(coef))
    a = int(m.group("re"))
    if m.group("isign") is None:
        return GaussianInt(a, 0)
    b = int(m.group("im") or "1")
    return GaussianInt(a, -b if m.group("isign") == "-" else b)


def _parse_factor(text: str) -> GaussianInt:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return parse_gaussian(text)


def parse_rational(text: str) -> GaussianRational:
    """Parse ``num`` or ``num/den`` where each side may be parenthesised."""
    text = text.strip()
    depth = 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return GaussianRational(_parse_factor(text[:pos]), _parse_factor(text[pos + 1 :]))
    return GaussianRational(_parse_factor(text))


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
