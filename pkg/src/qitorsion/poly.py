"""Univariate polynomials with coefficients in Q(i)."""

from __future__ import annotations

import re
from functools import reduce

from .gaussian import ONE, ZERO, GaussianInt, GaussianRational, lcm, parse_rational

__all__ = ["RationalPolynomial", "poly_gcd", "parse_poly", "format_poly"]


def _q(c) -> GaussianRational:
    return GaussianRational.coerce(c)


class RationalPolynomial:
    """Polynomial in one variable; ``coeffs[k]`` multiplies ``t**k``.

    Trailing zeros are stripped so the zero polynomial has no coefficients
    and ``degree`` is ``len(coeffs) - 1`` (``-1`` for zero).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_q(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolynomial is immutable")

    @classmethod
    def constant(cls, c) -> RationalPolynomial:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> RationalPolynomial:
        return cls([0] * k + [c])

    @classmethod
    def coerce(cls, value) -> RationalPolynomial:
        if isinstance(value, RationalPolynomial):
            return value
        if isinstance(value, str):
            return parse_poly(value)
        return cls([value])

    # basic properties -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> GaussianRational:
        if not self.coeffs:
            return GaussianRational(0)
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return GaussianRational(0)

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            try:
                other = RationalPolynomial.coerce(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # ring operations --------------------------------------------------------
    def __add__(self, other):
        other = RationalPolynomial.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPolynomial([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-RationalPolynomial.coerce(other))

    def __rsub__(self, other):
        return RationalPolynomial.coerce(other) - self

    def __mul__(self, other):
        other = RationalPolynomial.coerce(other)
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial()
        out = [GaussianRational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RationalPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> RationalPolynomial:
        c = _q(c)
        return RationalPolynomial([c * a for a in self.coeffs])

    def __divmod__(self, other):
        other = RationalPolynomial.coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.leading.inverse()
        quot = [GaussianRational(0)] * max(0, len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            c = c * inv_lead
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> RationalPolynomial:
        q, r = divmod(self, other)
        if r:
            raise ValueError("polynomial division is not exact")
        return q

    def divides(self, other) -> bool:
        return not (RationalPolynomial.coerce(other) % self)

    def monic(self) -> RationalPolynomial:
        if not self:
            return self
        return self.scale(self.leading.inverse())

    def derivative(self) -> RationalPolynomial:
        return RationalPolynomial([c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation at a scalar or a polynomial."""
        if isinstance(x, RationalPolynomial):
            acc = RationalPolynomial()
            for c in reversed(self.coeffs):
                acc = acc * x + RationalPolynomial([c])
            return acc
        x = _q(x)
        acc = GaussianRational(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_squarefree(self) -> bool:
        return poly_gcd(self, self.derivative()).degree == 0

    def denominator(self) -> GaussianInt:
        """Canonical lcm of the coefficient denominators."""
        return reduce(lcm, (c.den for c in self.coeffs), ONE)

    def integral_coeffs(self) -> tuple[list[GaussianInt], GaussianInt]:
        """Return ``(coeffs, D)`` with ``D*self`` having Z[i] coefficients."""
        d = self.denominator()
        out = []
        for c in self.coeffs:
            out.append((c.num * d).exact_div(c.den))
        return out, d

    def homogenize(self, a, b, weight: int, m: int = 1):
        """Evaluate ``b**weight * self(a / b**m)`` exactly (needs ``m*degree <= weight``)."""
        a = _q(a)
        b = _q(b)
        if self.degree * m > weight:
            raise ValueError("weight too small for homogenization")
        total = GaussianRational(0)
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + c * a**k * b ** (weight - m * k)
        return total

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"RationalPolynomial({format_poly(self)!r})"


def poly_gcd(f, g) -> RationalPolynomial:
    """Monic gcd over Q(i); gcd(0, 0) is 0."""
    f = RationalPolynomial.coerce(f)
    g = RationalPolynomial.coerce(g)
    while g:
        # monic remainders keep the coefficient heights from growing
        f, g = g, (f % g).monic()
    return f.monic()


# ---------------------------------------------------------------------------
# text form: terms like "(1+2i)/5*t^3", "-2/27*t", "t^2", "3"


def format_poly(p: RationalPolynomial, var: str = "t") -> str:
    if not p:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = ""
        if (c.num.im == 0 and c.num.re < 0) or (c.num.re == 0 and c.num.im < 0):
            sign, c = "-", -c
        cs = str(c)
        if c.den == ONE and c.num.re and c.num.im:
            cs = f"({cs})"
        if k == 0:
            term = sign + cs
        else:
            mono = var if k == 1 else f"{var}^{k}"
            term = sign + (mono if c == 1 else f"{cs}*{mono}")
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += term if term.startswith("-") else "+" + term
    return out


_STAR_TERM = re.compile(r"(?:(?P<c>.+)\*)?(?P<v>[tx])(?:\^(?P<k>\d+))?")
_BARE_TERM = re.compile(r"(?P<c>[\d/]+)(?P<v>[tx])(?:\^(?P<k>\d+))?")


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and cur[-1] not in "*^/(":
            terms.append(cur)
            cur = ""
        cur += ch
    if cur:
        terms.append(cur)
    return terms


def parse_poly(text: str, var: str = "t") -> RationalPolynomial:
    """Parse a sum of terms ``c*t^k`` (also ``x`` as variable name)."""
    text = text.replace(" ", "").replace("**", "^")
    if not text:
        raise ValueError("empty polynomial")
    coeffs: dict[int, GaussianRational] = {}
    for term in _split_terms(text):
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        m = _STAR_TERM.fullmatch(term) or _BARE_TERM.fullmatch(term)
        if m:
            k = int(m.group("k") or 1)
            c = parse_rational(m.group("c")) if m.group("c") else GaussianRational(1)
        else:
            k = 0
            c = parse_rational(term)
        coeffs[k] = coeffs.get(k, GaussianRational(0)) + c * sign
    deg = max(coeffs) if coeffs else -1
    return RationalPolynomial([coeffs.get(k, ZERO) for k in range(deg + 1)])
