"""Short Weierstrass curves y^2 = x^3 + Ax + B over Z[i] and their points.

Curves with A = 0 or B = 0 admit extra twists over Q(i); like the counting
convention this package follows, only the identification (A, B) ~ (A, -B)
is made.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import DomainError, SingularCurveError, UsageError
from .gaussian import (
    ONE,
    ZERO,
    GaussianInt,
    GaussianRational,
    canonical_associate,
    factor,
    gcd,
    kth_power_part,
    parse_gaussian,
    parse_rational,
)

__all__ = [
    "Curve",
    "Point",
    "INFINITY",
    "IsoClass",
    "discriminant_quantity",
    "height",
    "is_minimal",
    "minimalize",
    "iso_class",
    "sign_canonical_b",
    "on_curve",
    "negate",
    "add",
    "scalar_mul",
    "point_order",
    "parse_curve",
    "format_point",
]


@dataclass(frozen=True)
class Curve:
    """The pair (A, B).  Singular pairs are representable; ops that need a
    genuine elliptic curve raise :class:`SingularCurveError`."""

    A: GaussianInt
    B: GaussianInt

    def __init__(self, A, B):
        object.__setattr__(self, "A", GaussianInt.coerce(A))
        object.__setattr__(self, "B", GaussianInt.coerce(B))

    def is_singular(self) -> bool:
        return not discriminant_quantity(self)

    def require_nonsingular(self) -> "Curve":
        if self.is_singular():
            raise SingularCurveError(f"{self} is singular (4A^3 + 27B^2 = 0)")
        return self

    def rhs(self, x):
        """x^3 + A x + B."""
        return x * x * x + x * self.A + self.B

    def __str__(self):
        return f"[{self.A},{self.B}]"


def parse_curve(text: str) -> Curve:
    m = re.fullmatch(r"\s*\[\s*([^,\]]+?)\s*,\s*([^,\]]+?)\s*\]\s*", text)
    if not m:
        raise ValueError(f"expected [A,B], got {text!r}")
    return Curve(parse_gaussian(m.group(1)), parse_gaussian(m.group(2)))


def discriminant_quantity(c: Curve) -> GaussianInt:
    """4A^3 + 27B^2 (no -16 normalization; only its vanishing matters)."""
    return 4 * c.A**3 + 27 * c.B**2


def height(c: Curve) -> int:
    return max(c.A.norm() ** 3, c.B.norm() ** 2)


def _scaling_divisor(c: Curve) -> GaussianInt:
    """Largest canonical d with d^4 | A and d^6 | B."""
    A, B = c.A, c.B
    if not A and not B:
        raise DomainError("A and B are both zero")
    if not A:
        return kth_power_part(B, 6)[0]
    if not B:
        return kth_power_part(A, 4)[0]
    d = ONE
    for p, _ in factor(gcd(A, B)):
        ea = 0
        a = A
        while p.value.divides(a):
            a = a.exact_div(p.value)
            ea += 1
        eb = 0
        b = B
        while p.value.divides(b):
            b = b.exact_div(p.value)
            eb += 1
        d = d * p.value ** min(ea // 4, eb // 6)
    return canonical_associate(d)[0]


def is_minimal(c: Curve) -> bool:
    """No prime p has p^12 | gcd(A^3, B^2)."""
    return _scaling_divisor(c) == ONE


def minimalize(c: Curve) -> Curve:
    c.require_nonsingular()
    d = _scaling_divisor(c)
    if d == ONE:
        return c
    return Curve(c.A.exact_div(d**4), c.B.exact_div(d**6))


def sign_canonical_b(B: GaussianInt) -> GaussianInt:
    """The lexicographically larger of B and -B (on (re, im))."""
    return B if (B.re, B.im) >= (-B.re, -B.im) else -B


@dataclass(frozen=True)
class IsoClass:
    rep: Curve

    def __str__(self):
        return str(self.rep)


def iso_class(c: Curve) -> IsoClass:
    if not is_minimal(c):
        raise UsageError(f"{c} is not minimal; call minimalize first")
    return IsoClass(Curve(c.A, sign_canonical_b(c.B)))


# ---------------------------------------------------------------------------
# points and the group law


@dataclass(frozen=True)
class Point:
    """An affine point (x, y), or the point at infinity when both are None."""

    x: Optional[GaussianRational] = None
    y: Optional[GaussianRational] = None

    def __init__(self, x=None, y=None):
        if (x is None) != (y is None):
            raise ValueError("give both coordinates or neither")
        if x is not None:
            x = GaussianRational.coerce(x)
            y = GaussianRational.coerce(y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        return format_point(self)


INFINITY = Point()

PointLike = Union[Point, tuple]


def format_point(P: Point) -> str:
    if P.is_infinity:
        return "O"
    return f"({P.x},{P.y})"


def parse_point(text: str) -> Point:
    text = text.strip()
    if text == "O":
        return INFINITY
    m = re.fullmatch(r"\((.+),(.+)\)", text.replace(" ", ""))
    if not m:
        raise ValueError(f"bad point {text!r}")
    return Point(parse_rational(m.group(1)), parse_rational(m.group(2)))


def _as_point(P) -> Point:
    if isinstance(P, Point):
        return P
    return Point(*P)


def on_curve(c: Curve, P) -> bool:
    P = _as_point(P)
    if P.is_infinity:
        return True
    return P.y * P.y == c.rhs(P.x)


def _check(c: Curve, P: Point):
    if not on_curve(c, P):
        raise DomainError(f"{P} is not on {c}")


def negate(c: Curve, P) -> Point:
    P = _as_point(P)
    if P.is_infinity:
        return P
    return Point(P.x, -P.y)


def _add_unchecked(c: Curve, P: Point, Q: Point) -> Point:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return INFINITY
        slope = (3 * P.x * P.x + c.A) / (2 * P.y)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return Point(x3, y3)


def add(c: Curve, P, Q) -> Point:
    """Chord-tangent sum P + Q; both points must lie on c."""
    P = _as_point(P)
    Q = _as_point(Q)
    _check(c, P)
    _check(c, Q)
    return _add_unchecked(c, P, Q)


def scalar_mul(c: Curve, k: int, P) -> Point:
    P = _as_point(P)
    _check(c, P)
    if k < 0:
        k = -k
        P = negate(c, P)
    result = INFINITY
    base = P
    while k:
        if k & 1:
            result = _add_unchecked(c, result, base)
        k >>= 1
        if k:
            base = _add_unchecked(c, base, base)
    return result


def point_order(c: Curve, P, bound: int = 18) -> Optional[int]:
    """Exact order of P if it is at most ``bound``, else None."""
    P = _as_point(P)
    _check(c, P)
    Q = P
    for n in range(1, bound + 1):
        if Q.is_infinity:
            return n
        Q = _add_unchecked(c, Q, P)
    return None


__all__ += ["parse_point", "ZERO"]
