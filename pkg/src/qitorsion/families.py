"""Universal torsion families and their short Weierstrass form.

A family is a pair of polynomials f(t), g(t) so that y^2 = x^3 + u^w1 f(t) x
+ u^w2 g(t) carries a prescribed torsion subgroup for generic t.  Case 1
families come from Tate normal forms y^2 + a xy + b y = x^3 + d x^2 and are
converted here; the remaining groups are stored as data (hyperelliptic
parameter curves, Mordell-Weil groups of elliptic parameter curves).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional, Union

from .curve import Curve, Point, minimalize, point_order
from .errors import DataIntegrityError, DegenerateParameterError, DomainError
from .gaussian import (
    ONE,
    GaussianInt,
    GaussianRational,
    canonical_associate,
    factor,
    gcd,
    parse_rational,
)
from .poly import RationalPolynomial, poly_gcd
from .torsion import TorsionLabel, _isqrt_gaussian, _two_primary

__all__ = [
    "RationalFunction",
    "TateForm",
    "ShortFamily",
    "FamilyRecord",
    "Case2Curve",
    "Case3Record",
    "TABLE_1",
    "D_VALUES",
    "clear_denominators",
    "convert_tate",
    "tate_to_short",
    "exponent",
    "specialize",
    "minimal_scaling",
    "case2_point_search",
    "builtin_families",
    "lookup",
    "d_value",
]

Poly = RationalPolynomial
_T = Poly([0, 1])


# ---------------------------------------------------------------------------
# rational functions in t


class RationalFunction:
    """num/den over Q(i)[t] with coprime parts and monic den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Poly.coerce(num)
        den = Poly([1]) if den is None else Poly.coerce(den)
        if not den:
            raise DomainError("zero denominator")
        g = poly_gcd(num, den) if num else den.monic()
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading
        object.__setattr__(self, "num", num.scale(lead.inverse()))
        object.__setattr__(self, "den", den.scale(lead.inverse()))

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def coerce(cls, v) -> RationalFunction:
        return v if isinstance(v, RationalFunction) else cls(v)

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, o):
        o = RationalFunction.coerce(o)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, o):
        return self + (-RationalFunction.coerce(o))

    def __rsub__(self, o):
        return RationalFunction.coerce(o) - self

    def __mul__(self, o):
        o = RationalFunction.coerce(o)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = RationalFunction.coerce(o)
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den**-k, self.num**-k)
        return RationalFunction(self.num**k, self.den**k)

    def __eq__(self, o):
        try:
            o = RationalFunction.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, t) -> GaussianRational:
        d = self.den(t)
        if not d:
            raise DegenerateParameterError(f"denominator vanishes at t = {t}")
        return self.num(t) / d

    def __str__(self):
        if self.is_polynomial:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _parse_coeffs(text: str) -> Poly:
    return Poly([parse_rational(c) for c in text.split(",")])


def _parse_ratfun(text: str) -> RationalFunction:
    if ";" in text:
        num, den = text.split(";")
        return RationalFunction(_parse_coeffs(num), _parse_coeffs(den))
    return RationalFunction(_parse_coeffs(text))


def _format_coeffs(p: Poly) -> str:
    return ",".join(str(c) for c in p.coeffs) if p else "0"


# ---------------------------------------------------------------------------
# Tate normal form to short Weierstrass form


@dataclass(frozen=True)
class TateForm:
    """y^2 + a xy + b y = x^3 + d x^2 with a, b, d in Q(i)(t)."""

    a: RationalFunction
    b: RationalFunction
    d: RationalFunction

    def __init__(self, a, b, d):
        object.__setattr__(self, "a", RationalFunction.coerce(a))
        object.__setattr__(self, "b", RationalFunction.coerce(b))
        object.__setattr__(self, "d", RationalFunction.coerce(d))


@dataclass(frozen=True)
class ShortFamily:
    """Output of :func:`convert_tate`.

    ``u`` is the clearing polynomial, ``h`` the weighted common factor that was
    divided out afterwards, and (x0, y0) the image of the Tate point (0, 0).
    """

    f: Poly
    g: Poly
    u: Poly
    h: Poly
    x0: RationalFunction
    y0: RationalFunction

    @property
    def degenerate(self) -> bool:
        return not self.f and not self.g


def clear_denominators(tf: TateForm) -> tuple[TateForm, Poly]:
    """Rescale (x, y) -> (x/u^2, y/u^3) with u the lcm of the denominators, so
    a, b, d become a*u, b*u^3, d*u^2, all polynomials."""
    u = Poly([1])
    for q in (tf.a, tf.b, tf.d):
        u = (u * q.den).exact_div(poly_gcd(u, q.den))
    a1 = tf.a * u
    b1 = tf.b * u**3
    d1 = tf.d * u**2
    assert a1.is_polynomial and b1.is_polynomial and d1.is_polynomial
    return TateForm(a1, b1, d1), u.monic()


def _short_coefficients(a: Poly, b: Poly, d: Poly) -> tuple[Poly, Poly]:
    q = Fraction
    k = d * d * q(1, 3) + a**4 * q(1, 48) + a * a * d * q(1, 6) - a * b * q(1, 2)
    f = -k
    g = (
        (d * q(1, 3) + a * a * q(1, 12)) * k
        - a**6 * q(1, 1728)
        - a**4 * d * q(1, 144)
        - a * a * d * d * q(1, 36)
        - d**3 * q(1, 27)
        + b * b * q(1, 4)
    )
    return f, g


def _radical(p: Poly) -> Poly:
    if p.degree <= 0:
        return Poly([1])
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


def _part_with_multiplicity(rad: Poly, p: Poly, k: int) -> Poly:
    """Product of the irreducible factors of the squarefree ``rad`` that
    divide p at least k times."""
    q = rad
    rest = p
    for _ in range(k):
        q = poly_gcd(q, rest)
        if q.degree <= 0:
            return Poly([1])
        rest = rest.exact_div(q)
    return q


def weighted_reduce(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Divide out the largest h(t) with h^4 | f and h^6 | g."""
    h = Poly([1])
    while f and g:
        rad = _radical(poly_gcd(f, g))
        step = poly_gcd(_part_with_multiplicity(rad, f, 4), _part_with_multiplicity(rad, g, 6))
        if step.degree <= 0:
            break
        f = f.exact_div(step**4)
        g = g.exact_div(step**6)
        h = h * step
    return f, g, h


def _f_to_x_shift(a, d):
    # x_short = x_tate + a^2/12 + d/3; y_short = y_tate + (a x + b)/2
    return a * a * Fraction(1, 12) + d * Fraction(1, 3)


def convert_tate(tf: TateForm) -> ShortFamily:
    cleared, u = clear_denominators(tf)
    a, b, d = cleared.a.num, cleared.b.num, cleared.d.num
    f, g = _short_coefficients(a, b, d)
    if not f and not g:
        zero = RationalFunction(0)
        return ShortFamily(f, g, u, Poly([1]), zero, zero)
    f, g, h = weighted_reduce(f, g)
    x0 = RationalFunction(_f_to_x_shift(a, d), h * h)
    y0 = RationalFunction(b * Fraction(1, 2), h**3)
    return ShortFamily(f, g, u, h, x0, y0)


def tate_to_short(tf: TateForm) -> tuple[Poly, Poly]:
    """(f, g) of the short form y^2 = x^3 + f x + g.

    Non-polynomial input is cleared first; a common factor h with h^4 | f and
    h^6 | g is then divided out, which keeps the degrees minimal.
    """
    sf = convert_tate(tf)
    return sf.f, sf.g


# ---------------------------------------------------------------------------
# exponents


def exponent(r: int, s: int, weights=(4, 6)) -> tuple[int, int, Fraction]:
    """(n, m, d) with n/m = max(r/w1, s/w2) in lowest terms and
    d = 12n/(m+1) for weights (4,6), 6n/(m+1) for weights (2,3)."""
    if r < 0 or s < 0 or (r == 0 and s == 0):
        raise DomainError("degrees must be nonnegative and not both zero")
    w1, w2 = tuple(weights)
    if (w1, w2) == (4, 6):
        top = 12
    elif (w1, w2) == (2, 3):
        top = 6
    else:
        raise DomainError(f"unsupported weight scheme {weights}")
    ratio = max(Fraction(r, w1), Fraction(s, w2))
    n, m = ratio.numerator, ratio.denominator
    return n, m, Fraction(top * n, m + 1)


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class FamilyRecord:
    group: TorsionLabel
    f: Poly
    g: Poly
    weights: tuple[int, int] = (4, 6)
    x0: Optional[RationalFunction] = None
    y0: Optional[RationalFunction] = None
    source: Optional[TateForm] = None

    @property
    def r(self) -> int:
        return self.f.degree

    @property
    def s(self) -> int:
        return self.g.degree

    @property
    def n(self) -> int:
        return exponent(self.r, self.s, self.weights)[0]

    @property
    def m(self) -> int:
        return exponent(self.r, self.s, self.weights)[1]

    @property
    def d_exponent(self) -> Fraction:
        return exponent(self.r, self.s, self.weights)[2]

    @property
    def has_marked_point(self) -> bool:
        return self.x0 is not None


@dataclass(frozen=True)
class Case2Curve:
    group: TorsionLabel
    h: Poly

    @property
    def d_exponent(self) -> float:
        return math.inf

    def __str__(self):
        return f"s^2 = {self.h}"


@dataclass(frozen=True)
class Case3Record:
    group: TorsionLabel
    mw_group: TorsionLabel

    @property
    def d_exponent(self) -> float:
        return math.inf


# Published Case 1 data: group -> (r, s, n, m, 12n/(m+1)).
TABLE_1 = {
    "Z/4": (2, 3, 1, 2, 4),
    "Z/5": (4, 6, 1, 1, 6),
    "Z/6": (4, 6, 1, 1, 6),
    "Z/7": (8, 12, 2, 1, 12),
    "Z/8": (8, 12, 2, 1, 12),
    "Z/9": (12, 18, 3, 1, 18),
    "Z/10": (12, 18, 3, 1, 18),
    "Z/12": (16, 24, 4, 1, 24),
    "Z/2xZ/4": (4, 6, 1, 1, 6),
    "Z/2xZ/6": (8, 12, 2, 1, 12),
    "Z/2xZ/8": (16, 24, 4, 1, 24),
    "Z/4xZ/4": (8, 12, 2, 1, 12),
}

# Published growth exponents; groups with finitely many curves map to inf.
# Z/1, Z/2 and Z/3 are not tabulated.
D_VALUES = {
    "Z/4": 4,
    "Z/5": 6,
    "Z/6": 6,
    "Z/7": 12,
    "Z/8": 12,
    "Z/9": 18,
    "Z/10": 18,
    "Z/12": 24,
    "Z/2xZ/2": 3,
    "Z/2xZ/4": 6,
    "Z/2xZ/6": 12,
    "Z/2xZ/8": 24,
    "Z/4xZ/4": 12,
    "Z/11": math.inf,
    "Z/13": math.inf,
    "Z/14": math.inf,
    "Z/15": math.inf,
    "Z/16": math.inf,
    "Z/18": math.inf,
    "Z/2xZ/10": math.inf,
    "Z/2xZ/12": math.inf,
}


def _parse_fields(tokens) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, _, val = tok.partition("=")
        out[key] = val
    return out


def _load_text() -> str:
    return resources.files("qitorsion").joinpath("data/families.txt").read_text()


def load_families(text: str) -> tuple:
    records = []
    version = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("# format-version:"):
            version = int(line.split(":")[1])
        if not line or line.startswith("#"):
            continue
        kind, label, *rest = line.split()
        group = TorsionLabel.parse(label)
        kv = _parse_fields(rest)
        try:
            if kind == "tate":
                tf = TateForm(*(_parse_ratfun(kv[k]) for k in ("a", "b", "d")))
                sf = convert_tate(tf)
                records.append(FamilyRecord(group, sf.f, sf.g, (4, 6), sf.x0, sf.y0, tf))
            elif kind == "family":
                w = tuple(int(x) for x in kv["weights"].split(","))
                records.append(FamilyRecord(group, _parse_coeffs(kv["f"]), _parse_coeffs(kv["g"]), w))
            elif kind == "case2":
                records.append(Case2Curve(group, _parse_coeffs(kv["h"])))
            elif kind == "case3":
                records.append(Case3Record(group, TorsionLabel.parse(kv["mw"])))
            else:
                raise DataIntegrityError(f"line {lineno}: unknown record kind {kind!r}")
        except KeyError as exc:
            raise DataIntegrityError(f"line {lineno}: missing field {exc}") from None
    if version != 1:
        raise DataIntegrityError(f"unsupported family data version {version}")
    _validate(records)
    return tuple(records)


def _validate(records):
    seen = {}
    for rec in records:
        key = str(rec.group)
        if key in seen:
            raise DataIntegrityError(f"duplicate record for {key}")
        seen[key] = rec
        if isinstance(rec, FamilyRecord) and rec.source is not None:
            want = TABLE_1.get(key)
            got = (rec.r, rec.s, rec.n, rec.m, rec.d_exponent)
            if want is None or tuple(want) != got:
                raise DataIntegrityError(f"{key}: computed {got}, published {want}")
            if poly_gcd(rec.f, rec.g).degree != 0:
                raise DataIntegrityError(f"{key}: f and g share a factor")
        if isinstance(rec, Case2Curve):
            if rec.h.degree < 5 or not rec.h.is_squarefree():
                raise DataIntegrityError(f"{key}: parameter curve is not a squarefree h of degree >= 5")
    missing = set(TABLE_1) - set(seen)
    if missing:
        raise DataIntegrityError(f"missing Case 1 families: {sorted(missing)}")


@lru_cache(maxsize=1)
def builtin_families() -> tuple:
    """Every stored record: 12 Tate families, the Z/2xZ/2 family, three
    hyperelliptic parameter curves and five Mordell-Weil records."""
    return load_families(_load_text())


def lookup(group) -> Union[FamilyRecord, Case2Curve, Case3Record]:
    label = group if isinstance(group, TorsionLabel) else TorsionLabel.parse(group)
    for rec in builtin_families():
        if rec.group == label:
            return rec
    raise KeyError(str(label))


def d_value(group):
    """d(G) derived from the stored data: exponent() for families, inf for the
    Case 2/3 groups."""
    rec = lookup(group)
    if isinstance(rec, FamilyRecord):
        return rec.d_exponent
    return math.inf


# ---------------------------------------------------------------------------
# specialization


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def minimal_scaling(fr: FamilyRecord, t) -> GaussianInt:
    """Smallest canonical u (up to units) making u^w1 f(t), u^w2 g(t) integral."""
    t = GaussianRational.coerce(t)
    ft, gt = fr.f(t), fr.g(t)
    w1, w2 = fr.weights
    u = ONE
    primes = set()
    for val in (ft, gt):
        if val:
            primes.update(p.value for p, _ in factor(val.den))
    for p in sorted(primes, key=GaussianInt.key):
        need = 0
        for val, w in ((ft, w1), (gt, w2)):
            if val:
                v = _val(val, p)
                if v < 0:
                    need = max(need, _ceil_div(-v, w))
        u = u * p**need
    return canonical_associate(u)[0]


def _val(q: GaussianRational, p: GaussianInt) -> int:
    from .gaussian import valuation

    return valuation(q, p)


def specialize(fr: FamilyRecord, u, t) -> Curve:
    """A = u^w1 f(t), B = u^w2 g(t).  Raises DegenerateParameterError at the
    roots of g (B = 0 is counted apart from the family) and when the result
    is singular or not integral."""
    u = GaussianRational.coerce(u)
    t = GaussianRational.coerce(t)
    w1, w2 = fr.weights
    A = u**w1 * fr.f(t)
    B = u**w2 * fr.g(t)
    if not B:
        raise DegenerateParameterError(f"t = {t} is a root of g")
    if not A.is_integral() or not B.is_integral():
        raise DegenerateParameterError(f"u = {u}, t = {t} gives non-integral coefficients")
    c = Curve(A.num, B.num)
    if c.is_singular():
        raise DegenerateParameterError(f"t = {t} makes the specialization singular")
    return c


def marked_point(fr: FamilyRecord, u, t) -> Point:
    """Image of the Tate point (0, 0) on specialize(fr, u, t)."""
    if not fr.has_marked_point:
        raise DomainError(f"{fr.group} family has no marked point")
    u = GaussianRational.coerce(u)
    return Point(u * u * fr.x0(t), u**3 * fr.y0(t))


def specialize_minimal(fr: FamilyRecord, t) -> tuple[Curve, Optional[Point]]:
    """Integral minimal model at t together with the marked point on it."""
    t = GaussianRational.coerce(t)
    u = minimal_scaling(fr, t)
    c = specialize(fr, u, t)
    m = minimalize(c)
    P = None
    if fr.has_marked_point:
        P = marked_point(fr, u, t)
        if m != c:
            # A/d^4 = A' ; recover d from the ratio of nonzero coefficients
            d = _scaling_between(c, m)
            P = Point(P.x / d**2, P.y / d**3)
    return m, P


def _scaling_between(c: Curve, m: Curve) -> GaussianRational:
    from .curve import _scaling_divisor

    return GaussianRational(_scaling_divisor(c))


def contains_group(fr: FamilyRecord, curve: Curve, P: Point) -> bool:
    """Marked point has order m2 and the 2-primary part is large enough for
    the m1 factor."""
    grp = fr.group
    if point_order(curve, P, 18) != grp.m2:
        return False
    if grp.m1 == 1:
        return True
    two, k = _two_primary(curve)
    killed = 0
    for Q in two:
        o = point_order(curve, Q, 16)
        if grp.m1 % o == 0:
            killed += 1
    return killed >= grp.m1 * grp.m1


# ---------------------------------------------------------------------------
# Case 2 search


def case2_point_search(c: Case2Curve, H: int) -> list[tuple[GaussianRational, GaussianRational]]:
    """Affine points (s, t) on s^2 = h(t) with t = r/q, N(r) <= H, N(q) <= H."""
    if H < 1:
        raise DomainError("search bound must be at least 1")
    coeffs, D = c.h.integral_coeffs()
    deg = c.h.degree
    w = deg + (deg % 2)  # even weight: q^w is a square
    R = int(math.isqrt(H))
    nums = [GaussianInt(a, b) for a in range(-R, R + 1) for b in range(-R, R + 1) if a * a + b * b <= H]
    dens = [q for q in nums if q and canonical_associate(q)[0] == q]
    out = []
    for q in dens:
        qp = [q**j for j in range(w + 1)]
        for r in nums:
            if gcd(r, q) != ONE if r else q != ONE:
                continue
            # q^w D h(r/q), a Z[i] value; D h(t) = coeffs evaluated
            acc = GaussianInt(0)
            rp = ONE
            for k, ck in enumerate(coeffs):
                acc = acc + ck * rp * qp[w - k]
                rp = rp * r
            # h(t) = acc / (D q^w); square iff acc * D is a square (D q^w = D * square)
            val = acc * D
            root = _isqrt_gaussian(val.re, val.im)
            if root is None:
                continue
            t = GaussianRational(r, q)
            s = GaussianRational(GaussianInt(*root), D * qp[w // 2])
            out.append((s, t))
            if s:
                out.append((-s, t))
    out.sort(key=lambda st: (st[1].norm(), str(st[1]), str(st[0])))
    return out


__all__ += ["RationalFunction", "weighted_reduce", "marked_point", "specialize_minimal", "contains_group", "load_families"]
