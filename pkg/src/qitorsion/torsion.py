"""Torsion subgroups of y^2 = x^3 + Ax + B over Q(i).

Strategy
--------
The 2-primary part is built breadth-first: the roots of the cubic give the
points of order 2, and each point Q of order 2^k is halved by solving the
quartic x(2P) = x(Q).  Odd primary parts come from the integral roots of the
division polynomials psi_9, psi_5, psi_7, psi_11, psi_13.  The possible groups
over Q(i) never contain Z/25, Z/27 or Z/l^2 for l >= 7, so these polynomials
see every odd-order point.

Every torsion point of a curve with Z[i] coefficients has an integral x
coordinate (odd order: the formal group has no torsion since e <= 1 < l - 1
for odd l; 2-power order: the halving quartic is monic over Z[i]).  Root
searches are therefore restricted to Gaussian integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import mpmath
import numpy as np
from sympy import ZZ
from sympy.polys.rings import ring

from .curve import INFINITY, Curve, Point, _add_unchecked, negate, point_order
from .errors import DomainError, InternalConsistencyError, UsageError
from .gaussian import (
    ONE,
    ZERO,
    GaussianInt,
    GaussianRational,
    canonical_associate,
    _sqrt_minus_one,
    divisors,
    factor,
)
from .poly import RationalPolynomial, poly_gcd

__all__ = [
    "TorsionLabel",
    "ALL_LABELS",
    "division_polynomial",
    "gaussian_rational_roots",
    "sqrt_in_Qi",
    "torsion_points",
    "torsion_structure",
    "TorsionResult",
    "compute_torsion",
]


# ---------------------------------------------------------------------------
# labels


_CYCLIC = tuple(range(1, 17)) + (18,)
_PRODUCT_2 = tuple(range(1, 7))


@dataclass(frozen=True, order=True)
class TorsionLabel:
    """Invariant factors (m1, m2) with m1 | m2; cyclic groups have m1 = 1."""

    m1: int
    m2: int

    def __post_init__(self):
        if (self.m1, self.m2) not in _ALLOWED:
            raise ValueError(f"Z/{self.m1}xZ/{self.m2} is not a torsion group over Q(i)")

    @classmethod
    def cyclic(cls, n: int) -> TorsionLabel:
        return cls(1, n)

    @classmethod
    def parse(cls, text: str) -> TorsionLabel:
        t = text.strip().replace(" ", "")
        m = re.fullmatch(r"Z/(\d+)(?:[xX×]Z/(\d+))?", t)
        if not m:
            raise ValueError(f"bad torsion label {text!r}")
        if m.group(2) is None:
            return cls(1, int(m.group(1)))
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def order(self) -> int:
        return self.m1 * self.m2

    @property
    def is_cyclic(self) -> bool:
        return self.m1 == 1

    @property
    def two_torsion_size(self) -> int:
        return 4 if self.m1 % 2 == 0 else (2 if self.m2 % 2 == 0 else 1)

    def contains(self, other: TorsionLabel) -> bool:
        """True when ``other`` embeds as a subgroup."""
        return self.m1 % other.m1 == 0 and self.m2 % other.m2 == 0

    def count_dividing(self, d: int) -> int:
        """Number of elements killed by d."""
        from math import gcd as igcd

        return igcd(d, self.m1) * igcd(d, self.m2)

    @property
    def index(self) -> int:
        return ALL_LABELS.index(self)

    def __str__(self):
        if self.m1 == 1:
            return f"Z/{self.m2}"
        return f"Z/{self.m1}xZ/{self.m2}"


_ALLOWED = frozenset(
    [(1, n) for n in _CYCLIC] + [(2, 2 * m) for m in _PRODUCT_2] + [(4, 4)]
)
ALL_LABELS: tuple[TorsionLabel, ...] = tuple(
    [TorsionLabel(1, n) for n in _CYCLIC]
    + [TorsionLabel(2, 2 * m) for m in _PRODUCT_2]
    + [TorsionLabel(4, 4)]
)


def label_for(m1: int, m2: int) -> TorsionLabel:
    try:
        return TorsionLabel(m1, m2)
    except ValueError as exc:
        raise InternalConsistencyError(str(exc)) from None


# ---------------------------------------------------------------------------
# division polynomials
#
# f_n = psi_n for odd n and psi_n / (2y) for even n, so every f_n lives in
# Z[x, A, B].  (2y)^4 is replaced by 16 F^2 with F = x^3 + Ax + B.

_R, _x, _A, _B = ring("x,A,B", ZZ)
_F = _x**3 + _A * _x + _B
_F2_16 = 16 * _F**2
_TEMPLATES = {
    0: _R(0),
    1: _R(1),
    2: _R(1),
    3: 3 * _x**4 + 6 * _A * _x**2 + 12 * _B * _x - _A**2,
    4: 2
    * (
        _x**6
        + 5 * _A * _x**4
        + 20 * _B * _x**3
        - 5 * _A**2 * _x**2
        - 4 * _A * _B * _x
        - 8 * _B**2
        - _A**3
    ),
}


def _template(n: int):
    if n in _TEMPLATES:
        return _TEMPLATES[n]
    m = n // 2
    if n % 2:
        a = _template(m + 2) * _template(m) ** 3
        b = _template(m - 1) * _template(m + 1) ** 3
        if m % 2 == 0:
            a = _F2_16 * a
        else:
            b = _F2_16 * b
        val = a - b
    else:
        val = _template(m) * (
            _template(m + 2) * _template(m - 1) ** 2 - _template(m - 2) * _template(m + 1) ** 2
        )
    _TEMPLATES[n] = val
    return val


@lru_cache(maxsize=None)
def _template_terms(n: int) -> tuple[int, tuple[tuple[int, int, int, int], ...]]:
    t = _template(n)
    terms = tuple((i, j, k, int(c)) for (i, j, k), c in t.terms())
    return max(i for i, _, _, _ in terms), terms


def _cmul(p, q):
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def _powers(z, k):
    out = [(1, 0)]
    for _ in range(k):
        out.append(_cmul(out[-1], z))
    return out


def _specialized(n: int, A: GaussianInt, B: GaussianInt) -> list[tuple[int, int]]:
    """Coefficients (ascending, as (re, im) pairs) of f_n at the given A, B."""
    deg, terms = _template_terms(n)
    maxj = max(j for _, j, _, _ in terms)
    maxk = max(k for _, _, k, _ in terms)
    Ap = _powers((A.re, A.im), maxj)
    Bp = _powers((B.re, B.im), maxk)
    re_ = [0] * (deg + 1)
    im_ = [0] * (deg + 1)
    for i, j, k, c in terms:
        ab = _cmul(Ap[j], Bp[k])
        re_[i] += c * ab[0]
        im_[i] += c * ab[1]
    return list(zip(re_, im_))


def division_polynomial(c: Curve, n: int) -> RationalPolynomial:
    """Polynomial in x vanishing exactly at the x coordinates of the affine
    points killed by n.

    Odd n gives psi_n, of degree (n^2 - 1)/2.  For even n it is
    (psi_n / 2y) * (x^3 + Ax + B), of degree n^2/2 + 1, so that n = 2 gives
    the cubic itself.
    """
    if not isinstance(n, int) or not 1 <= n <= 18:
        raise UsageError("division polynomial index must be in 1..18")
    coeffs = [GaussianInt(a, b) for a, b in _specialized(n, c.A, c.B)]
    p = RationalPolynomial(coeffs)
    if n % 2 == 0:
        p = p * RationalPolynomial([c.B, c.A, 0, 1])
    return p


# ---------------------------------------------------------------------------
# root finding over Q(i)

_LATTICE_LIMIT = 60_000
_CHUNK = 200_000


def _float_coeffs(coeffs: list[tuple[int, int]]) -> np.ndarray:
    """Complex floats proportional to coeffs (scaled by a power of two so the
    largest fits comfortably; int/int division rounds correctly)."""
    bits = max(max(abs(a).bit_length(), abs(b).bit_length()) for a, b in coeffs)
    scale = 2 ** max(0, bits - 900)
    return np.array([complex(a / scale, b / scale) for a, b in coeffs])


def _fujiwara(cf: np.ndarray) -> float:
    """Upper bound on |root| (Fujiwara), padded for rounding."""
    absval = np.abs(cf)
    n = len(absval) - 1
    lead = absval[-1]
    bound = 0.0
    for k in range(1, n + 1):
        c = absval[n - k]
        if not c:
            continue
        if k == n:
            c /= 2
        bound = max(bound, float(c / lead) ** (1.0 / k))
    return 2 * bound * 1.001 + 1e-9


def _cauchy(coeffs) -> int:
    """Integer Cauchy bound 1 + max |c_k / c_n| (rounded up)."""
    lead = isqrt(coeffs[-1][0] ** 2 + coeffs[-1][1] ** 2)
    top = max(isqrt(a * a + b * b) + 1 for a, b in coeffs[:-1])
    return 2 + -(-top // max(lead, 1))


@lru_cache(maxsize=64)
def _disc_points(radius: int):
    r = np.arange(-radius, radius + 1, dtype=np.int64)
    re, im = np.meshgrid(r, r, indexing="ij")
    mask = re * re + im * im <= radius * radius
    return re[mask], im[mask]


def _exact_eval(coeffs, x):
    """Horner at a Gaussian integer; coeffs are (re, im) pairs, ascending."""
    xr, xi = x
    ar, ai = 0, 0
    for cr, ci in reversed(coeffs):
        ar, ai = ar * xr - ai * xi + cr, ar * xi + ai * xr + ci
    return ar, ai


# residue maps Z[i] -> F_p, i -> s, for split primes p
_RESIDUE_MAPS = ((13, 5), (13, 8), (17, 4), (17, 13), (29, 12), (29, 17), (37, 6), (37, 31), (41, 9), (41, 32))


@lru_cache(maxsize=None)
def _power_table(p: int, n: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)[:, None]
    out = np.ones((p, n + 1), dtype=np.int64)
    for k in range(1, n + 1):
        out[:, k] = out[:, k - 1] * x[:, 0] % p
    return out


def _modular_filter(coeffs, pre, pim):
    """Drop lattice points that are not roots modulo the primes above 13, 17,
    29, 37, 41.  Exact: an integral root reduces to a root mod every prime."""
    n = len(coeffs) - 1
    for p, s in _RESIDUE_MAPS:
        if not len(pre):
            break
        red = np.array([(a + s * b) % p for a, b in coeffs], dtype=np.int64)
        if not red.any():
            continue
        is_root = (_power_table(p, n) @ red) % p == 0
        keep = is_root[(pre + s * pim) % p]
        pre, pim = pre[keep], pim[keep]
    return pre, pim


def _integral_roots(coeffs: list[tuple[int, int]], scale: int = 1) -> list[tuple[int, int]]:
    """Gaussian integers r with p(r / scale) = 0, where p has Z[i] coefficients.

    ``scale`` is a positive rational integer; the search covers every r with
    |r| <= scale * (root bound).  Floating point only prunes: a lattice point
    is discarded when |p(z)| exceeds 1e-8 times the majorant sum |c_k||z|^k,
    far above the worst-case Horner rounding error, and every survivor is
    confirmed exactly.
    """
    while coeffs and coeffs[-1] == (0, 0):
        coeffs = coeffs[:-1]
    if not coeffs:
        raise DomainError("zero polynomial")
    roots = []
    if coeffs[0] == (0, 0):
        roots.append((0, 0))
        while coeffs and coeffs[0] == (0, 0):
            coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots
    # p(r/s) = 0  <=>  sum c_k r^k s^(n-k) = 0
    n = len(coeffs) - 1
    if scale != 1:
        coeffs = [(a * scale ** (n - k), b * scale ** (n - k)) for k, (a, b) in enumerate(coeffs)]
    cf = _float_coeffs(coeffs)
    underflow = any((a or b) and not z for (a, b), z in zip(coeffs, cf))
    with np.errstate(all="ignore"):
        bound = np.inf if underflow else _fujiwara(cf)
    if not np.isfinite(bound):
        bound = _cauchy(coeffs)
    # lattice work grows like bound^2 * n; isolation like n^2 * precision,
    # so high degree polynomials stay on the lattice much longer
    limit = _LATTICE_LIMIT if n < 8 else 60 * _LATTICE_LIMIT
    if (2 * bound + 3) ** 2 > limit:
        found = _roots_by_hensel(coeffs, int(bound) + 1)
        if found is None:
            found = _roots_by_isolation(coeffs)
        if found is None:
            found = _roots_by_divisors(coeffs)
        return roots + found
    pre, pim = _modular_filter(coeffs, *_disc_points(int(bound) + 1))
    ca = np.abs(cf)
    for start in range(0, len(pre), _CHUNK):
        zr = pre[start : start + _CHUNK]
        zi = pim[start : start + _CHUNK]
        z = zr.astype(np.float64) + 1j * zi.astype(np.float64)
        az = np.abs(z)
        val = np.zeros_like(z)
        maj = np.zeros(len(z))
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(n, -1, -1):
                val = val * z + cf[k]
                maj = maj * az + ca[k]
        finite = np.isfinite(maj) & np.isfinite(val)
        keep = ~finite | (np.abs(val) <= 1e-8 * maj)
        keep &= (zr != 0) | (zi != 0)
        for a, b in zip(zr[keep].tolist(), zi[keep].tolist()):
            if _exact_eval(coeffs, (a, b)) == (0, 0):
                roots.append((a, b))
    return roots


def _split_primes():
    sieve = bytearray([1]) * 4000
    for q in range(2, 64):
        if sieve[q]:
            sieve[q * q :: q] = bytearray(len(sieve[q * q :: q]))
    return tuple(q for q in range(13, 4000) if sieve[q] and q % 4 == 1)


_HENSEL_PRIMES = _split_primes()


def _horner_mod(cs, x, mod):
    acc = 0
    for c in reversed(cs):
        acc = (acc * x + c) % mod
    return acc


def _simple_roots_mod_p(cs, p):
    """Roots of cs (ints, ascending) in F_p, or None if the reduction is zero
    or some root is repeated."""
    n = len(cs) - 1
    red = np.array([c % p for c in cs], dtype=np.int64)
    if not red.any():
        return None
    table = _power_table(p, n)
    rts = np.nonzero((table @ red) % p == 0)[0]
    dred = np.array([(k * c) % p for k, c in enumerate(cs)][1:] + [0], dtype=np.int64)
    if len(rts) and ((table[rts] @ dred) % p == 0).any():
        return None
    return [int(r) for r in rts]


def _lift(cs, dcs, r, p, mod):
    """Newton lift of a simple root r mod p to a root mod ``mod`` (a power of p)."""
    m = p
    while m < mod:
        m = min(m * m, mod)
        r = (r - _horner_mod(cs, r, m) * pow(_horner_mod(dcs, r, m), -1, m)) % m
    return r


def _roots_by_hensel(coeffs, bound: int, tries: int = 40):
    """Integral roots with |r| <= bound by p-adic lifting at a split prime.

    Z[i] embeds in Z_p twice (i -> s, i -> -s).  An integral root reduces to
    a root of both images; at a prime where those roots are simple each one
    lifts uniquely to p^k, and the two residues determine re and im modulo
    p^k > 2 * bound + 1.  Candidates are confirmed exactly.  None when no
    suitable prime turns up.
    """
    n = len(coeffs) - 1
    for p in _HENSEL_PRIMES[:tries]:
        s = _sqrt_minus_one(p)
        images = []
        for sign in (1, -1):
            cs = [a + sign * s * b for a, b in coeffs]
            rts = _simple_roots_mod_p(cs, p)
            if rts is None:
                break
            images.append(rts)
        if len(images) < 2:
            continue
        if not images[0] or not images[1]:
            return []
        mod = p
        while mod <= 2 * bound + 1:
            mod *= p
        sk = _lift([1, 0, 1], [0, 2], s, p, mod)
        lifted = []
        for sign, rts in zip((1, -1), images):
            cs = [(a + sign * sk * b) % mod for a, b in coeffs]
            dcs = [(k * c) % mod for k, c in enumerate(cs)][1:]
            lifted.append([_lift(cs, dcs, r, p, mod) for r in rts])
        inv2 = pow(2, -1, mod)
        inv2s = pow(2 * sk, -1, mod)
        half = mod // 2
        out = []
        for u in lifted[0]:
            for v in lifted[1]:
                a = (u + v) * inv2 % mod
                b = (u - v) * inv2s % mod
                a = a - mod if a > half else a
                b = b - mod if b > half else b
                if a * a + b * b <= bound * bound and (a or b) and _exact_eval(coeffs, (a, b)) == (0, 0):
                    out.append((a, b))
        return sorted(out)
    return None


def _roots_by_isolation(coeffs):
    """Integral roots via isolating discs around high-precision approximations.

    Each approximation z gets the radius n|p(z)/p'(z)|, which always contains
    a root.  When the n discs are pairwise disjoint and all radii are below
    1/4, every root lies within 1/4 of some z, so rounding z finds every
    Gaussian integer root.  Returns None when that certificate fails.
    """
    n = len(coeffs) - 1
    bits = max(max(abs(a).bit_length(), abs(b).bit_length()) for a, b in coeffs)
    prec = 2 * bits + 64 * n + 128
    with mpmath.workprec(prec):
        poly = [mpmath.mpc(a, b) for a, b in reversed(coeffs)]
        dpoly = [c * (n - k) for k, c in enumerate(poly[:-1])]
        approx = _refined_approximations(coeffs, poly, dpoly)
        if approx is None:
            try:
                approx = mpmath.polyroots(poly, maxsteps=400, extraprec=prec)
            except mpmath.libmp.NoConvergence:
                return None
            if not isinstance(approx, list):
                approx = [approx]
        radii = []
        for z in approx:
            dz = mpmath.polyval(dpoly, z)
            if not dz:
                return None
            radii.append(n * abs(mpmath.polyval(poly, z) / dz))
        if any(r >= 0.25 for r in radii):
            return None
        for i in range(n):
            for j in range(i + 1, n):
                if abs(approx[i] - approx[j]) <= radii[i] + radii[j]:
                    return None
        cands = {(int(mpmath.nint(z.real)), int(mpmath.nint(z.imag))) for z in approx}
    return sorted(r for r in cands if _exact_eval(coeffs, r) == (0, 0))


def _refined_approximations(coeffs, poly, dpoly):
    """Double-precision eigenvalue roots polished by Newton steps at the
    current mpmath precision; None if numpy cannot produce them."""
    cf = _float_coeffs(coeffs)
    if not np.all(np.isfinite(cf)):
        return None
    with np.errstate(all="ignore"):
        start = np.roots(cf[::-1])
    if len(start) != len(coeffs) - 1 or not np.all(np.isfinite(start)):
        return None
    out = []
    for z0 in start:
        z = mpmath.mpc(z0.real, z0.imag)
        for _ in range(60):
            dz = mpmath.polyval(dpoly, z)
            if not dz:
                break
            step = mpmath.polyval(poly, z) / dz
            z -= step
            if abs(step) < mpmath.mpf(2) ** (-40) * (1 + abs(z)):
                break
        out.append(z)
    return out


def _roots_by_divisors(coeffs):
    """Fallback: integral roots divide the (nonzero) constant term."""
    c0 = GaussianInt(*coeffs[0])
    out = []
    for d in divisors(c0):
        for u in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            r = _cmul((d.re, d.im), u)
            if _exact_eval(coeffs, r) == (0, 0):
                out.append(r)
    return out


def gaussian_rational_roots(p, denominators=None) -> list[GaussianRational]:
    """Distinct roots of p in Q(i), sorted by (norm, re, im) of the value.

    Candidates are r/s with s running over the canonical divisors of the
    leading coefficient of the Z[i]-scaled polynomial (or the supplied
    ``denominators``) and r over a lattice disc covering the root bound.
    """
    p = RationalPolynomial.coerce(p)
    if not p:
        raise DomainError("zero polynomial has every value as a root")
    if p.degree > 1:
        # distinct roots only; repeated roots slow the numeric isolation
        p = p.exact_div(poly_gcd(p, p.derivative()))
    ints, _ = p.integral_coeffs()
    coeffs = [(z.re, z.im) for z in ints]
    lead = ints[-1]
    if denominators is None:
        dens = divisors(lead)
    else:
        dens = [canonical_associate(GaussianInt.coerce(d))[0] for d in denominators]
    found = set()
    for s in dens:
        # substitute x = r / s: multiply through by s^n, keeps Z[i] coefficients
        n = len(coeffs) - 1
        spow = _powers((s.re, s.im), n)
        scaled = [_cmul(c, spow[n - k]) for k, c in enumerate(coeffs)]
        for r in _integral_roots(scaled):
            found.add(GaussianRational(GaussianInt(*r), s))
    return sorted(found, key=lambda q: (q.norm(), complex(q).real, complex(q).imag))


# ---------------------------------------------------------------------------
# square roots


def _isqrt_gaussian(a: int, b: int):
    """(u, v) with (u + vi)^2 = a + bi, or None.  Closed form via the norm."""
    n2 = a * a + b * b
    n = isqrt(n2)
    if n * n != n2:
        return None
    if (n + a) % 2:
        return None
    u2, v2 = (n + a) // 2, (n - a) // 2
    u, v = isqrt(u2), isqrt(v2)
    if u * u != u2 or v * v != v2:
        return None
    if 2 * u * v != b:
        v = -v
    if 2 * u * v != b:
        return None
    return u, v


def _sqrt_int_by_factoring(z: GaussianInt):
    if not z:
        return ZERO
    fac = factor(z)
    root = ONE
    for p, e in fac:
        if e % 2:
            return None
        root = root * p.value ** (e // 2)
    # remaining unit: 1 = 1^2, -1 = i^2, i and -i are not squares in Z[i]
    if fac.unit == ONE:
        return root
    if fac.unit == GaussianInt(-1, 0):
        return root * GaussianInt(0, 1)
    return None


def sqrt_in_Qi(q) -> GaussianRational | None:
    """A square root of q in Q(i) (the one with canonical-sign conventions of
    the factorization), or None when q is not a square."""
    q = GaussianRational.coerce(q)
    # r^2 = num/den  <=>  (r*den)^2 = num*den
    w = q.num * q.den
    s = _sqrt_int_by_factoring(w)
    if s is None:
        return None
    return GaussianRational(s, q.den)


def _sqrt_fast(q: GaussianRational):
    w = q.num * q.den
    r = _isqrt_gaussian(w.re, w.im)
    if r is None:
        return None
    return GaussianRational(GaussianInt(*r), q.den)


# ---------------------------------------------------------------------------
# torsion points


@dataclass(frozen=True)
class TorsionResult:
    curve: Curve
    label: TorsionLabel
    two_primary: tuple[Point, ...]
    odd_primary: dict
    two_torsion_count: int

    @property
    def points(self) -> list[Point]:
        return _all_sums(self.curve, self)

    @property
    def order(self) -> int:
        return self.label.order


_ODD_PSI = {3: 9, 5: 5, 7: 7, 11: 11, 13: 13}


def _points_over_x(c: Curve, xs) -> list[Point]:
    out = []
    for x in xs:
        xq = GaussianRational(x)
        y = _sqrt_fast(c.rhs(xq))
        if y is None:
            continue
        out.append(Point(xq, y))
        if y:
            out.append(Point(xq, -y))
    return out


def _two_primary(c: Curve) -> tuple[list[Point], int]:
    A, B = c.A, c.B
    order2 = _points_over_x(
        c, [GaussianInt(*r) for r in _integral_roots([(B.re, B.im), (A.re, A.im), (0, 0), (1, 0)])]
    )
    pts = [INFINITY] + order2
    frontier = order2
    k = len(pts)
    while frontier:
        nxt = []
        for Q in frontier:
            xq = Q.x.num  # integral
            if not Q.y:
                # the quartic is ((x - e)^2 - (3e^2 + A))^2 at a 2-torsion point
                disc = 3 * xq * xq + A
                r = _isqrt_gaussian(disc.re, disc.im)
                xs = [] if r is None else [xq + GaussianInt(*r), xq - GaussianInt(*r)]
            else:
                # x^4 - 4xq x^3 - 2A x^2 - (8B + 4A xq) x + A^2 - 4B xq
                coeffs = [A * A - 4 * B * xq, -(8 * B + 4 * A * xq), -2 * A, -4 * xq, ONE]
                xs = [GaussianInt(*r) for r in _integral_roots([(z.re, z.im) for z in coeffs])]
            for P in _points_over_x(c, xs):
                if _add_unchecked(c, P, P) == Q:
                    nxt.append(P)
        if len(pts) + len(nxt) > 16:
            raise InternalConsistencyError(f"2-primary torsion of {c} exceeds 16 points")
        pts.extend(nxt)
        frontier = nxt
    return pts, k


def _odd_primary(c: Curve, primes) -> dict[int, list[Point]]:
    out = {}
    for ell in primes:
        n = _ODD_PSI[ell]
        coeffs = _specialized(n, c.A, c.B)
        xs = [GaussianInt(*r) for r in _integral_roots(coeffs)]
        group = [INFINITY]
        for P in _points_over_x(c, xs):
            o = point_order(c, P, 18)
            if o is None or o == 1:
                continue
            if o not in (ell, ell * ell):
                raise InternalConsistencyError(f"{P} on {c} has order {o}, not a power of {ell}")
            group.append(P)
        if len(group) > 1:
            out[ell] = group
    return out


def _structure(c: Curve, two: list[Point], k: int, odd: dict) -> TorsionLabel:
    n2 = len(two)
    exp2 = max(point_order(c, P, 16) for P in two)
    if k == 4 and n2 == 16 and exp2 == 4:
        m1 = 4
    elif k == 4:
        m1 = 2
    else:
        m1 = 1
    if n2 != m1 * exp2:
        raise InternalConsistencyError(f"{c}: 2-part has {n2} points, exponent {exp2}, k={k}")
    nodd = 1
    for ell, group in odd.items():
        size = len(group)
        top = max(point_order(c, P, 18) for P in group)
        if size not in (ell, ell * ell) or top != size:
            raise InternalConsistencyError(f"{c}: {ell}-part of size {size}, exponent {top}")
        nodd *= size
    # by construction an element of order exp2 * nodd exists
    return label_for(m1, exp2 * nodd)


def compute_torsion(c: Curve, odd_primes=(3, 5, 7, 11, 13)) -> TorsionResult:
    """Primary decomposition of the torsion subgroup.

    ``odd_primes`` limits which odd primary parts are searched; callers may
    narrow it only when they have a proof that the others are trivial.
    """
    c.require_nonsingular()
    two, k = _two_primary(c)
    odd = _odd_primary(c, [p for p in odd_primes if p in _ODD_PSI])
    label = _structure(c, two, k, odd)
    return TorsionResult(c, label, tuple(two), odd, k)


def _all_sums(c: Curve, res: TorsionResult) -> list[Point]:
    pts = list(res.two_primary)
    for group in res.odd_primary.values():
        pts = [_add_unchecked(c, P, Q) for P in pts for Q in group]
    return pts


def torsion_points(c: Curve) -> list[Point]:
    """Every point of finite order on c, sorted by (order, x, y) text."""
    res = compute_torsion(c)
    pts = res.points
    if len(pts) != res.label.order or len(set(pts)) != len(pts):
        raise InternalConsistencyError(f"{c}: {len(pts)} points for {res.label}")
    return sorted(pts, key=lambda P: (point_order(c, P, 18), str(P)))


def torsion_structure(c: Curve) -> TorsionLabel:
    return compute_torsion(c).label


__all__ += ["label_for", "negate"]
