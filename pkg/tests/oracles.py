"""Reference computations that share no code with the package.

Gaussian numbers here are plain (re, im) tuples of ints or Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath
import numpy as np

# -- tiny Q(i) arithmetic ----------------------------------------------------


def cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def cdiv(a, b):
    n = Fraction(b[0] * b[0] + b[1] * b[1])
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def cnorm(a):
    return a[0] * a[0] + a[1] * a[1]


def cpow(a, k):
    out = (1, 0)
    for _ in range(k):
        out = cmul(out, a)
    return out


def frac(a):
    return (Fraction(a[0]), Fraction(a[1]))


# -- group law on y^2 = x^3 + Ax + B, points as (x, y) or None ---------------


def ec_add(A, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 == (-y2[0], -y2[1]):
            return None
        lam = cdiv(cadd(cmul((3, 0), cmul(x1, x1)), A), cmul((2, 0), y1))
    else:
        lam = cdiv(csub(y2, y1), csub(x2, x1))
    x3 = csub(csub(cmul(lam, lam), x1), x2)
    y3 = csub(cmul(lam, csub(x1, x3)), y1)
    return (x3, y3)


def ec_order(A, P, bound=18):
    Q = P
    for n in range(1, bound + 1):
        if Q is None:
            return n
        Q = ec_add(A, Q, P)
    return None


# -- brute-force torsion -----------------------------------------------------


def _gauss_sqrt_vec(u, v):
    """Elementwise sqrt of u + vi in Z[i]; returns (ok, a, b) with (a+bi)^2 = u+vi."""
    n = u * u + v * v
    m = np.floor(np.sqrt(n.astype(np.float64))).astype(np.int64)
    m += (m + 1) * (m + 1) <= n
    m -= m * m > n
    ok = m * m == n
    a2 = (m + u) // 2
    b2 = (m - u) // 2
    ok &= ((m + u) % 2 == 0) & (a2 >= 0) & (b2 >= 0)
    a = np.floor(np.sqrt(np.maximum(a2, 0).astype(np.float64))).astype(np.int64)
    a += (a + 1) * (a + 1) <= a2
    a -= a * a > a2
    b = np.floor(np.sqrt(np.maximum(b2, 0).astype(np.float64))).astype(np.int64)
    b += (b + 1) * (b + 1) <= b2
    b -= b * b > b2
    ok &= (a * a == a2) & (b * b == b2)
    b = np.where(v < 0, -b, b)
    ok &= 2 * a * b == v
    return ok, a, b


_DENOMS = ((1, 0), (1, 1), (2, 0))


def _search(A, B, R):
    """Affine points with x = r/s^2, |re r|, |im r| <= R, s in _DENOMS.

    Returns {x: (r, s, [y, -y])} with x as a pair of Fractions.
    """
    Ai, Bi = (int(A[0]), int(A[1])), (int(B[0]), int(B[1]))
    rng = np.arange(-R, R + 1, dtype=np.int64)
    rr, ri = np.meshgrid(rng, rng, indexing="ij")
    rr, ri = rr.ravel(), ri.ravel()
    found = {}
    for s in _DENOMS:
        s2, s3 = cpow(s, 2), cpow(s, 3)
        As4 = cmul(Ai, cpow(s, 4))
        Bs6 = cmul(Bi, cpow(s, 6))
        r2r, r2i = rr * rr - ri * ri, 2 * rr * ri
        r3r, r3i = r2r * rr - r2i * ri, r2r * ri + r2i * rr
        wr = r3r + As4[0] * rr - As4[1] * ri + Bs6[0]
        wi = r3i + As4[0] * ri + As4[1] * rr + Bs6[1]
        ok, a, b = _gauss_sqrt_vec(wr, wi)
        for x0, x1, y0, y1 in zip(rr[ok].tolist(), ri[ok].tolist(), a[ok].tolist(), b[ok].tolist()):
            x = cdiv(frac((x0, x1)), frac(s2))
            if x in found:
                continue
            y = cdiv(frac((y0, y1)), frac(s3))
            ys = [y] if y == (0, 0) else [y, (-y[0], -y[1])]
            found[x] = ((x0, x1), s, ys)
    return found


def _double_x(A, B, r, s):
    """x(2P) for x(P) = r/s^2, from integers only (one final division)."""
    s2 = cmul(s, s)
    s4 = cmul(s2, s2)
    s6 = cmul(s4, s2)
    s8 = cmul(s4, s4)
    r2 = cmul(r, r)
    num = cadd(csub(csub(cmul(r2, r2), cmul((2, 0), cmul(A, cmul(r2, s4)))), cmul((8, 0), cmul(B, cmul(r, s6)))), cmul(cmul(A, A), s8))
    den = cmul((4, 0), cmul(s2, cadd(cadd(cmul(r2, r), cmul(A, cmul(r, s4))), cmul(B, s6))))
    return cdiv(frac(num), frac(den))


def _box_torsion(A, B, found):
    """Points whose multiples stay inside the found set until reaching O
    within 18 steps."""
    Ai, Bi = (int(A[0]), int(A[1])), (int(B[0]), int(B[1]))
    cands = {(x, y) for x, (_, _, ys) in found.items() for y in ys}
    out = []
    for x, (r, s, ys) in found.items():
        if ys[0] != (0, 0) and _double_x(Ai, Bi, r, s) not in found:
            continue
        P = (x, ys[0])
        Q = P
        for _ in range(18):
            Q = ec_add(A, Q, P)
            if Q is None:
                out.extend((x, y) for y in ys)
                break
            if Q not in cands:
                break
    return out


def brute_torsion(A, B):
    """(label, points) of the torsion subgroup found by bounded search; the
    box grows until two consecutive results agree and the set is closed."""
    A, B = frac(A), frac(B)
    prev = None
    for R in (8, 16, 32, 64):
        tors = _box_torsion(A, B, _search(A, B, R))
        key = frozenset(tors)
        if key == prev:
            break
        prev = key
    group = [None] + sorted(prev, key=str)
    members = set(group[1:])
    for P in group:
        for Q in group:
            S = ec_add(A, P, Q)
            if S is not None and S not in members:
                raise AssertionError(f"bounded search not closed at {P} + {Q}")
    return _label(A, group), group


def _kills(A, P, n):
    Q = None
    for _ in range(n):
        Q = ec_add(A, Q, P)
    return Q is None


def _label(A, group):
    N = len(group)
    two = sum(1 for P in group if _kills(A, P, 2))
    four = sum(1 for P in group if _kills(A, P, 4))
    if two == 4:
        if four == 16:
            return "Z/4xZ/4"
        return f"Z/2xZ/{N // 2}"
    return f"Z/{N}"


# -- naive enumeration of minimal classes ------------------------------------


def _is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


def gaussian_primes(max_norm):
    """Canonical Gaussian primes (re > 0, im >= 0) of norm <= max_norm."""
    out = []
    R = isqrt(max_norm)
    for a in range(1, R + 1):
        for b in range(0, R + 1):
            n = a * a + b * b
            if n > max_norm:
                continue
            if b == 0:
                if _is_prime(a) and a % 4 == 3:
                    out.append((a, 0))
            elif _is_prime(n):
                out.append((a, b))
    return out


def divides(d, z):
    n = cnorm(d)
    q = cmul(z, (d[0], -d[1]))
    return q[0] % n == 0 and q[1] % n == 0


def naive_classes(X):
    """Sorted list of minimal nonsingular sign-canonical (A, B) with
    max(N(A)^3, N(B)^2) < X, by a plain double loop."""
    R = 1
    while R**6 < X:
        R += 1
    primes = gaussian_primes(R * R + 1)
    pts = [(a, b) for a in range(-R * R, R * R + 1) for b in range(-R * R, R * R + 1)]
    As = [z for z in pts if cnorm(z) ** 3 < X]
    Bs = [z for z in pts if cnorm(z) ** 2 < X and (z[0] > 0 or (z[0] == 0 and z[1] >= 0))]
    out = []
    for A in As:
        a3 = cmul((4, 0), cpow(A, 3))
        for B in Bs:
            b2 = cmul((27, 0), cpow(B, 2))
            if cadd(a3, b2) == (0, 0):
                continue
            if any(divides(cpow(p, 4), A) and divides(cpow(p, 6), B) for p in primes):
                continue
            out.append((A, B))
    return sorted(out)


# -- constants ---------------------------------------------------------------


def coprime_density():
    """1 / (zeta(2) * L(2, chi_-4)) with L(2, chi_-4) = Catalan's constant,
    both summed from their defining series."""
    mpmath.mp.dps = 30
    z2 = mpmath.nsum(lambda k: 1 / k**2, [1, mpmath.inf])
    cat = mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1) ** 2, [0, mpmath.inf])
    return float(1 / (z2 * cat))


def j_invariant_tate(a, b, d):
    """j of y^2 + a xy + b y = x^3 + d x^2 via the b- and c-invariants."""
    b2 = cadd(cmul(a, a), cmul((4, 0), d))
    b4 = cmul(a, b)
    b6 = cmul(b, b)
    c4 = csub(cmul(b2, b2), cmul((24, 0), b4))
    c6 = cadd(cadd(cmul((-1, 0), cpow(b2, 3)), cmul((36, 0), cmul(b2, b4))), cmul((-216, 0), b6))
    c43 = cpow(c4, 3)
    return cdiv(cmul((1728, 0), c43), csub(c43, cmul(c6, c6)))


def j_invariant_short(A, B):
    a3 = cmul((4, 0), cpow(A, 3))
    return cdiv(cmul((1728, 0), a3), cadd(a3, cmul((27, 0), cmul(B, B))))
