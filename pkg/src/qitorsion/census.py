"""Counting minimal curves by height, family-driven counts and probes.

Curves are counted through sign-canonical representatives: (A, B) and
(A, -B) are one class and the representative keeps the lexicographically
larger B.  The counts therefore agree with the number of isomorphism classes
up to a bounded number of curves with A = 0 or B = 0 (extra twists).

The exhaustive census is vectorized per value of A.  Two cheap sieves decide
most curves without a torsion computation:

* the roots of x^3 + Ax + B are found by running over candidate roots r and
  reading off B = -r^3 - Ar, which gives the 2-torsion for every B at once;
* the number of points over the residue fields of the split primes of norm
  5 .. 97 bounds the torsion: torsion injects into every good reduction at
  these primes, so the torsion order divides the gcd of the point counts.

A curve is sent to :func:`compute_torsion` only when the gcd leaves room for
something beyond its 2-torsion.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterator, Optional, Sequence

import numpy as np

from .curve import Curve, IsoClass, _scaling_divisor, minimalize, sign_canonical_b
from .errors import DataIntegrityError, DomainError, UsageError, ValidationFailure
from .families import (
    D_VALUES,
    FamilyRecord,
    lookup,
    minimal_scaling,
    specialize,
)
from .gaussian import (
    ONE,
    GaussianInt,
    GaussianRational,
    canonical_associate,
    factor,
    gaussian_primes_up_to,
    gcd,
    split_rational_prime,
    valuation,
)
from .torsion import ALL_LABELS, TorsionLabel, compute_torsion

__all__ = [
    "CensusRecord",
    "SlopeEstimate",
    "S2Config",
    "FamilyCount",
    "enumerate_minimal",
    "census",
    "census_tallies",
    "estimate_d",
    "estimate_all",
    "family_count",
    "coprimality_probe",
    "lemma46_probe",
    "COPRIME_DENSITY",
    "DEFAULT_GRID",
    "write_census_csv",
    "read_census_csv",
    "census_metadata",
]

DEFAULT_GRID = (10**4, 10**5, 10**6, 10**7)

# 1 / (zeta(2) * L(2, chi_-4)) = 6 / (pi^2 * Catalan), the density of coprime
# pairs in Z[i]^2.
COPRIME_DENSITY = 0.6637008045

_TWO_TORSION_GROUPS = frozenset(ALL_LABELS[i] for i in (0, 1)) | {TorsionLabel(2, 2)}
_LABEL_INDEX = {lab: i for i, lab in enumerate(ALL_LABELS)}
_Z1, _Z2, _Z2Z2 = _LABEL_INDEX[TorsionLabel(1, 1)], _LABEL_INDEX[TorsionLabel(1, 2)], _LABEL_INDEX[TorsionLabel(2, 2)]
# _CONTAINS[g, h] = 1 when a group of type h has a subgroup of type g
_CONTAINS = np.array([[int(h.contains(g)) for h in ALL_LABELS] for g in ALL_LABELS], dtype=np.int64)

_SIEVE_PRIMES = (5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97)
_ODD_ELLS = (3, 5, 7, 11, 13)


@dataclass(frozen=True)
class CensusRecord:
    group: TorsionLabel
    X: int
    count: int


@dataclass(frozen=True)
class SlopeEstimate:
    group: TorsionLabel
    inv_d_est: float
    d_paper: Optional[float]
    X_grid: tuple[int, ...]
    residual: float
    finite_sample: bool = False

    @property
    def d_est(self) -> float:
        return math.inf if self.inv_d_est <= 0 else 1.0 / self.inv_d_est


# ---------------------------------------------------------------------------
# bounds and shells


def _coefficient_bounds(X: int) -> tuple[int, int]:
    """Largest norms with N(A)^3 < X and N(B)^2 < X."""
    if X < 1:
        raise UsageError("height threshold must be at least 1")
    a = int(round((X - 1) ** (1 / 3))) + 1
    while a**3 >= X:
        a -= 1
    return a, isqrt(X - 1)


def _shell(max_norm: int, canonical_sign: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian integers of norm <= max_norm ordered by (norm, re, im)."""
    R = isqrt(max_norm)
    re, im = np.meshgrid(np.arange(-R, R + 1, dtype=np.int64), np.arange(-R, R + 1, dtype=np.int64), indexing="ij")
    re, im = re.ravel(), im.ravel()
    keep = re * re + im * im <= max_norm
    if canonical_sign:
        keep &= (re > 0) | ((re == 0) & (im >= 0))
    re, im = re[keep], im[keep]
    order = np.lexsort((im, re, re * re + im * im))
    return re[order], im[order]


# ---------------------------------------------------------------------------
# per-A masks


@lru_cache(maxsize=None)
def _minimality_primes(max_norm: int) -> tuple[tuple[int, int], ...]:
    """Primes p whose sixth power can divide some B of norm <= max_norm."""
    lim = 1
    while (lim + 1) ** 6 <= max_norm:
        lim += 1
    return tuple((p.re, p.im) for p in gaussian_primes_up_to(lim))


def _divisible(bre, bim, q: GaussianInt) -> np.ndarray:
    n = q.norm()
    return ((bre * q.re + bim * q.im) % n == 0) & ((bim * q.re - bre * q.im) % n == 0)


def _nonminimal_mask(A: GaussianInt, bre, bim, bmax: int) -> np.ndarray:
    bad = np.zeros(bre.shape, dtype=bool)
    if A:
        primes = [(p.value, e) for p, e in factor(A) if e >= 4]
        primes = [p for p, _ in primes]
    else:
        primes = [GaussianInt(*p) for p in _minimality_primes(bmax)]
    for p in primes:
        bad |= _divisible(bre, bim, p**6)
    if not A:
        bad |= (bre == 0) & (bim == 0)
    return bad


def _singular_mask(A: GaussianInt, bre, bim) -> np.ndarray:
    a3 = 4 * A**3
    # 27 B^2 = -4 A^3
    return (27 * (bre * bre - bim * bim) == -a3.re) & (54 * bre * bim == -a3.im)


def _cubic_root_counts(A: GaussianInt, index: np.ndarray, R: int, amax: int, bmax: int) -> np.ndarray:
    """Number of Z[i] roots of x^3 + Ax + B for every canonical B, via B = -r^3 - Ar."""
    counts = np.zeros(index.max() + 1, dtype=np.int64)
    # Fujiwara: |r| <= 2 max(|A|^(1/2), (|B|/2)^(1/3))
    rad = 2 * max(amax**0.25, (math.sqrt(bmax) / 2) ** (1 / 3)) + 1
    rr, ri = _shell(int(rad * rad))
    r2re, r2im = rr * rr - ri * ri, 2 * rr * ri
    r3re, r3im = r2re * rr - r2im * ri, r2re * ri + r2im * rr
    Bre = -(r3re + A.re * rr - A.im * ri)
    Bim = -(r3im + A.re * ri + A.im * rr)
    ok = (Bre * Bre + Bim * Bim <= bmax) & ((Bre > 0) | ((Bre == 0) & (Bim >= 0)))
    idx = index[Bre[ok] + R, Bim[ok] + R]
    np.add.at(counts, idx, 1)
    return counts


# ---------------------------------------------------------------------------
# the point-count sieve


@lru_cache(maxsize=None)
def _point_table(p: int) -> np.ndarray:
    """#E(F_p) for y^2 = x^3 + ax + b indexed [a, b]; 0 marks singular (a, b)."""
    chi = -np.ones(p, dtype=np.int64)
    chi[(np.arange(p) ** 2) % p] = 1
    chi[0] = 0
    x = np.arange(p, dtype=np.int64)
    a = x[:, None, None]
    b = x[None, :, None]
    vals = (x[None, None, :] ** 3 + a * x[None, None, :] + b) % p
    table = p + 1 + chi[vals].sum(axis=2)
    disc = (4 * x[:, None] ** 3 + 27 * x[None, :] ** 2) % p
    table[disc == 0] = 0
    return table


@lru_cache(maxsize=None)
def _residue_maps() -> tuple[tuple[int, int], ...]:
    """(p, s) with i -> s mod p, one per split prime above p."""
    out = []
    for p in _SIEVE_PRIMES:
        for gp in split_rational_prime(p):
            pi = gp.value
            # pi = x + yi divides i - s with s = -x * y^-1 mod p
            out.append((p, (-pi.re * pow(pi.im, -1, p)) % p))
    return tuple(out)


def _count_gcd(A: GaussianInt, bre, bim) -> np.ndarray:
    g = np.zeros(bre.shape, dtype=np.int64)
    for p, s in _residue_maps():
        table = _point_table(p)
        a = (A.re + s * A.im) % p
        b = (bre + s * bim) % p
        g = np.gcd(g, table[a, b])
    return g


def _two_adic(g: np.ndarray) -> np.ndarray:
    v = np.zeros(g.shape, dtype=np.int64)
    h = g.copy()
    live = h > 0
    while True:
        even = live & (h % 2 == 0)
        if not even.any():
            return v
        v[even] += 1
        h[even] //= 2


# ---------------------------------------------------------------------------
# enumeration


def _minimal_block(A: GaussianInt, bre, bim, amax, bmax) -> np.ndarray:
    return ~(_singular_mask(A, bre, bim) | _nonminimal_mask(A, bre, bim, bmax))


def enumerate_minimal(X: int) -> Iterator[IsoClass]:
    """Every minimal, nonsingular, sign-canonical (A, B) of height < X, once,
    ordered by (N(A), re A, im A, N(B), re B, im B)."""
    amax, bmax = _coefficient_bounds(X)
    are, aim = _shell(amax)
    bre, bim = _shell(bmax, canonical_sign=True)
    for ar, ai in zip(are.tolist(), aim.tolist()):
        A = GaussianInt(ar, ai)
        keep = _minimal_block(A, bre, bim, amax, bmax)
        for br, bi in zip(bre[keep].tolist(), bim[keep].tolist()):
            yield IsoClass(Curve(A, GaussianInt(br, bi)))


def _tally_shard(args) -> np.ndarray:
    """Per-label counts below each grid point for the A values of one shard."""
    grid, shard, nshards, two_torsion_only = args
    X = max(grid)
    amax, bmax = _coefficient_bounds(X)
    are, aim = _shell(amax)
    bre, bim = _shell(bmax, canonical_sign=True)
    bnorm = bre * bre + bim * bim
    R = isqrt(bmax)
    index = np.zeros((2 * R + 1, 2 * R + 1), dtype=np.int64)
    index[bre + R, bim + R] = np.arange(bre.size)
    gridv = np.array(grid, dtype=np.int64)
    out = np.zeros((len(ALL_LABELS), len(grid)), dtype=np.int64)
    for j in range(shard, are.size, nshards):
        A = GaussianInt(int(are[j]), int(aim[j]))
        keep = _minimal_block(A, bre, bim, amax, bmax)
        heights = np.maximum(A.norm() ** 3, bnorm * bnorm)
        roots = _cubic_root_counts(A, index, R, amax, bmax)
        labels = np.where(roots == 0, _Z1, np.where(roots == 1, _Z2, _Z2Z2))
        if not two_torsion_only:
            _refine_labels(A, bre, bim, keep, roots, labels)
        labels, heights = labels[keep], heights[keep]
        for col, x in enumerate(gridv):
            below = heights < x
            out[:, col] += np.bincount(labels[below], minlength=len(ALL_LABELS))
    return out


def _refine_labels(A, bre, bim, keep, roots, labels):
    """Replace the 2-torsion guess by the exact label wherever the sieve
    leaves room for more torsion."""
    g = _count_gcd(A, bre, bim)
    v2 = _two_adic(g)
    odd = g >> v2
    two_size = np.where(roots == 0, 1, np.where(roots == 1, 2, 4))
    odd_hit = np.zeros((len(_ODD_ELLS), g.size), dtype=bool)
    for k, ell in enumerate(_ODD_ELLS):
        odd_hit[k] = (g == 0) | (odd % ell == 0)
    # 2-power torsion lies in E[2^inf]; its order divides 2^v2 and is >= two_size
    settled = (g > 0) & ~odd_hit.any(axis=0) & ((roots == 0) | ((1 << v2) == two_size))
    for j in np.flatnonzero(keep & ~settled):
        primes = tuple(ell for k, ell in enumerate(_ODD_ELLS) if odd_hit[k, j])
        c = Curve(A, GaussianInt(int(bre[j]), int(bim[j])))
        labels[j] = _LABEL_INDEX[compute_torsion(c, primes).label]


def census_tallies(grid: Sequence[int], workers: int = 1, two_torsion_only: bool = False):
    """``(equals, contains)`` count matrices of shape (labels, grid).

    ``equals[g, j]`` counts classes of height < grid[j] whose torsion is
    exactly ALL_LABELS[g]; ``contains`` counts those whose torsion has a
    subgroup isomorphic to it.  With ``two_torsion_only`` the labels come from
    the 2-torsion alone and only the CONTAINS tallies for Z/1, Z/2 and
    Z/2xZ/2 are meaningful.
    """
    grid = [int(x) for x in grid]
    if not grid or any(x < 1 for x in grid):
        raise UsageError("grid must be a nonempty list of positive thresholds")
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise UsageError("grid must be strictly ascending")
    if grid[-1] > 2**62:
        raise UsageError("height threshold too large for the vectorized census")
    workers = max(1, int(workers))
    jobs = [(tuple(grid), s, workers, two_torsion_only) for s in range(workers)]
    if workers == 1:
        parts = [_tally_shard(jobs[0])]
    else:
        from multiprocessing import get_context

        with get_context("spawn").Pool(workers) as pool:
            parts = pool.map(_tally_shard, jobs)
    equals = np.sum(parts, axis=0)
    contains = _CONTAINS @ equals
    return equals, contains


def census(
    X_grid: Sequence[int] = DEFAULT_GRID,
    groups: Optional[Sequence] = None,
    workers: int = 1,
    tally: str = "equals",
) -> list[CensusRecord]:
    """Counts N_G(X) for every requested group and grid point.

    ``tally`` is ``"equals"`` (torsion exactly G) or ``"contains"`` (torsion
    has a subgroup G).  Zero counts are reported, not omitted.
    """
    if tally not in ("equals", "contains"):
        raise UsageError(f"tally must be 'equals' or 'contains', not {tally!r}")
    labels = _parse_groups(groups)
    cheap = tally == "contains" and all(g in _TWO_TORSION_GROUPS for g in labels)
    equals, contains = census_tallies(X_grid, workers, two_torsion_only=cheap)
    table = equals if tally == "equals" else contains
    out = []
    for g in labels:
        for j, x in enumerate(X_grid):
            out.append(CensusRecord(g, int(x), int(table[_LABEL_INDEX[g], j])))
    return out


def _parse_groups(groups) -> list[TorsionLabel]:
    if groups is None:
        return list(ALL_LABELS)
    out = []
    for g in groups:
        lab = g if isinstance(g, TorsionLabel) else TorsionLabel.parse(g)
        if lab not in out:
            out.append(lab)
    return sorted(out, key=_LABEL_INDEX.__getitem__)


# ---------------------------------------------------------------------------
# slopes


def estimate_d(records: Sequence[CensusRecord], min_count: int = 5) -> SlopeEstimate:
    """Least-squares slope of log(count) against log(X) for one group.

    Points with count < min_count are dropped.  With fewer than two usable
    points the slope is reported as 0 and ``finite_sample`` is set, which is
    the expected outcome for groups with finitely many curves.
    """
    if not records:
        raise UsageError("no records to fit")
    groups = {r.group for r in records}
    if len(groups) != 1:
        raise UsageError("estimate_d takes the records of a single group")
    (group,) = groups
    recs = sorted(records, key=lambda r: r.X)
    grid = tuple(r.X for r in recs)
    used = [r for r in recs if r.count >= min_count and r.count > 0]
    d_paper = D_VALUES.get(str(group))
    if len(used) < 2:
        return SlopeEstimate(group, 0.0, d_paper, grid, 0.0, finite_sample=True)
    lx = np.log([float(r.X) for r in used])
    ly = np.log([float(r.count) for r in used])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    slope = max(float(slope), 0.0)
    return SlopeEstimate(group, slope, d_paper, grid, resid, finite_sample=len(used) < 3)


def estimate_all(records: Sequence[CensusRecord], min_count: int = 5) -> list[SlopeEstimate]:
    by_group: dict[TorsionLabel, list[CensusRecord]] = {}
    for r in records:
        by_group.setdefault(r.group, []).append(r)
    return [estimate_d(by_group[g], min_count) for g in sorted(by_group, key=_LABEL_INDEX.__getitem__)]


# ---------------------------------------------------------------------------
# CSV and metadata


def write_census_csv(records: Sequence[CensusRecord]) -> str:
    rows = sorted(records, key=lambda r: (_LABEL_INDEX[r.group], r.X))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "X", "count"])
    for r in rows:
        w.writerow([str(r.group), r.X, r.count])
    return buf.getvalue()


def read_census_csv(text: str) -> list[CensusRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["group", "X", "count"]:
        raise DataIntegrityError(f"unexpected census header {header}")
    out = []
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        try:
            group, X, count = row
            rec = CensusRecord(TorsionLabel.parse(group), int(X), int(count))
        except ValueError as exc:
            raise DataIntegrityError(f"line {lineno}: {exc}") from None
        if rec.X < 1 or rec.count < 0:
            raise DataIntegrityError(f"line {lineno}: out of range values {row}")
        out.append(rec)
    return out


def census_metadata(grid, tally: str, workers: int) -> dict:
    return {
        "grid": [int(x) for x in grid],
        "tally": tally,
        "workers": int(workers),
        "convention": (
            "counts sign-canonical minimal pairs (A,B), identifying (A,B) with (A,-B); "
            "equal to the isomorphism class count up to O(1) twists at A=0 or B=0"
        ),
        "height": "max(N(A)^3, N(B)^2), strict inequality height < X",
    }


# ---------------------------------------------------------------------------
# family-driven counts


@dataclass(frozen=True)
class S2Config:
    group: TorsionLabel
    X: int
    kappa: float = 0.5

    def __post_init__(self):
        if not isinstance(self.group, TorsionLabel):
            object.__setattr__(self, "group", TorsionLabel.parse(str(self.group)))
        if self.X < 1:
            raise UsageError("X must be at least 1")
        if not self.kappa > 0:
            raise UsageError("kappa must be positive")


@dataclass
class FamilyCount:
    s2_size: int
    s3_size: int
    s_size: int
    max_fiber_s3: int
    max_fiber_s: int
    max_gcd_valuation: int
    offending: list = field(default_factory=list)
    curves: list = field(default_factory=list)

    def sizes(self) -> tuple[int, int, int]:
        return self.s2_size, self.s3_size, self.s_size


def _integral_scale(fr: FamilyRecord) -> GaussianInt:
    """Smallest canonical lam with lam^w1 f and lam^w2 g in Z[i][t]."""
    w1, w2 = fr.weights
    need: dict[GaussianInt, int] = {}
    for poly, w in ((fr.f, w1), (fr.g, w2)):
        for c in poly.coeffs:
            if not c:
                continue
            for p, e in factor(c.den):
                v = valuation(c, p.value)
                if v < 0:
                    need[p.value] = max(need.get(p.value, 0), -((v) // w))
    lam = ONE
    for p, k in need.items():
        lam = lam * p**k
    return canonical_associate(lam)[0]


def _lattice(bound: float, nonzero: bool = False) -> list[GaussianInt]:
    """Gaussian integers with N(z) < bound."""
    R = isqrt(max(0, math.ceil(bound)))
    out = []
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            n = a * a + b * b
            if n < bound and (n or not nonzero):
                out.append(GaussianInt(a, b))
    return out


def _homog_int(coeffs: list[GaussianInt], a, b, weight: int, m: int) -> GaussianInt:
    total = GaussianInt(0)
    apow = ONE
    for k, c in enumerate(coeffs):
        if c:
            total = total + c * apow * b ** (weight - m * k)
        apow = apow * a
    return total


def _max_valuation(z: GaussianInt) -> int:
    if not z:
        return 0
    return max((e for _, e in factor(z)), default=0)


def family_count(cfg: S2Config, validate: bool = True, keep_curves: bool = False) -> FamilyCount:
    """Sizes of S2 (coprime parameter pairs), S3 (their coefficient pairs)
    and S (minimal classes), plus fiber sizes and max val_p(gcd(A^3, B^2)).

    Raises :class:`ValidationFailure` when some pair exceeds the height box
    and ``validate`` is set.
    """
    fr = lookup(cfg.group)
    if not isinstance(fr, FamilyRecord):
        raise DomainError(f"{cfg.group} has no family with finite d")
    w1, w2 = fr.weights
    n, m = fr.n, fr.m
    lam = _integral_scale(fr)
    fco = [(c * lam**w1).num for c in fr.f.coeffs]
    gco = [(c * lam**w2).num for c in fr.g.coeffs]
    X = cfg.X
    e = 3 * w1 * n
    a_bound = cfg.kappa * X ** (m / e)
    b_bound = cfg.kappa * X ** (1 / e)
    s2 = 0
    images: Counter = Counter()
    offending = []
    for b in _lattice(b_bound, nonzero=True):
        for a in _lattice(a_bound):
            if gcd(a, b) != ONE:
                continue
            A = _homog_int(fco, a, b, w1 * n, m)
            B = _homog_int(gco, a, b, w2 * n, m)
            if not (4 * A**3 + 27 * B**2):
                continue
            s2 += 1
            if A.norm() ** 3 >= X or B.norm() ** 2 >= X:
                offending.append((a, b, A, B))
            images[(A, B)] += 1
    if validate and offending:
        a, b, A, B = offending[0]
        raise ValidationFailure(
            f"kappa={cfg.kappa} too large: (a,b)=({a},{b}) gives A={A}, B={B} outside the height-{X} box; "
            f"try kappa={cfg.kappa / 2}",
            offending,
        )
    classes: Counter = Counter()
    max_val = 0
    for A, B in images:
        c = minimalize(Curve(A, B))
        classes[(c.A, sign_canonical_b(c.B))] += 1
        if A and B:
            max_val = max(max_val, _max_valuation(gcd(A**3, B**2)))
    return FamilyCount(
        s2,
        len(images),
        len(classes),
        max(images.values(), default=0),
        max(classes.values(), default=0),
        max_val,
        offending,
        [Curve(*k) for k in classes] if keep_curves else [],
    )


# ---------------------------------------------------------------------------
# probes


def _gaussian_gcd_norms(ar, ai, br, bi) -> np.ndarray:
    """Norm of gcd(a, b) elementwise, Euclid with nearest-integer quotients."""
    ar, ai, br, bi = (np.array(v, dtype=np.int64) for v in (ar, ai, br, bi))
    live = (br != 0) | (bi != 0)
    while live.any():
        n = br[live] * br[live] + bi[live] * bi[live]
        xr = ar[live] * br[live] + ai[live] * bi[live]
        xi = ai[live] * br[live] - ar[live] * bi[live]
        qr = np.floor_divide(2 * xr + n, 2 * n)
        qi = np.floor_divide(2 * xi + n, 2 * n)
        rr = ar[live] - (qr * br[live] - qi * bi[live])
        ri = ai[live] - (qr * bi[live] + qi * br[live])
        ar[live], ai[live] = br[live], bi[live]
        br[live], bi[live] = rr, ri
        live = (br != 0) | (bi != 0)
    return ar * ar + ai * ai


def _sample_nonzero(rng, count: int, norm_bound: int) -> tuple[np.ndarray, np.ndarray]:
    R = isqrt(norm_bound)
    re_out, im_out, have = [], [], 0
    while have < count:
        k = max(1024, int((count - have) * 1.4))
        re = rng.integers(-R, R + 1, size=k)
        im = rng.integers(-R, R + 1, size=k)
        n = re * re + im * im
        ok = (n > 0) & (n <= norm_bound)
        re_out.append(re[ok])
        im_out.append(im[ok])
        have += int(ok.sum())
    return np.concatenate(re_out)[:count], np.concatenate(im_out)[:count]


def coprimality_probe(sample_count: int, norm_bound: int, seed: int = 0) -> float:
    """Fraction of uniform pairs of nonzero Gaussian integers of norm <=
    norm_bound whose gcd is a unit."""
    if sample_count < 1:
        raise UsageError("sample_count must be positive")
    if norm_bound < 1 or norm_bound > 10**12:
        raise UsageError("norm_bound must lie in [1, 10^12]")
    rng = np.random.default_rng(seed)
    ar, ai = _sample_nonzero(rng, sample_count, norm_bound)
    br, bi = _sample_nonzero(rng, sample_count, norm_bound)
    return float(np.mean(_gaussian_gcd_norms(ar, ai, br, bi) == 1))


def _decompose(t: GaussianRational, m: int) -> tuple[GaussianInt, GaussianInt]:
    """t = a / b^m with b minimal: val_p(b) = ceil(-val_p(t) / m)."""
    b = ONE
    for p, e in factor(t.den):
        v = -valuation(t, p.value)
        b = b * p.value ** (-(-v // m))
    a = t * GaussianRational(b**m)
    if not a.is_integral():
        raise DomainError(f"decomposition of {t} failed")
    return a.num, canonical_associate(b)[0]


def _canonical_rational(q: GaussianRational) -> GaussianRational:
    if not q:
        return q
    return GaussianRational(canonical_associate(q.num)[0], q.den)


@dataclass
class Lemma46Report:
    group: TorsionLabel
    samples: int
    q_counts: Counter

    @property
    def q_set(self) -> frozenset:
        return frozenset(self.q_counts)


def _q_value(fr: FamilyRecord, t: GaussianRational, n: int, m: int) -> Optional[GaussianRational]:
    try:
        u = minimal_scaling(fr, t)
        c = specialize(fr, u, t)
    except DomainError:
        return None
    uq = GaussianRational(u) / GaussianRational(_scaling_divisor(c))
    _, b = _decompose(t, m)
    return _canonical_rational(uq / GaussianRational(b**n))


def lemma46_probe(fr: FamilyRecord, samples: int, seed: int = 0, t_norm: int = 50) -> Lemma46Report:
    """Write each sampled minimal specialization as u, t with t = a/b^m and
    collect q = u/b^n (up to units).  ``t`` runs over random quotients r/s
    of Gaussian integers of norm <= t_norm."""
    if not isinstance(fr, FamilyRecord):
        raise DomainError("lemma46_probe needs a family with finite d")
    rng = np.random.default_rng(seed)
    R = isqrt(t_norm)
    n, m = fr.n, fr.m
    counts: Counter = Counter()
    seen: dict = {}
    done = 0
    while done < samples:
        rr, ri, sr, si = (int(v) for v in rng.integers(-R, R + 1, size=4))
        if rr * rr + ri * ri > t_norm or sr * sr + si * si > t_norm or not (sr or si):
            continue
        t = GaussianRational(GaussianInt(rr, ri), GaussianInt(sr, si))
        if t not in seen:
            seen[t] = _q_value(fr, t, n, m)
        q = seen[t]
        if q is None:
            continue
        counts[q] += 1
        done += 1
    return Lemma46Report(fr.group, samples, counts)


__all__ += ["Lemma46Report"]
