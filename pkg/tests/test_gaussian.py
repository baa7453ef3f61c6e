import pytest
from hypothesis import given, strategies as st

from qitorsion.errors import DomainError, UsageError
from qitorsion.gaussian import (
    I,
    UNITS,
    GaussianInt as G,
    GaussianRational,
    canonical_associate,
    divisors,
    euclid_divmod,
    factor,
    gaussian_primes_up_to,
    gcd,
    kth_power_part,
    lcm,
    norm,
    parse_gaussian,
    parse_rational,
    valuation,
)

from oracles import gaussian_primes as oracle_primes

small = st.integers(-10**6, 10**6)
gints = st.builds(G, small, small)
nonzero = gints.filter(bool)


def _is_canonical(z):
    return z.re > 0 and z.im >= 0


@pytest.mark.parametrize("z, n", [(0, 0), (G(3, 4), 25), (G(1, 1), 2)])
def test_norm_examples(z, n):
    assert norm(z) == n


@pytest.mark.parametrize(
    "z, assoc, unit",
    [(G(-3), G(3), G(-1)), (I, G(1), G(0, -1)), (G(-1, -1), G(1, 1), G(-1))],
)
def test_canonical_associate_examples(z, assoc, unit):
    assert canonical_associate(z) == (assoc, unit)
    assert unit * z == assoc
    assert canonical_associate(assoc) == (assoc, G(1))


def test_euclid_examples():
    assert euclid_divmod(7, 2) == (G(4), G(-1))
    assert euclid_divmod(5, G(2, 1)) == (G(2, -1), G(0))
    assert euclid_divmod(G(17, -3), 1) == (G(17, -3), G(0))


def test_euclid_by_zero_raises():
    with pytest.raises(UsageError):
        euclid_divmod(3, 0)


def test_gcd_examples():
    assert gcd(G(-3, 4), 0) == canonical_associate(G(-3, 4))[0]
    assert gcd(2, G(1, 1)) == G(1, 1)
    assert gcd(3, 7) == G(1)


def test_factor_examples():
    f5 = factor(5)
    assert sorted(p.value.key() for p, _ in f5) == sorted([G(2, 1).key(), G(1, 2).key()])
    assert f5.expand() == G(5)
    f2 = factor(2)
    assert [(p.value, e) for p, e in f2] == [(G(1, 1), 2)] and f2.unit == G(0, -1)
    f9 = factor(9)
    assert [(p.value, e, p.kind) for p, e in f9] == [(G(3), 2, "inert")]


def test_factor_zero_raises():
    with pytest.raises(DomainError):
        factor(0)


@pytest.mark.parametrize("z, p, v", [(4, G(1, 1), 4), (5, G(2, 1), 1), (7, G(1, 1), 0)])
def test_valuation_examples(z, p, v):
    assert valuation(z, p) == v


def test_kth_power_part_examples():
    assert kth_power_part(2**12, 12) == (G(2), G(1))
    assert kth_power_part(8, 12) == (G(1), G(8))
    d, rest = kth_power_part(G(1, 1) ** 13 * 3, 12)
    assert d == G(1, 1)
    assert canonical_associate(rest)[0] == canonical_associate(G(1, 1) * 3)[0]


def test_primes_match_oracle():
    got = sorted((p.re, p.im) for p in gaussian_primes_up_to(2000))
    assert got == sorted(oracle_primes(2000))


def test_divisors_of_10():
    ds = divisors(10)
    assert len(ds) == 3 * 2 * 2  # (1+i)^2 (2+i) (2-i)
    assert all(d.divides(10) and _is_canonical(d) for d in ds)


@pytest.mark.parametrize("text, z", [("3+4i", G(3, 4)), ("-i", G(0, -1)), ("7", G(7)), ("-2-5i", G(-2, -5))])
def test_parse_roundtrip(text, z):
    assert parse_gaussian(text) == z
    assert parse_gaussian(str(z)) == z


def test_rational_lowest_terms():
    q = parse_rational("(2+2i)/(4)")
    assert q == GaussianRational(G(1, 1), G(2))
    assert q * GaussianRational(G(2)) == GaussianRational(G(1, 1))


# -- properties --------------------------------------------------------------


@given(gints, gints)
def test_norm_multiplicative(a, b):
    assert norm(a * b) == norm(a) * norm(b)


@given(gints, nonzero)
def test_division_remainder(a, b):
    q, r = euclid_divmod(a, b)
    assert q * b + r == a
    assert 2 * norm(r) <= norm(b)


@given(gints, gints)
def test_gcd_divides_and_is_canonical(a, b):
    if not a and not b:
        with pytest.raises(DomainError):
            gcd(a, b)
        return
    g = gcd(a, b)
    assert g.divides(a) and g.divides(b)
    assert _is_canonical(g)


@given(nonzero, nonzero)
def test_gcd_lcm_product(a, b):
    assert canonical_associate(gcd(a, b) * lcm(a, b))[0] == canonical_associate(a * b)[0]


@given(nonzero)
def test_factor_roundtrip(z):
    f = factor(z)
    assert f.expand() == z
    assert f.unit in UNITS
    assert all(_is_canonical(p.value) and e >= 1 for p, e in f)


@given(nonzero, st.integers(1, 13))
def test_kth_power_part_reassembles(z, k):
    d, rest = kth_power_part(z, k)
    assert canonical_associate(d**k * rest)[0] == canonical_associate(z)[0]
    assert all(e < k for _, e in factor(rest))


@given(nonzero, nonzero)
def test_valuation_additive(a, b):
    for p, _ in factor(a * b):
        assert valuation(a * b, p) == valuation(a, p) + valuation(b, p)


@given(gints, nonzero, gints, nonzero)
def test_rational_field_ops(a, b, c, d):
    x = GaussianRational(a, b)
    y = GaussianRational(c, d)
    assert (x + y) - y == x
    if y:
        assert (x * y) / y == x
