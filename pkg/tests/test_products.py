import random

import pytest
from hypothesis import given, strategies as st

from primerace.errors import BoundTooLargeError, ConfigError
from primerace.products import (
    ENUMERATION_CAP,
    R1,
    R5,
    closure_class,
    composite_census,
    count_cross_class_products,
    count_same_class_products,
    enumerate_products,
    multiplicity_histogram,
    product_index,
)
from primerace.race import ResidueClass, classify_residue
from primerace.sieve import simple_sieve


def test_closure_table():
    assert closure_class(R1, R1) is R1
    assert closure_class(R5, R5) is R1
    assert closure_class(R1, R5) is R5
    assert closure_class(R5, R1) is R5


def test_closure_rejects_neither():
    with pytest.raises(ConfigError):
        closure_class(ResidueClass.NEITHER, R1)


@given(st.sampled_from([R1, R5]), st.integers(0, 10**6), st.sampled_from([R1, R5]), st.integers(0, 10**6))
def test_index_substitutions(a, n1, b, n2):
    cls, n3 = product_index(a, n1, b, n2)
    assert (int(a) + 6 * n1) * (int(b) + 6 * n2) == int(cls) + 6 * n3
    assert cls is closure_class(a, b)


def test_closure_matches_representatives():
    for a in (R1, R5):
        for b in (R1, R5):
            assert (int(a) * int(b)) % 6 == closure_class(a, b)


def brute_counts(n):
    """Pairs listed by explicit nested loops over the progression terms."""
    ones = [1 + 6 * k for k in range(1, n + 1)]
    fives = [5 + 6 * k for k in range(n + 1)]
    same = [(a, b) for seq in (ones, fives) for i, a in enumerate(seq) for b in seq[i:]]
    cross = [(a, b) for a in ones for b in fives]
    return same, cross


@pytest.mark.parametrize("n, same, cross", [(0, 1, 0), (1, 4, 2), (2, 9, 6)])
def test_small_counts(n, same, cross):
    s, c = brute_counts(n)
    assert (len(s), len(c)) == (same, cross)
    assert count_same_class_products(n) == same
    assert count_cross_class_products(n) == cross


def test_depth_one_pairs_listed():
    same, cross = brute_counts(1)
    assert sorted(a * b for a, b in same) == [25, 49, 55, 121]
    assert sorted(a * b for a, b in cross) == [35, 77]


@pytest.mark.parametrize("n", [0, 1, 2, 3, 10, 57, 200])
def test_enumeration_matches_closed_forms(n):
    rep = enumerate_products(n)
    s, c = brute_counts(n) if n <= 60 else (None, None)
    if s is not None:
        assert rep.same_class_enumerated == len(s)
        assert rep.cross_class_enumerated == len(c)
    assert rep.same_class_enumerated == (n + 1) ** 2
    assert rep.cross_class_enumerated == n * (n + 1)
    assert rep.agrees


def test_enumeration_cap():
    with pytest.raises(BoundTooLargeError):
        enumerate_products(ENUMERATION_CAP + 1)
    with pytest.raises(ConfigError):
        count_same_class_products(-1)
    with pytest.raises(ConfigError):
        count_cross_class_products(-1)


def test_closure_soundness_random_sample():
    rng = random.Random(20261018)
    coprime = [v for v in range(5, 10**6 + 1) if v % 2 and v % 3]
    for _ in range(10**4):
        a, b = rng.choice(coprime), rng.choice(coprime)
        assert classify_residue(a * b) == closure_class(classify_residue(a), classify_residue(b))


def test_census_100():
    rep = composite_census(100)
    assert (rep.r1.total, rep.r1.primes, rep.r1.composites) == (17, 11, 5)
    assert (rep.r5.total, rep.r5.primes, rep.r5.composites) == (16, 12, 4)
    assert rep.unit
    ones = [v for v in range(1, 101) if v % 6 == 1]
    primes = set(simple_sieve(100).tolist())
    assert [v for v in ones if v > 1 and v not in primes] == [25, 49, 55, 85, 91]
    assert [v for v in range(1, 101) if v % 6 == 5 and v not in primes] == [35, 65, 77, 95]
    assert rep.identity_holds


def test_census_5():
    rep = composite_census(5)
    assert (rep.r1.total, rep.r1.primes, rep.r1.composites) == (1, 0, 0)
    assert (rep.r5.total, rep.r5.primes, rep.r5.composites) == (1, 1, 0)


def test_census_partition_and_identity_small_range():
    for x in range(1, 2000):
        rep = composite_census(x)
        assert rep.r1.total == rep.r1.primes + rep.r1.composites + 1
        assert rep.r5.total == rep.r5.primes + rep.r5.composites
        assert rep.identity_holds


def test_census_cap():
    with pytest.raises(ConfigError):
        composite_census(0)
    with pytest.raises(BoundTooLargeError):
        composite_census(10**8 + 1)


def factor_pair_counts(x, cls):
    """Count d*e = c, 1 < d <= e, by direct double loop."""
    counts = {}
    d = 2
    while d * d <= x:
        for e in range(d, x // d + 1):
            c = d * e
            if c % 6 == int(cls):
                counts[c] = counts.get(c, 0) + 1
        d += 1
    return counts


def test_histogram_examples():
    assert multiplicity_histogram(50, R1).counts == {1: 2}
    assert multiplicity_histogram(100, R5).counts == {1: 4}
    h = multiplicity_histogram(200, R1)
    assert factor_pair_counts(200, R1)[175] == 2
    assert h.counts.get(2, 0) >= 1


@pytest.mark.parametrize("cls", [R1, R5])
@pytest.mark.parametrize("x", [1, 24, 25, 1000, 20_000])
def test_histogram_matches_double_loop(x, cls):
    pairs = factor_pair_counts(x, cls)
    expected = {}
    for r in pairs.values():
        expected[r] = expected.get(r, 0) + 1
    h = multiplicity_histogram(x, cls)
    assert h.counts == expected
    assert h.factor_pairs == sum(pairs.values())
    rep = composite_census(x)
    assert h.composites == (rep.r1 if cls is R1 else rep.r5).composites


def test_histogram_preconditions():
    with pytest.raises(ConfigError):
        multiplicity_histogram(100, ResidueClass.NEITHER)
    with pytest.raises(BoundTooLargeError):
        multiplicity_histogram(10**7 + 1, R1)
