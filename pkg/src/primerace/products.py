"""Products across the progressions 1+6n and 5+6n.

Covers the mod-6 closure table, the closed-form counts of factor pairs
(``(n+1)**2`` same-class, ``n*(n+1)`` cross-class), a brute-force
enumeration that checks them, and a census of composites per class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundTooLargeError, ConfigError, VerificationError
from .race import ResidueClass
from .sieve import simple_sieve

__all__ = [
    "ENUMERATION_CAP",
    "CENSUS_CAP",
    "HISTOGRAM_CAP",
    "CLOSURE_TABLE",
    "closure_class",
    "product_index",
    "count_same_class_products",
    "count_cross_class_products",
    "ProductCountReport",
    "enumerate_products",
    "ClassCensus",
    "CensusReport",
    "composite_census",
    "MultiplicityHistogram",
    "multiplicity_histogram",
]

ENUMERATION_CAP = 10**4
CENSUS_CAP = 10**8
HISTOGRAM_CAP = 10**7

R1, R5 = ResidueClass.R1, ResidueClass.R5

CLOSURE_TABLE = {
    (R1, R1): R1,
    (R5, R5): R1,
    (R1, R5): R5,
    (R5, R1): R5,
}


def _check_class(c) -> ResidueClass:
    if c not in (R1, R5):
        raise ConfigError(f"expected R1 or R5, got {c!r}")
    return ResidueClass(c)


def closure_class(a: ResidueClass, b: ResidueClass) -> ResidueClass:
    """Class of a product of an ``a`` member and a ``b`` member."""
    return CLOSURE_TABLE[_check_class(a), _check_class(b)]


def product_index(a: ResidueClass, n1: int, b: ResidueClass, n2: int) -> tuple[ResidueClass, int]:
    """Progression index of ``(a + 6*n1) * (b + 6*n2)``.

    Returns ``(cls, n3)`` with the product equal to ``cls + 6*n3``.
    """
    a, b = _check_class(a), _check_class(b)
    if a == R5 and b == R1:
        a, b, n1, n2 = b, a, n2, n1
    if a == R1 and b == R1:
        return R1, n1 + n2 + 6 * n1 * n2
    if a == R5 and b == R5:
        return R1, 4 + 5 * n1 + 5 * n2 + 6 * n1 * n2
    return R5, 5 * n1 + n2 + 6 * n1 * n2


def count_same_class_products(n: int) -> int:
    """Unordered factor pairs within one progression, both factors of index <= n.

    From 1+6n (unit dropped) there are n terms, giving n(n+1)/2 pairs with
    repetition; from 5+6n there are n+1 terms, giving (n+1)(n+2)/2. The two
    add up to (n+1)**2.
    """
    if n < 0:
        raise ConfigError(f"depth must be >= 0, got {n}")
    return (n + 1) ** 2


def count_cross_class_products(n: int) -> int:
    """Pairs (r1, r5) with r1 from 1+6n (unit dropped) and r5 from 5+6n."""
    if n < 0:
        raise ConfigError(f"depth must be >= 0, got {n}")
    return n * (n + 1)


@dataclass(frozen=True)
class ProductCountReport:
    n: int
    same_class_closed: int
    cross_class_closed: int
    same_class_enumerated: int
    cross_class_enumerated: int

    @property
    def agrees(self) -> bool:
        return (
            self.same_class_closed == self.same_class_enumerated
            and self.cross_class_closed == self.cross_class_enumerated
        )


def _terms(n: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(n + 1, dtype=np.int64)
    return (1 + 6 * k)[1:], 5 + 6 * k


def enumerate_products(n: int) -> ProductCountReport:
    """Count factor pairs at depth ``n`` by listing every product.

    Raises :class:`VerificationError` if any product lands outside the class
    the closure table predicts.
    """
    if n < 0:
        raise ConfigError(f"depth must be >= 0, got {n}")
    if n > ENUMERATION_CAP:
        raise BoundTooLargeError(f"depth {n} exceeds enumeration cap {ENUMERATION_CAP}")
    ones, fives = _terms(n)

    same = 0
    for seq in (ones, fives):
        for i in range(seq.size):
            prods = seq[i] * seq[i:]
            if np.any(prods % 6 != 1):
                raise VerificationError(f"same-class product off 1 mod 6 at depth {n}")
            same += prods.size

    cross = 0
    for r1 in ones.tolist():
        prods = r1 * fives
        if np.any(prods % 6 != 5):
            raise VerificationError(f"cross-class product off 5 mod 6 at depth {n}")
        cross += prods.size

    return ProductCountReport(
        n=n,
        same_class_closed=count_same_class_products(n),
        cross_class_closed=count_cross_class_products(n),
        same_class_enumerated=same,
        cross_class_enumerated=cross,
    )


@dataclass(frozen=True)
class ClassCensus:
    total: int
    primes: int
    composites: int


@dataclass(frozen=True)
class CensusReport:
    """Integers in ``[1, x]`` per class, split into primes and composites.

    The unit 1 belongs to R1 but is neither prime nor composite.
    """

    x: int
    r1: ClassCensus
    r5: ClassCensus
    unit: bool

    @property
    def delta(self) -> int:
        return self.r5.primes - self.r1.primes

    @property
    def identity_holds(self) -> bool:
        lhs = self.r1.composites - self.r5.composites
        rhs = (self.r1.total - self.r5.total) - int(self.unit) + self.delta
        return lhs == rhs


def _is_prime_table(x: int) -> np.ndarray:
    table = np.zeros(x + 1, dtype=bool)
    table[simple_sieve(x)] = True
    return table


def composite_census(x: int) -> CensusReport:
    if x < 1:
        raise ConfigError(f"bound must be >= 1, got {x}")
    if x > CENSUS_CAP:
        raise BoundTooLargeError(f"census bound {x} exceeds cap {CENSUS_CAP}")
    is_prime = _is_prime_table(x)
    v = np.arange(x + 1, dtype=np.int64)
    res = v % 6
    composite = ~is_prime & (v > 1)

    def one(r: int) -> ClassCensus:
        m = res == r
        m[0] = False
        return ClassCensus(
            total=int(m.sum()),
            primes=int((m & is_prime).sum()),
            composites=int((m & composite).sum()),
        )

    return CensusReport(x=x, r1=one(1), r5=one(5), unit=True)


@dataclass(frozen=True)
class MultiplicityHistogram:
    """Composites ``<= x`` in a class, bucketed by factor-pair count.

    ``counts[r]`` is how many composites have exactly ``r`` unordered
    factorizations ``d * e`` with ``1 < d <= e``.
    """

    x: int
    cls: ResidueClass
    counts: dict[int, int]

    @property
    def composites(self) -> int:
        return sum(self.counts.values())

    @property
    def factor_pairs(self) -> int:
        return sum(r * c for r, c in self.counts.items())


def multiplicity_histogram(x: int, cls: ResidueClass) -> MultiplicityHistogram:
    cls = _check_class(cls)
    if x < 1:
        raise ConfigError(f"bound must be >= 1, got {x}")
    if x > HISTOGRAM_CAP:
        raise BoundTooLargeError(f"histogram bound {x} exceeds cap {HISTOGRAM_CAP}")
    pairs = np.zeros(x + 1, dtype=np.int32)
    # divisors of an integer coprime to 6 are themselves coprime to 6
    for d in range(5, math.isqrt(x) + 1):
        if d % 2 and d % 3:
            pairs[d * d :: d] += 1
    members = pairs[int(cls) :: 6]
    r, c = np.unique(members[members > 0], return_counts=True)
    return MultiplicityHistogram(x=x, cls=cls, counts=dict(zip(r.tolist(), c.tolist())))
