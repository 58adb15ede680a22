"""Prime generation: a segmented odd-only sieve plus two oracles.

``simple_sieve`` and ``trial_division_oracle`` exist to cross-check the
segmented stream, so they share no code with it.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .errors import BoundTooLargeError, ConfigError

__all__ = [
    "DEFAULT_SEGMENT_LENGTH",
    "SIMPLE_SIEVE_CAP",
    "TRIAL_DIVISION_CAP",
    "MAX_BOUND",
    "MaxValue",
    "MaxCount",
    "SieveConfig",
    "PrimeStream",
    "simple_sieve",
    "trial_division_oracle",
    "segmented_stream",
    "nth_prime_upper_bound",
]

DEFAULT_SEGMENT_LENGTH = 1 << 20
SIMPLE_SIEVE_CAP = 2 * 10**8
TRIAL_DIVISION_CAP = 10**6
MAX_BOUND = 2**63 - 1

_SMALL_PRIMES = (2, 3, 5, 7, 11)


def simple_sieve(x: int) -> np.ndarray:
    """All primes ``<= x`` as an ascending int64 array.

    Materializes one byte per odd integer, so ``x`` is capped at
    ``SIMPLE_SIEVE_CAP``.
    """
    x = int(x)
    if x < 0:
        raise ConfigError(f"bound must be non-negative, got {x}")
    if x > SIMPLE_SIEVE_CAP:
        raise BoundTooLargeError(f"simple_sieve bound {x} exceeds cap {SIMPLE_SIEVE_CAP}")
    if x < 2:
        return np.empty(0, dtype=np.int64)
    # index i <-> odd number 2*i + 3
    is_prime = np.ones((x - 1) // 2, dtype=bool)
    for p in range(3, math.isqrt(x) + 1, 2):
        if is_prime[(p - 3) // 2]:
            is_prime[(p * p - 3) // 2 :: p] = False
    odd = 2 * np.flatnonzero(is_prime).astype(np.int64) + 3
    return np.concatenate([np.array([2], dtype=np.int64), odd])


def trial_division_oracle(x: int) -> list[int]:
    """All primes ``<= x`` found by testing every candidate on its own.

    Deliberately naive: no sieve, no shared state between candidates.
    """
    x = int(x)
    if x > TRIAL_DIVISION_CAP:
        raise BoundTooLargeError(f"trial division bound {x} exceeds cap {TRIAL_DIVISION_CAP}")
    out = []
    for n in range(2, x + 1):
        if n < 4:
            out.append(n)
        elif n % 2 and all(n % d for d in range(3, math.isqrt(n) + 1, 2)):
            out.append(n)
    return out


def nth_prime_upper_bound(n: int) -> int:
    """An integer ``B`` with ``p_n <= B`` (Rosser's bound for ``n >= 6``)."""
    n = int(n)
    if n < 1:
        raise ConfigError(f"prime index must be >= 1, got {n}")
    if n <= len(_SMALL_PRIMES):
        return _SMALL_PRIMES[n - 1]
    ln = math.log(n)
    # +1 absorbs float rounding; the bound only needs to be safe, not tight
    return math.ceil(n * (ln + math.log(ln))) + 1


@dataclass(frozen=True)
class MaxValue:
    """Emit every prime ``<= x``."""

    x: int

    def __post_init__(self):
        if self.x < 2:
            raise ConfigError(f"MaxValue.x must be >= 2, got {self.x}")
        if self.x > MAX_BOUND:
            raise BoundTooLargeError(f"MaxValue.x exceeds 2**63 - 1")


@dataclass(frozen=True)
class MaxCount:
    """Emit exactly ``np`` primes."""

    np: int

    def __post_init__(self):
        if self.np < 1:
            raise ConfigError(f"MaxCount.np must be >= 1, got {self.np}")


Limit = Union[MaxValue, MaxCount]


@dataclass(frozen=True)
class SieveConfig:
    """How to sieve and when to stop.

    ``start`` and ``primes_below_start`` let a stream pick up mid-range (used
    when resuming from a checkpoint). With a ``MaxCount`` limit the count is
    of primes emitted by *this* stream, starting at ``start``.
    """

    limit: Limit
    segment_length: int = DEFAULT_SEGMENT_LENGTH
    start: int = 2
    primes_below_start: int = 0
    threads: int = 1

    def __post_init__(self):
        if not isinstance(self.limit, (MaxValue, MaxCount)):
            raise ConfigError(f"limit must be MaxValue or MaxCount, got {self.limit!r}")
        if self.segment_length < 2 or self.segment_length % 2:
            raise ConfigError(f"segment_length must be even and >= 2, got {self.segment_length}")
        if self.start < 2:
            raise ConfigError(f"start must be >= 2, got {self.start}")
        if self.primes_below_start < 0:
            raise ConfigError("primes_below_start must be >= 0")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.bound > MAX_BOUND:
            raise BoundTooLargeError(f"sieve bound {self.bound} exceeds 2**63 - 1")

    @property
    def bound(self) -> int:
        """Largest integer the stream may need to examine."""
        if isinstance(self.limit, MaxValue):
            return self.limit.x
        return nth_prime_upper_bound(self.primes_below_start + self.limit.np)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in ``[lo, hi)`` given all odd primes up to ``isqrt(hi - 1)``."""
    head = [2] if lo <= 2 < hi else []
    a = max(lo, 3) | 1
    if a >= hi:
        return np.array(head, dtype=np.int64)
    mask = np.ones((hi - a + 1) // 2, dtype=bool)

    ps = base[base.astype(np.uint64) ** 2 < np.uint64(hi)].astype(np.uint64)
    if ps.size:
        ua = np.uint64(a)
        starts = np.maximum(ps * ps, (ua + ps - np.uint64(1)) // ps * ps)
        starts += ps * ((starts & np.uint64(1)) ^ np.uint64(1))  # even multiple -> next odd one
        offs = ((starts - ua) // np.uint64(2)).tolist()
        for p, off in zip(ps.tolist(), offs):
            mask[off::p] = False

    odd = np.uint64(a) + np.uint64(2) * np.flatnonzero(mask).astype(np.uint64)
    odd = odd.astype(np.int64)
    if head:
        return np.concatenate([np.array(head, dtype=np.int64), odd])
    return odd


@dataclass
class PrimeStream:
    """Ascending primes from a segmented sieve.

    Iterate for Python ints, or call :meth:`segments` for one numpy array
    per sieved block (the fast path). ``position`` is the next integer not
    yet examined; ``emitted`` counts primes handed out so far.
    """

    config: SieveConfig
    position: int = field(init=False)
    emitted: int = field(init=False, default=0)
    exhausted: bool = field(init=False, default=False)

    def __post_init__(self):
        self.position = self.config.start
        self._base = None

    def _base_primes(self) -> np.ndarray:
        if self._base is None:
            b = simple_sieve(math.isqrt(self.config.bound))
            self._base = b[1:]  # odd primes only
        return self._base

    def _ranges(self) -> Iterator[tuple[int, int]]:
        bound = self.config.bound
        lo = self.config.start
        step = self.config.segment_length
        while lo <= bound:
            hi = min(lo + step, bound + 1)
            yield lo, hi
            lo = hi

    def _raw_segments(self) -> Iterator[tuple[int, np.ndarray]]:
        base = self._base_primes()
        threads = self.config.threads
        if threads == 1:
            for lo, hi in self._ranges():
                yield hi, _sieve_segment(lo, hi, base)
            return
        # bounded look-ahead; results are consumed strictly in submission order
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pending = deque()
            ranges = self._ranges()
            try:
                for lo, hi in ranges:
                    pending.append((hi, pool.submit(_sieve_segment, lo, hi, base)))
                    if len(pending) >= 2 * threads:
                        hi0, fut = pending.popleft()
                        yield hi0, fut.result()
                while pending:
                    hi0, fut = pending.popleft()
                    yield hi0, fut.result()
            finally:
                for _, fut in pending:
                    fut.cancel()

    def segments(self) -> Iterator[np.ndarray]:
        """Yield non-empty ascending int64 arrays of primes, block by block."""
        if self.exhausted:
            return
        limit = self.config.limit
        for hi, primes in self._raw_segments():
            if isinstance(limit, MaxCount):
                room = limit.np - self.emitted
                if primes.size >= room:
                    primes = primes[:room]
                    self.emitted += primes.size
                    self.position = int(primes[-1]) + 1 if primes.size else self.position
                    self.exhausted = True
                    if primes.size:
                        yield primes
                    return
            self.emitted += primes.size
            self.position = hi
            if primes.size:
                yield primes
        self.exhausted = True

    def __iter__(self) -> Iterator[int]:
        for seg in self.segments():
            yield from seg.tolist()


def segmented_stream(config: SieveConfig) -> PrimeStream:
    return PrimeStream(config)
