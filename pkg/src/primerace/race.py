"""Residue-class prime race: counters, the delta series and its extrema.

The race modulus defaults to 6, where the two competing classes are
1 mod 6 and 5 mod 6 and ``delta = count5 - count1``. For any modulus with
exactly two coprime residues (3, 4, 6) delta is "top residue minus residue
1"; for larger moduli only the per-residue counts are kept.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigError, OrderError
from .sieve import PrimeStream

__all__ = [
    "ResidueClass",
    "coprime_residues",
    "classify_residue",
    "RaceCounters",
    "DeltaSample",
    "RaceSummary",
    "RaceTracker",
    "accumulate",
    "delta_series",
    "sign_changes",
    "row_to_sample",
]


class ResidueClass(enum.IntEnum):
    """Position of an integer relative to the progressions 1+6n and 5+6n.

    ``NEITHER`` covers 2, 3 and anything sharing a factor with 6. The
    integer value is the residue itself, so ``NEITHER == 0``.
    """

    NEITHER = 0
    R1 = 1
    R5 = 5

    @classmethod
    def of(cls, v: int) -> "ResidueClass":
        r = v % 6
        return cls(r) if r in (1, 5) else cls.NEITHER


def _check_modulus(modulus: int) -> None:
    if modulus < 3:
        raise ConfigError(f"modulus must be >= 3, got {modulus}")


def coprime_residues(modulus: int) -> tuple[int, ...]:
    _check_modulus(modulus)
    return tuple(r for r in range(1, modulus) if math.gcd(r, modulus) == 1)


def classify_residue(v: int, modulus: int = 6) -> int:
    """Residue of ``v`` if coprime to ``modulus``, else ``ResidueClass.NEITHER``.

    For modulus 6 the result is a :class:`ResidueClass` member.
    """
    _check_modulus(modulus)
    if v < 2:
        raise ConfigError(f"value must be >= 2, got {v}")
    if modulus == 6:
        return ResidueClass.of(v)
    r = v % modulus
    return r if math.gcd(r, modulus) == 1 else ResidueClass.NEITHER


@dataclass(frozen=True)
class RaceCounters:
    """Running totals of a race after ``np`` primes.

    ``counts`` is aligned with ``coprime_residues(modulus)``.
    """

    modulus: int = 6
    np: int = 0
    counts: tuple[int, ...] = ()
    neither: int = 0
    last_prime: int = 0

    def __post_init__(self):
        residues = coprime_residues(self.modulus)
        if not self.counts:
            object.__setattr__(self, "counts", (0,) * len(residues))
        elif len(self.counts) != len(residues):
            raise ConfigError(f"expected {len(residues)} counts for modulus {self.modulus}")
        if self.np != sum(self.counts) + self.neither:
            raise ConfigError("np must equal the sum of class counts plus neither")

    @property
    def residues(self) -> tuple[int, ...]:
        return coprime_residues(self.modulus)

    @property
    def two_class(self) -> bool:
        return len(self.counts) == 2

    @property
    def count1(self) -> int:
        return self.counts[0]

    @property
    def count5(self) -> int:
        """Count of the opposing class (residue ``modulus - 1``)."""
        if not self.two_class:
            raise AttributeError(f"modulus {self.modulus} has more than two coprime classes")
        return self.counts[1]

    @property
    def delta(self) -> int | None:
        return self.counts[1] - self.counts[0] if self.two_class else None


def accumulate(counters: RaceCounters, prime: int) -> RaceCounters:
    """Return ``counters`` advanced by one prime."""
    if prime <= counters.last_prime:
        raise OrderError(f"prime {prime} does not exceed last prime {counters.last_prime}")
    r = classify_residue(prime, counters.modulus)
    if r == ResidueClass.NEITHER:
        return replace(counters, np=counters.np + 1, neither=counters.neither + 1, last_prime=prime)
    counts = list(counters.counts)
    counts[counters.residues.index(int(r))] += 1
    return replace(counters, np=counters.np + 1, counts=tuple(counts), last_prime=prime)


@dataclass(frozen=True)
class DeltaSample:
    np: int
    prime: int
    counts: tuple[int, ...]
    delta: int | None

    @property
    def count1(self) -> int:
        return self.counts[0]

    @property
    def count5(self) -> int:
        return self.counts[-1]


@dataclass(frozen=True)
class RaceSummary:
    final: DeltaSample | None
    min_delta: int | None = None
    min_np: int | None = None
    max_delta: int | None = None
    max_np: int | None = None
    sign_changes: tuple[tuple[int, int], ...] = ()


def sign_changes(
    deltas: Sequence[int], primes: Sequence[int] | None = None, start_np: int = 1
) -> list[tuple[int, int | None]]:
    """Crossings of zero in a full-resolution delta trajectory.

    Zero is neutral: an entry is reported when its sign is nonzero and
    differs from the most recent nonzero sign. Entries are returned as
    ``(np, prime)`` with ``np`` counted from ``start_np``.
    """
    out = []
    last = 0
    for i, d in enumerate(deltas):
        s = (d > 0) - (d < 0)
        if s == 0:
            continue
        if last and s != last:
            out.append((start_np + i, primes[i] if primes is not None else None))
        last = s
    return out


@dataclass
class RaceTracker:
    """Vectorized accumulator that consumes primes block by block.

    ``update`` returns the sampled rows for the block (every ``np``
    divisible by ``sample_every``); the extrema and sign changes are tracked
    over every prime. Rows are int64 arrays laid out as
    ``np, prime, *counts[, delta]``.
    """

    modulus: int = 6
    sample_every: int = 1000
    counters: RaceCounters | None = None
    min_delta: int | None = None
    min_np: int | None = None
    max_delta: int | None = None
    max_np: int | None = None
    last_sign: int = 0
    crossings: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if self.sample_every < 1:
            raise ConfigError(f"sample_every must be >= 1, got {self.sample_every}")
        if self.counters is None:
            self.counters = RaceCounters(modulus=self.modulus)
        elif self.counters.modulus != self.modulus:
            raise ConfigError("counters modulus does not match tracker modulus")
        self._residues = np.array(coprime_residues(self.modulus), dtype=np.int64)
        self._last_row = None

    @property
    def columns(self) -> list[str]:
        cols = ["np", "prime"] + [f"count{r}" for r in self._residues.tolist()]
        if self.counters.two_class:
            cols.append("delta")
        return cols

    def update(self, primes) -> np.ndarray:
        ps = np.asarray(primes, dtype=np.int64)
        c = self.counters
        if ps.size == 0:
            return np.empty((0, len(self.columns)), dtype=np.int64)
        if ps[0] <= c.last_prime or (ps.size > 1 and not np.all(ps[1:] > ps[:-1])):
            raise OrderError("primes must be fed in strictly increasing order")

        k = ps.size
        res = ps % self.modulus
        hits = res[None, :] == self._residues[:, None]
        cum = np.cumsum(hits, axis=1, dtype=np.int64) + np.array(c.counts, dtype=np.int64)[:, None]
        nps = c.np + np.arange(1, k + 1, dtype=np.int64)

        cols = [nps, ps, *cum]
        if c.two_class:
            delta = cum[1] - cum[0]
            cols.append(delta)
            self._track(delta, nps, ps)

        first = (-(c.np + 1)) % self.sample_every
        idx = np.arange(first, k, self.sample_every)
        rows = np.stack(cols, axis=1)
        self._last_row = rows[-1].copy()

        counts = tuple(int(v) for v in cum[:, -1])
        self.counters = replace(
            c,
            np=c.np + k,
            counts=counts,
            neither=c.neither + k - (sum(counts) - sum(c.counts)),
            last_prime=int(ps[-1]),
        )
        return rows[idx]

    def _track(self, delta: np.ndarray, nps: np.ndarray, ps: np.ndarray) -> None:
        i = int(np.argmin(delta))
        if self.min_delta is None or delta[i] < self.min_delta:
            self.min_delta, self.min_np = int(delta[i]), int(nps[i])
        i = int(np.argmax(delta))
        if self.max_delta is None or delta[i] > self.max_delta:
            self.max_delta, self.max_np = int(delta[i]), int(nps[i])

        s = np.sign(delta)
        nz = np.flatnonzero(s)
        if nz.size == 0:
            return
        sv = s[nz]
        prev = np.concatenate([[self.last_sign], sv[:-1]])
        hit = nz[(prev != 0) & (sv != prev)]
        self.crossings.extend(zip(nps[hit].tolist(), ps[hit].tolist()))
        self.last_sign = int(sv[-1])

    def final_row(self) -> np.ndarray | None:
        """The last row seen, if it was not already emitted as a sample."""
        if self._last_row is None or self.counters.np % self.sample_every == 0:
            return None
        return self._last_row

    def current_sample(self) -> DeltaSample | None:
        c = self.counters
        if c.np == 0:
            return None
        return DeltaSample(c.np, c.last_prime, c.counts, c.delta)

    def summary(self) -> RaceSummary:
        return RaceSummary(
            final=self.current_sample(),
            min_delta=self.min_delta,
            min_np=self.min_np,
            max_delta=self.max_delta,
            max_np=self.max_np,
            sign_changes=tuple(self.crossings),
        )

    def extremes_state(self) -> dict:
        """JSON-friendly snapshot of everything not held in ``counters``."""
        return {
            "min_delta": self.min_delta,
            "min_np": self.min_np,
            "max_delta": self.max_delta,
            "max_np": self.max_np,
            "last_sign": self.last_sign,
            "sign_changes": [list(x) for x in self.crossings],
        }

    def load_extremes(self, state: dict) -> None:
        self.min_delta = state["min_delta"]
        self.min_np = state["min_np"]
        self.max_delta = state["max_delta"]
        self.max_np = state["max_np"]
        self.last_sign = state["last_sign"]
        self.crossings = [tuple(x) for x in state["sign_changes"]]


def row_to_sample(row: Sequence[int], two_class: bool) -> DeltaSample:
    row = [int(v) for v in row]
    if two_class:
        return DeltaSample(row[0], row[1], tuple(row[2:-1]), row[-1])
    return DeltaSample(row[0], row[1], tuple(row[2:]), None)


def _blocks(stream, size: int = 1 << 16) -> Iterator[np.ndarray]:
    if isinstance(stream, PrimeStream):
        yield from stream.segments()
        return
    buf = []
    for p in stream:
        buf.append(p)
        if len(buf) == size:
            yield np.array(buf, dtype=np.int64)
            buf = []
    if buf:
        yield np.array(buf, dtype=np.int64)


def delta_series(
    stream: PrimeStream | Iterable[int], modulus: int = 6, sample_every: int = 1000
) -> tuple[list[DeltaSample], RaceSummary]:
    """Run a race over ``stream``; return the sampled points and the summary.

    A sample is taken at every ``np`` divisible by ``sample_every`` and at
    the final prime.
    """
    tracker = RaceTracker(modulus=modulus, sample_every=sample_every)
    two = tracker.counters.two_class
    samples = []
    for block in _blocks(stream):
        samples.extend(row_to_sample(r, two) for r in tracker.update(block))
    last = tracker.final_row()
    if last is not None:
        samples.append(row_to_sample(last, two))
    return samples, tracker.summary()
