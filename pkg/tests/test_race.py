import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primerace.errors import ConfigError, OrderError
from primerace.race import (
    RaceCounters,
    RaceTracker,
    ResidueClass,
    accumulate,
    classify_residue,
    coprime_residues,
    delta_series,
    sign_changes,
)
from primerace.sieve import MaxCount, MaxValue, SieveConfig, segmented_stream, simple_sieve, trial_division_oracle


def test_classify_examples():
    assert classify_residue(5, 6) is ResidueClass.R5
    assert classify_residue(3, 6) is ResidueClass.NEITHER
    assert classify_residue(2, 6) is ResidueClass.NEITHER
    assert classify_residue(49, 6) is ResidueClass.R1


def test_classify_general_modulus():
    assert classify_residue(7, 4) == 3
    assert classify_residue(13, 4) == 1
    assert classify_residue(2, 4) == ResidueClass.NEITHER
    assert classify_residue(11, 10) == 1
    assert classify_residue(15, 10) == ResidueClass.NEITHER


def test_classify_preconditions():
    with pytest.raises(ConfigError):
        classify_residue(1, 6)
    with pytest.raises(ConfigError):
        classify_residue(5, 2)


@given(st.integers(5, 10**12))
def test_odd_coprime_to_3_is_exactly_one_class(v):
    c = classify_residue(v, 6)
    if v % 2 and v % 3:
        assert c in (ResidueClass.R1, ResidueClass.R5)
    else:
        assert c is ResidueClass.NEITHER


@given(st.integers(2, 10**9), st.integers(3, 60))
def test_general_modulus_matches_gcd(v, m):
    c = classify_residue(v, m)
    if math.gcd(v, m) == 1:
        assert c == v % m and c in coprime_residues(m)
    else:
        assert c == ResidueClass.NEITHER


def run_counters(primes, modulus=6):
    c = RaceCounters(modulus=modulus)
    for p in primes:
        c = accumulate(c, p)
    return c


def test_accumulate_examples():
    c = accumulate(RaceCounters(), 2)
    assert (c.np, c.delta) == (1, 0)
    c = run_counters([2, 3, 5])
    assert (c.np, c.count5, c.count1, c.delta) == (3, 1, 0, 1)
    c = run_counters(trial_division_oracle(47))
    assert (c.np, c.count5, c.count1, c.delta) == (15, 7, 6, 1)


def test_accumulate_rejects_out_of_order():
    c = run_counters([2, 3, 5])
    with pytest.raises(OrderError):
        accumulate(c, 5)
    with pytest.raises(OrderError):
        accumulate(c, 3)


def test_counters_conservation_and_step():
    c = RaceCounters()
    prev = 0
    for p in trial_division_oracle(20_000):
        c = accumulate(c, p)
        assert c.np == c.count1 + c.count5 + c.neither
        assert c.neither <= 2
        assert abs(c.delta - prev) <= 1
        prev = c.delta


def test_counters_reject_inconsistent_totals():
    with pytest.raises(ConfigError):
        RaceCounters(np=3, counts=(1, 1), neither=0)
    with pytest.raises(ConfigError):
        RaceCounters(modulus=6, counts=(1, 1, 1), np=3)


def test_wide_modulus_counts():
    c = run_counters(trial_division_oracle(1000), modulus=10)
    assert c.residues == (1, 3, 7, 9)
    assert c.delta is None
    for r, n in zip(c.residues, c.counts):
        assert n == sum(1 for p in trial_division_oracle(1000) if p % 10 == r)


def test_delta_series_first_five():
    samples, summary = delta_series(segmented_stream(SieveConfig(MaxCount(5))), 6, 1)
    assert [s.delta for s in samples] == [0, 0, 1, 0, 1]
    assert [s.np for s in samples] == [1, 2, 3, 4, 5]
    assert summary.final.prime == 11
    assert summary.sign_changes == ()


def test_delta_series_accepts_plain_iterables():
    samples, summary = delta_series(iter(trial_division_oracle(47)), 6, 4)
    assert [s.np for s in samples] == [4, 8, 12, 15]
    assert summary.final.delta == 1


def test_delta_series_50k_nonnegative_and_growing():
    samples, summary = delta_series(segmented_stream(SieveConfig(MaxCount(50_000))), 6, 1000)
    ref = simple_sieve(611_953)
    assert ref.size == 50_000
    assert summary.final.delta == int((ref % 6 == 5).sum() - (ref % 6 == 1).sum()) == 84
    assert summary.min_delta >= 0
    assert summary.final.delta > 0
    assert summary.min_delta <= summary.final.delta <= summary.max_delta
    assert len(samples) == 50


def test_delta_series_mod4_goes_negative():
    _, summary = delta_series(segmented_stream(SieveConfig(MaxValue(30_000))), 4, 1)
    assert summary.min_delta < 0
    # brute-force oracle over trial-division primes: first lead change at 26861
    assert summary.sign_changes[0] == (2946, 26861)


@pytest.mark.parametrize(
    "traj, expected",
    [
        ([0, 0, 1, 0, 1], []),
        ([1, 0, -1], [3]),
        ([], []),
        ([0, 0, 0], []),
        ([-1, 0, 0, 1, 1, -1], [4, 6]),
    ],
)
def test_sign_changes_examples(traj, expected):
    assert [np_ for np_, _ in sign_changes(traj)] == expected


def walks():
    return st.lists(st.sampled_from([-1, 0, 1]), max_size=400).map(lambda s: np.cumsum(s).tolist())


@settings(max_examples=200, deadline=None)
@given(walks(), st.integers(1, 50))
def test_tracker_extrema_and_crossings_match_reference(traj, block):
    """Vectorized tracking across arbitrary block splits equals the plain loop."""
    if not traj:
        return
    # realise the walk as a race: residue 5 steps up, residue 1 steps down, 3 is neutral
    primes, p, prev = [], 0, 0
    for d in traj:
        step = d - prev
        prev = d
        p += 6
        primes.append(p + {1: 5, -1: 1, 0: 3}[step])
    t = RaceTracker(modulus=6, sample_every=1)
    rows = [t.update(primes[i:i + block]) for i in range(0, len(primes), block)]
    rows = np.concatenate(rows)
    assert rows[:, -1].tolist() == traj
    s = t.summary()
    assert s.min_delta == min(traj) and s.max_delta == max(traj)
    assert traj[s.min_np - 1] == min(traj) and traj.index(min(traj)) == s.min_np - 1
    assert traj.index(max(traj)) == s.max_np - 1
    assert list(s.sign_changes) == sign_changes(traj, primes)


def test_tracker_sampling_and_final_row():
    t = RaceTracker(sample_every=4)
    got = np.concatenate([t.update(b) for b in ([2, 3, 5], [7, 11, 13, 17, 19], [23, 29, 31])])
    assert got[:, 0].tolist() == [4, 8]
    assert t.final_row()[0] == 11
    t.update([37])
    assert t.final_row() is None


def test_tracker_rejects_out_of_order_blocks():
    t = RaceTracker()
    t.update([2, 3, 5])
    with pytest.raises(OrderError):
        t.update([5, 7])
    with pytest.raises(OrderError):
        t.update([11, 7])


def test_tracker_recount_equivalence():
    x = 3_000_000
    t = RaceTracker()
    for seg in segmented_stream(SieveConfig(MaxValue(x), segment_length=65536)).segments():
        t.update(seg)
    ref = simple_sieve(x)
    assert t.counters.count1 == int((ref % 6 == 1).sum())
    assert t.counters.count5 == int((ref % 6 == 5).sum())
    assert t.counters.neither == 2


def test_tracker_extremes_state_roundtrip():
    t = RaceTracker(modulus=4, sample_every=1)
    t.update(trial_division_oracle(30_000))
    u = RaceTracker(modulus=4, sample_every=1)
    u.load_extremes(t.extremes_state())
    assert u.extremes_state() == t.extremes_state()


def test_tracker_parallel_sieve_is_deterministic():
    def run(threads):
        t = RaceTracker(sample_every=100)
        cfg = SieveConfig(MaxCount(200_000), segment_length=1 << 16, threads=threads)
        rows = np.concatenate([t.update(s) for s in segmented_stream(cfg).segments()])
        return rows, t.summary()

    a, sa = run(1)
    b, sb = run(4)
    assert np.array_equal(a, b) and sa == sb
