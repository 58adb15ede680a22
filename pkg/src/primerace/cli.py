"""
Command-line interface for primerace.

Usage:
    primerace race --nprimes 50000 --sample-every 100 --out delta.csv
    primerace race --modulus 4 --limit 30000 --sample-every 1 --out mod4.csv
    primerace products --n-max 200
    primerace census --limit 1000000 --out hist.csv
    primerace verify --limit 10000000
    primerace plot delta.csv --out delta_plot.py

Exit codes: 0 ok, 2 invalid configuration, 3 I/O failure, 4 corrupt
checkpoint, 5 verification failure.
"""

from __future__ import annotations

import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import click
import numpy as np

from . import products
from .checkpoint import Checkpoint, read_checkpoint, write_checkpoint
from .errors import CheckpointError, ConfigError, VerificationError
from .plot import PlotInputError, emit_plot_script
from .race import RaceTracker
from .sieve import (
    DEFAULT_SEGMENT_LENGTH,
    SIMPLE_SIEVE_CAP,
    MaxCount,
    MaxValue,
    SieveConfig,
    segmented_stream,
    simple_sieve,
    trial_division_oracle,
)

__all__ = ["cli", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_CHECKPOINT = 4
EXIT_VERIFY = 5


class Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str):
    raise Abort(code, message)


def _run(fn):
    """Map failures onto the exit-code contract."""
    try:
        return fn()
    except Abort as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except CheckpointError as exc:
        click.echo(f"error: checkpoint: {exc}", err=True)
        sys.exit(EXIT_CHECKPOINT)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)


def _emit(lines: dict, err: bool = False) -> None:
    for key, value in lines.items():
        click.echo(f"{key}: {value}", err=err)


@contextmanager
def _output(path: str | None, mode: str = "w"):
    if path is None:
        yield sys.stdout
    else:
        with open(path, mode, newline="") as fh:
            yield fh


def _write_rows(fh, rows: np.ndarray) -> None:
    if len(rows):
        fh.write("\n".join(",".join(map(str, r)) for r in rows.tolist()) + "\n")


threads_option = click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=1,
    envvar="PRIME_RACE_THREADS",
    show_default=True,
    help="Sieve worker threads (fallback: PRIME_RACE_THREADS).",
)
segment_option = click.option(
    "--segment-size",
    type=int,
    default=DEFAULT_SEGMENT_LENGTH,
    show_default=True,
    help="Integers per sieve segment (even, >= 2).",
)


@click.group()
def cli():
    """Mod-6 prime race, product counts and composite census."""


# -- race --------------------------------------------------------------------


def _sidecar(checkpoint: str) -> Path:
    return Path(checkpoint + ".json")


def _truncate_csv(path: str, header: str, np_max: int) -> None:
    """Drop rows written after the checkpoint was taken."""
    with open(path, newline="") as fh:
        lines = fh.read().split("\n")
    if not lines or lines[0] != header:
        _fail(EXIT_CONFIG, f"{path} does not carry the expected header {header!r}")
    kept = [lines[0]] + [ln for ln in lines[1:] if ln and int(ln.split(",", 1)[0]) <= np_max]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(kept) + "\n")


def _race_summary(tracker: RaceTracker, status: str, elapsed: float) -> dict:
    c = tracker.counters
    out = {"status": status, "modulus": c.modulus}
    if c.two_class:
        out["delta_definition"] = f"count{c.residues[1]} - count{c.residues[0]}"
    out["np"] = c.np
    out["last_prime"] = c.last_prime
    for r, n in zip(c.residues, c.counts):
        out[f"count{r}"] = n
    out["neither"] = c.neither
    if c.two_class:
        s = tracker.summary()
        out["final_delta"] = c.delta
        out["min_delta"] = s.min_delta
        out["min_delta_np"] = s.min_np
        out["max_delta"] = s.max_delta
        out["max_delta_np"] = s.max_np
        out["sign_changes"] = len(s.sign_changes)
        if s.sign_changes:
            np_, p = s.sign_changes[0]
            out["first_sign_change"] = f"np={np_} prime={p}"
    out["elapsed_seconds"] = f"{elapsed:.3f}"
    return out


@cli.command()
@click.option("--nprimes", type=int, default=None, help="Race over the first N primes.")
@click.option("--limit", type=int, default=None, help="Race over all primes <= X.")
@click.option("--modulus", type=int, default=6, show_default=True)
@click.option("--sample-every", type=int, default=1000, show_default=True, help="CSV sampling stride.")
@segment_option
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV path (default: stdout).")
@click.option("--checkpoint", type=click.Path(dir_okay=False), default=None, help="Checkpoint file to maintain.")
@click.option("--resume", is_flag=True, help="Continue from --checkpoint, appending to --out.")
@click.option("--stop-after", type=int, default=None, help="Pause after this many primes (needs --checkpoint).")
@threads_option
def race(nprimes, limit, modulus, sample_every, segment_size, out, checkpoint, resume, stop_after, threads):
    """Stream primes and record the residue-class race."""
    _run(lambda: _race(nprimes, limit, modulus, sample_every, segment_size, out, checkpoint, resume, stop_after, threads))


def _race(nprimes, limit, modulus, sample_every, segment_size, out, checkpoint, resume, stop_after, threads):
    t0 = time.perf_counter()
    if (nprimes is None) == (limit is None):
        _fail(EXIT_CONFIG, "give exactly one of --nprimes or --limit")
    if sample_every < 1:
        _fail(EXIT_CONFIG, "--sample-every must be >= 1")
    if resume and (checkpoint is None or out is None):
        _fail(EXIT_CONFIG, "--resume needs both --checkpoint and --out")
    if stop_after is not None and (checkpoint is None or stop_after < 1):
        _fail(EXIT_CONFIG, "--stop-after needs --checkpoint and a positive count")
    target = MaxCount(nprimes) if nprimes is not None else MaxValue(limit)

    tracker = RaceTracker(modulus=modulus, sample_every=sample_every)
    if checkpoint is not None and not tracker.counters.two_class:
        _fail(EXIT_CONFIG, f"checkpoints need a modulus with two coprime classes, got {modulus}")
    header = ",".join(tracker.columns)
    run_key = {"modulus": modulus, "nprimes": nprimes, "limit": limit, "sample_every": sample_every}

    start = 2
    if resume:
        ckpt = read_checkpoint(checkpoint)
        try:
            side = json.loads(_sidecar(checkpoint).read_text())
            saved_key, extremes = side["run"], side["extremes"]
        except (ValueError, KeyError, TypeError) as exc:
            raise CheckpointError(f"unreadable sidecar: {exc}") from exc
        if saved_key != run_key:
            _fail(EXIT_CONFIG, f"checkpoint was taken for a different run: {saved_key}")
        if ckpt.modulus != modulus:
            _fail(EXIT_CONFIG, "checkpoint modulus differs from --modulus")
        tracker = RaceTracker(modulus=modulus, sample_every=sample_every, counters=ckpt.counters)
        tracker.load_extremes(extremes)
        start = ckpt.next_position
        _truncate_csv(out, header, ckpt.counters.np)

    def save(next_position: int) -> None:
        if checkpoint is None:
            return
        write_checkpoint(checkpoint, Checkpoint(tracker.counters, next_position))
        _sidecar(checkpoint).write_text(json.dumps({"run": run_key, "extremes": tracker.extremes_state()}))

    done = tracker.counters.np
    stream = None
    if isinstance(target, MaxCount) and target.np > done:
        stream = segmented_stream(SieveConfig(
            MaxCount(target.np - done), segment_size, start=start, primes_below_start=done, threads=threads,
        ))
    elif isinstance(target, MaxValue) and start <= target.x:
        stream = segmented_stream(SieveConfig(target, segment_size, start=start, threads=threads))

    paused = False
    with _output(out, "a" if resume else "w") as fh:
        if not resume:
            fh.write(header + "\n")
        if stream is not None:
            for seg in stream.segments():
                if stop_after is not None:
                    room = max(stop_after - tracker.counters.np, 0)
                    if room < seg.size:
                        seg, paused = seg[:room], True
                _write_rows(fh, tracker.update(seg))
                if paused:
                    break
                fh.flush()
                save(stream.position)
        if paused:
            fh.flush()
            save(tracker.counters.last_prime + 1)
        else:
            last = tracker.final_row()
            if last is not None:
                _write_rows(fh, last[None, :])
            fh.flush()
            save(max(stream.position if stream else start, tracker.counters.last_prime + 1))

    _emit(_race_summary(tracker, "paused" if paused else "complete", time.perf_counter() - t0), err=out is None)


# -- products ------------------------------------------------------------------


@cli.command("products")
@click.option("--n-max", type=int, required=True, help="Largest progression depth to verify.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Table path (default: stdout).")
def products_cmd(n_max, out):
    """Check the closed-form product counts against enumeration for n = 0..N."""
    _run(lambda: _products(n_max, out))


def _products(n_max, out):
    if not 0 <= n_max <= products.ENUMERATION_CAP:
        _fail(EXIT_CONFIG, f"--n-max must lie in [0, {products.ENUMERATION_CAP}]")
    failures = 0
    with _output(out) as fh:
        fh.write("n,same_closed,same_enumerated,cross_closed,cross_enumerated,status\n")
        for n in range(n_max + 1):
            try:
                rep = products.enumerate_products(n)
                ok = rep.agrees
                row = [n, rep.same_class_closed, rep.same_class_enumerated,
                       rep.cross_class_closed, rep.cross_class_enumerated]
            except VerificationError as exc:
                click.echo(f"error: {exc}", err=True)
                ok, row = False, [n, "", "", "", ""]
            failures += not ok
            fh.write(",".join(map(str, row + ["PASS" if ok else "FAIL"])) + "\n")
    _emit({"rows": n_max + 1, "failures": failures, "result": "FAIL" if failures else "PASS"}, err=out is None)
    if failures:
        sys.exit(EXIT_VERIFY)


# -- census ------------------------------------------------------------------


@cli.command()
@click.option("--limit", type=int, required=True, help="Census bound X.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Histogram CSV path.")
def census(limit, out):
    """Count primes and composites per class up to X; histogram factor pairs."""
    _run(lambda: _census(limit, out))


def _census(limit, out):
    rep = products.composite_census(limit)
    report = {"x": rep.x, "unit_in_r1": "yes" if rep.unit else "no"}
    for name, c in (("r1", rep.r1), ("r5", rep.r5)):
        report[f"{name}_integers"] = c.total
        report[f"{name}_primes"] = c.primes
        report[f"{name}_composites"] = c.composites
    report["delta"] = rep.delta

    hists = {}
    if limit <= products.HISTOGRAM_CAP:
        for name, cls in (("r1", products.R1), ("r5", products.R5)):
            h = products.multiplicity_histogram(limit, cls)
            hists[name] = h
            report[f"{name}_factor_pairs"] = h.factor_pairs
            report[f"{name}_multi_pair_composites"] = sum(v for r, v in h.counts.items() if r > 1)
    else:
        report["histogram"] = f"skipped (bound above {products.HISTOGRAM_CAP})"
    report["identity"] = "PASS" if rep.identity_holds else "FAIL"

    if out is not None and hists:
        with open(out, "w", newline="") as fh:
            fh.write("class,multiplicity,composites\n")
            for name, h in hists.items():
                for r in sorted(h.counts):
                    fh.write(f"{name.upper()},{r},{h.counts[r]}\n")
    _emit(report)
    if not rep.identity_holds:
        sys.exit(EXIT_VERIFY)


# -- verify ------------------------------------------------------------------


@cli.command()
@click.option("--limit", type=int, default=10**7, show_default=True, help="Segmented-vs-simple bound.")
@click.option("--trial-limit", type=int, default=10**4, show_default=True, help="Simple-vs-trial-division bound.")
@segment_option
@threads_option
def verify(limit, trial_limit, segment_size, threads):
    """Cross-validate the segmented sieve against the oracles."""
    _run(lambda: _verify(limit, trial_limit, segment_size, threads))


def _verify(limit, trial_limit, segment_size, threads):
    if not 2 <= limit <= SIMPLE_SIEVE_CAP:
        _fail(EXIT_CONFIG, f"--limit must lie in [2, {SIMPLE_SIEVE_CAP}]")
    checks = {}
    trial_limit = min(trial_limit, limit)
    checks[f"simple_vs_trial[2,{trial_limit}]"] = (
        simple_sieve(trial_limit).tolist() == trial_division_oracle(trial_limit)
    )
    reference = simple_sieve(limit)
    stream = segmented_stream(SieveConfig(MaxValue(limit), segment_size, threads=threads))
    got = np.concatenate(list(stream.segments()))
    checks[f"segmented_vs_simple[2,{limit}]"] = bool(np.array_equal(got, reference))
    counted = np.concatenate(list(
        segmented_stream(SieveConfig(MaxCount(reference.size), segment_size, threads=threads)).segments()
    ))
    checks[f"count_limit_vs_value[{reference.size}]"] = bool(np.array_equal(counted, reference))

    _emit({k: "PASS" if v else "FAIL" for k, v in checks.items()})
    if not all(checks.values()):
        sys.exit(EXIT_VERIFY)


# -- plot --------------------------------------------------------------------


@cli.command()
@click.argument("csv_path", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Script path (default: <csv>_plot.py).")
def plot(csv_path, out):
    """Write a matplotlib script that draws delta against np from a race CSV."""
    _run(lambda: _plot(csv_path, out))


def _plot(csv_path, out):
    if out is None:
        out = str(Path(csv_path).with_name(Path(csv_path).stem + "_plot.py"))
    try:
        path = emit_plot_script(csv_path, out)
    except PlotInputError as exc:
        _fail(EXIT_CONFIG, str(exc))
    _emit({"script": path, "csv": csv_path})


def main():
    cli()


if __name__ == "__main__":
    main()
