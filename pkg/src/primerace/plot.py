"""Generate a standalone matplotlib script that draws delta against np."""

from __future__ import annotations

import csv
import os
from pathlib import Path

from .errors import PrimeRaceError

__all__ = ["PlotInputError", "emit_plot_script"]


class PlotInputError(PrimeRaceError, ValueError):
    """The CSV is empty or lacks the ``np``/``delta`` columns."""


_TEMPLATE = '''\
"""Plot the prime-race delta series from {csv_name}.

Generated by primerace. Run with: python {script_name}
"""
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
CSV_PATH = HERE / {csv_rel!r}
PNG_PATH = HERE / {png_name!r}

np_values, deltas = [], []
with open(CSV_PATH, newline="") as fh:
    for row in csv.DictReader(fh):
        np_values.append(int(row["np"]))
        deltas.append(int(row["delta"]))

fig, ax = plt.subplots(figsize=(10, 5))
ax.plot(np_values, deltas, linewidth=0.8, label="delta")
ax.axhline(0, color="grey", linewidth=0.5)
ax.set_xlabel("Np (primes analysed)")
ax.set_ylabel("delta = count5 - count1")
ax.set_title("Prime race: {n_last:,} primes")
ax.legend()
fig.tight_layout()
fig.savefig(PNG_PATH, dpi=150)
print(f"wrote {{PNG_PATH}}")
'''


def _last_np(csv_path: Path) -> int:
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise PlotInputError(f"{csv_path} is empty")
        missing = {"np", "delta"} - set(header)
        if missing:
            raise PlotInputError(f"{csv_path} lacks column(s): {', '.join(sorted(missing))}")
        i = header.index("np")
        last = None
        for row in reader:
            try:
                last = int(row[i])
            except (IndexError, ValueError) as exc:
                raise PlotInputError(f"{csv_path}: malformed row {row!r}") from exc
    if last is None:
        raise PlotInputError(f"{csv_path} has no data rows")
    return last


def emit_plot_script(csv_path: str | os.PathLike, out_path: str | os.PathLike) -> Path:
    """Write a plotting script for ``csv_path`` to ``out_path``.

    The script locates the CSV relative to its own directory, so the pair
    can be moved together.
    """
    csv_path, out_path = Path(csv_path), Path(out_path)
    n_last = _last_np(csv_path)
    rel = os.path.relpath(csv_path.resolve(), out_path.resolve().parent)
    out_path.write_text(
        _TEMPLATE.format(
            csv_name=csv_path.name,
            script_name=out_path.name,
            csv_rel=rel,
            png_name=out_path.stem + ".png",
            n_last=n_last,
        )
    )
    return out_path
