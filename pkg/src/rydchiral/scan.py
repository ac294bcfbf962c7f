"""Detuning scans of the dressed ground-state shift and Ramsey figure of merit."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dressed_states import (
    TWO_PI,
    AmbiguousMatch,
    DegenerateEigenvectors,
    DressingConfig,
    ground_shift,
)

CSV_HEADER = ["delta1_hz", "delta2_hz", "shift_hz", "decay_hz", "p1", "p2", "p3", "fom", "status"]


class EmptyScan(ValueError):
    pass


@dataclass(frozen=True)
class ScanGrid:
    """Rectangular (delta1, delta2) grid.  Ranges are ``(min, max, count)`` in Hz."""

    delta1_range: tuple[float, float, int]
    delta2_range: tuple[float, float, int]
    base: DressingConfig
    delta_rm: float
    fringe_period: bool = False

    def __post_init__(self):
        for name in ("delta1_range", "delta2_range"):
            lo, hi, n = getattr(self, name)
            if int(n) != n or n < 2:
                raise ValueError(f"{name}: count must be an integer >= 2, got {n}")
            if not lo < hi:
                raise ValueError(f"{name}: need min < max, got {lo}, {hi}")
        if not math.isfinite(self.delta_rm):
            raise ValueError("delta_rm must be finite")

    @property
    def delta1_hz(self) -> np.ndarray:
        lo, hi, n = self.delta1_range
        return np.linspace(lo, hi, int(n))

    @property
    def delta2_hz(self) -> np.ndarray:
        lo, hi, n = self.delta2_range
        return np.linspace(lo, hi, int(n))


@dataclass
class ScanResult:
    delta1_hz: np.ndarray
    delta2_hz: np.ndarray
    shift: np.ndarray
    decay: np.ndarray
    admixtures: np.ndarray
    fom: np.ndarray
    status: np.ndarray = field(repr=False)

    @property
    def ok(self) -> np.ndarray:
        return self.status == "ok"


def _evaluate_row(args):
    base, d1, d2_values, delta_rm, fringe_period = args
    out = []
    for d2 in d2_values:
        cfg = base.with_detunings(TWO_PI * d1, TWO_PI * d2)
        try:
            r = ground_shift(cfg, TWO_PI * delta_rm, fringe_period)
        except DegenerateEigenvectors:
            out.append(None)
            continue
        except AmbiguousMatch:
            out.append("ambiguous")
            continue
        out.append((r.shift / TWO_PI, r.decay / TWO_PI, *r.admixtures, r.figure_of_merit))
    return out


def run_scan(grid: ScanGrid, workers: int = 1) -> ScanResult:
    """Evaluate every grid point independently.

    Points where the eigensolver or branch matching fails are kept with
    status ``degenerate`` / ``ambiguous`` and NaN values.  ``workers > 1``
    distributes rows over processes; the result does not depend on it.
    """
    d1, d2 = grid.delta1_hz, grid.delta2_hz
    jobs = [(grid.base, float(x), [float(y) for y in d2], grid.delta_rm, grid.fringe_period) for x in d1]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_evaluate_row(job) for job in jobs]

    n1, n2 = len(d1), len(d2)
    values = np.full((n1, n2, 6), np.nan)
    status = np.full((n1, n2), "ok", dtype=object)
    for i, row in enumerate(rows):
        for j, point in enumerate(row):
            if point is None:
                status[i, j] = "degenerate"
            elif point == "ambiguous":
                status[i, j] = "ambiguous"
            else:
                values[i, j] = point
    return ScanResult(d1, d2, values[..., 0], values[..., 1], values[..., 2:5].copy(),
                      values[..., 5], status)


def find_optimal_regions(result: ScanResult, top_fraction: float = 0.05):
    """Grid points with ``fom >= (1 - top_fraction) * max(fom)``, best first.

    Returns a list of ``(delta1_hz, delta2_hz, fom)``.
    """
    if not 0 < top_fraction <= 1:
        raise ValueError("top_fraction must lie in (0, 1]")
    ok = result.ok & np.isfinite(result.fom)
    if not ok.any():
        raise EmptyScan("scan has no valid points")
    best = result.fom[ok].max()
    keep = ok & (result.fom >= (1.0 - top_fraction) * best)
    ii, jj = np.nonzero(keep)
    points = [(float(result.delta1_hz[i]), float(result.delta2_hz[j]), float(result.fom[i, j]))
              for i, j in zip(ii, jj)]
    points.sort(key=lambda p: -p[2])
    return points


def _fmt(x) -> str:
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def export_scan(result: ScanResult, path) -> Path:
    """Write the scan as CSV, row-major over (delta1, delta2)."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for i, d1 in enumerate(result.delta1_hz):
                for j, d2 in enumerate(result.delta2_hz):
                    ok = result.status[i, j] == "ok"
                    nums = [result.shift[i, j], result.decay[i, j], *result.admixtures[i, j], result.fom[i, j]]
                    w.writerow([_fmt(d1), _fmt(d2)]
                               + [_fmt(v) if ok else "nan" for v in nums]
                               + [result.status[i, j]])
    except OSError as exc:
        raise OSError(f"cannot write scan to {path}: {exc}") from exc
    return path


def read_scan(path) -> ScanResult:
    """Inverse of :func:`export_scan`."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = list(reader)
    d1 = list(dict.fromkeys(float(r[0]) for r in rows))
    d2 = list(dict.fromkeys(float(r[1]) for r in rows))
    n1, n2 = len(d1), len(d2)
    if n1 * n2 != len(rows):
        raise ValueError(f"{path}: {len(rows)} rows do not form a {n1}x{n2} grid")
    values = np.array([[float(x) for x in r[2:8]] for r in rows]).reshape(n1, n2, 6)
    status = np.array([r[8] for r in rows], dtype=object).reshape(n1, n2)
    return ScanResult(np.array(d1), np.array(d2), values[..., 0], values[..., 1],
                      values[..., 2:5].copy(), values[..., 5], status)
