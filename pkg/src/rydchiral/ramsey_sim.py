"""Ramsey sequence with a central spin echo on the clock-state qubit.

Sequence per total exposure ``T``::

    pi/2 -- dress T/2 (+chiral) -- pi (swap) -- dress T/2 (-chiral) -- pi/2

The reference state ``|0>`` is untouched by the dressing lasers.  During
dressing ``|1>`` evolves as ``exp(-1j * lam * t)`` with ``lam`` the complex
dressed eigenvalue of :func:`~rydchiral.dressed_states.ground_shift`.
Switching the circularity of the dressing light after the echo flips the
sign of the chiral Rydberg shift only.  Pulses are instantaneous and
lossless; lost norm is reported as ``p_loss`` and not renormalised.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from .dressed_states import TWO_PI, DressingConfig, ground_shift

_HALF_PI = np.array([[1.0, -1.0j], [-1.0j, 1.0]]) / math.sqrt(2.0)


class InsufficientSpan(ValueError):
    """Fewer than two fringe periods in the trace."""


@dataclass
class SequenceSpec:
    """``delta_rm_chiral`` and ``delta_achiral`` are in Hz, ``times`` in s.

    ``achiral_mode`` chooses whether the environment shift acts on the
    Rydberg level and is transduced like the chiral one (``"dressed"``) or
    shifts ``|1>`` directly (``"direct"``).
    """

    dressing: DressingConfig
    delta_rm_chiral: float
    delta_achiral: float
    times: np.ndarray
    achiral_mode: str = "dressed"
    ideal_pulses: bool = True

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or self.times.size == 0:
            raise ValueError("times must be a non-empty 1-d sequence")
        if np.any(self.times <= 0) or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be positive and strictly increasing")
        if self.achiral_mode not in ("dressed", "direct"):
            raise ValueError(f"unknown achiral_mode {self.achiral_mode!r}")
        if not self.ideal_pulses:
            raise NotImplementedError("only ideal pulses are supported")


@dataclass
class RamseyTrace:
    times: np.ndarray
    p1: np.ndarray
    p_loss: np.ndarray
    lam_plus: complex
    lam_minus: complex

    @property
    def fringe_rate(self) -> float:
        """Angular frequency of the fringes in T, ``|Re(lam_- - lam_+)| / 2``."""
        return abs((self.lam_minus - self.lam_plus).real) / 2.0

    def metrics(self):
        return fringe_metrics(self)


def _dressed_eigenvalue(cfg, delta_rm_hz, direct_hz=0.0):
    lam = ground_shift(cfg, TWO_PI * delta_rm_hz).eigenvalue
    return lam + TWO_PI * direct_hz


def simulate_sequence(spec: SequenceSpec) -> RamseyTrace:
    cfg = spec.dressing
    if spec.achiral_mode == "dressed":
        lam_p = _dressed_eigenvalue(cfg, spec.delta_rm_chiral + spec.delta_achiral)
        lam_m = _dressed_eigenvalue(cfg, -spec.delta_rm_chiral + spec.delta_achiral)
    else:
        lam_p = _dressed_eigenvalue(cfg, spec.delta_rm_chiral, spec.delta_achiral)
        lam_m = _dressed_eigenvalue(cfg, -spec.delta_rm_chiral, spec.delta_achiral)

    half = spec.times / 2.0
    c = np.zeros((2, spec.times.size), dtype=complex)
    c[0] = 1.0
    c = _HALF_PI @ c
    c[1] *= np.exp(-1j * lam_p * half)
    c = c[::-1].copy()
    c[1] *= np.exp(-1j * lam_m * half)
    c = _HALF_PI @ c
    pops = np.abs(c) ** 2
    return RamseyTrace(spec.times.copy(), pops[1], 1.0 - pops.sum(axis=0), lam_p, lam_m)


def _refine(t, y, i):
    """Parabolic vertex through samples i-1, i, i+1 (uniform spacing assumed locally)."""
    if i <= 0 or i >= len(y) - 1:
        return t[i], y[i]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2.0 * y1 + y2
    if den == 0:
        return t[i], y1
    off = 0.5 * (y0 - y2) / den
    h = 0.5 * (t[i + 1] - t[i - 1])
    return t[i] + off * h, y1 - 0.25 * (y0 - y2) * off


def fringe_metrics(trace, p1=None):
    """Fringe period (s) and second/first peak contrast ratio.

    Accepts a :class:`RamseyTrace` or ``(times, p1)`` arrays.  Peak
    amplitudes are measured from each maximum down to the following
    minimum, so a decaying baseline cancels in the ratio.  A flat trace
    returns ``(inf, nan)``.

    Raises
    ------
    InsufficientSpan
        if fewer than two maxima, each followed by a minimum, are found.
    """
    if p1 is None:
        t, y = trace.times, trace.p1
    else:
        t, y = np.asarray(trace, dtype=float), np.asarray(p1, dtype=float)
    span = float(np.max(y) - np.min(y)) if y.size else 0.0
    if span <= 1e-9:
        return math.inf, math.nan
    y = y - y.mean()
    prom = 1e-3 * span
    peaks, _ = find_peaks(y, prominence=prom)
    troughs, _ = find_peaks(-y, prominence=prom)
    pairs = []
    for p in peaks:
        after = troughs[troughs > p]
        if after.size:
            pairs.append((p, after[0]))
    if len(pairs) < 2:
        raise InsufficientSpan(f"found {len(pairs)} complete fringe(s); need at least 2 "
                               "(increase the maximum exposure time)")
    tp, yp = zip(*(_refine(t, y, p) for p, _ in pairs))
    yt = [_refine(t, y, q)[1] for _, q in pairs]
    period = (tp[-1] - tp[0]) / (len(tp) - 1)
    amp1, amp2 = yp[0] - yt[0], yp[1] - yt[1]
    return float(period), float(amp2 / amp1)


def export_trace(trace: RamseyTrace, path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t_s", "p1", "p_loss"])
            for row in zip(trace.times, trace.p1, trace.p_loss):
                w.writerow([repr(float(x)) for x in row])
    except OSError as exc:
        raise OSError(f"cannot write Ramsey trace to {path}: {exc}") from exc
    return path
