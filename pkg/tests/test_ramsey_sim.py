import math

import numpy as np
import pytest

from rydchiral.dressed_states import DressingConfig, ground_shift
from rydchiral.ramsey_sim import (
    InsufficientSpan,
    SequenceSpec,
    export_trace,
    fringe_metrics,
    simulate_sequence,
)

from conftest import TWO_PI

LOSSLESS = DressingConfig.from_hz(0.5e9, 1e9, 1.5e9, 0.2e9, gamma1=0, gamma2=0, gamma3=0)
LOSSY = DressingConfig.from_hz(0.5e9, 1e9, 1.5e9, 0.2e9, gamma1=0, gamma2=1e2, gamma3=1e2)
TIMES = np.linspace(1e-5, 0.015, 1500)


def two_level_oracle(cfg, delta_hz, times):
    """P1 of an ideal echo with the two dressed ground shifts as phases."""
    s_plus = ground_shift(cfg, TWO_PI * delta_hz).shift
    s_minus = ground_shift(cfg, -TWO_PI * delta_hz).shift
    return 0.5 * (1.0 - np.cos((s_minus - s_plus) * times / 2.0)), 4 * math.pi / abs(s_plus - s_minus)


def test_spec_validation():
    with pytest.raises(ValueError):
        SequenceSpec(LOSSLESS, 1e3, 0.0, [0.0, 1.0])
    with pytest.raises(ValueError):
        SequenceSpec(LOSSLESS, 1e3, 0.0, [2.0, 1.0])
    with pytest.raises(ValueError):
        SequenceSpec(LOSSLESS, 1e3, 0.0, [1.0], achiral_mode="other")


def test_no_shift_gives_constant_trace():
    tr = simulate_sequence(SequenceSpec(LOSSLESS, 0.0, 0.0, TIMES))
    assert np.ptp(tr.p1) == 0.0
    assert fringe_metrics(tr)[0] == math.inf


@pytest.mark.parametrize("mode", ["dressed", "direct"])
def test_achiral_shift_is_refocused(mode):
    tr = simulate_sequence(SequenceSpec(LOSSLESS, 0.0, 500.0, TIMES, achiral_mode=mode))
    assert np.max(np.abs(tr.p1 - tr.p1[0])) <= 1e-10


def test_chiral_trace_matches_two_level_oracle():
    tr = simulate_sequence(SequenceSpec(LOSSLESS, 1e3, 0.0, TIMES))
    ref, period = two_level_oracle(LOSSLESS, 1e3, TIMES)
    assert np.max(np.abs(tr.p1 - ref)) <= 1e-9
    measured, contrast = fringe_metrics(tr)
    assert measured == pytest.approx(period, rel=1e-2)
    assert contrast == pytest.approx(1.0, abs=1e-6)


def test_achiral_does_not_move_chiral_period():
    a = fringe_metrics(simulate_sequence(SequenceSpec(LOSSLESS, 1e3, 0.0, TIMES, achiral_mode="direct")))
    b = fringe_metrics(simulate_sequence(SequenceSpec(LOSSLESS, 1e3, 300.0, TIMES, achiral_mode="direct")))
    assert a[0] == pytest.approx(b[0], rel=1e-9)


def test_synthetic_cosine_period():
    t = np.linspace(0, 10, 4001)
    period, contrast = fringe_metrics(t, 0.5 + 0.5 * np.cos(TWO_PI * t / 1.7 + 0.3))
    assert period == pytest.approx(1.7, rel=1e-3)
    assert contrast == pytest.approx(1.0, rel=1e-3)


def test_synthetic_decay_contrast():
    t = np.linspace(0, 10, 4001)
    gamma, p = 0.15, 1.3
    period, contrast = fringe_metrics(t, 0.5 + 0.5 * np.exp(-gamma * t) * np.cos(TWO_PI * t / p))
    assert period == pytest.approx(p, rel=1e-2)
    assert contrast == pytest.approx(math.exp(-gamma * p), rel=1e-2)


def test_short_trace_raises():
    t = np.linspace(0, 1, 200)
    with pytest.raises(InsufficientSpan):
        fringe_metrics(t, np.cos(TWO_PI * t / 0.8))


def test_loss_is_monotone_and_positive():
    tr = simulate_sequence(SequenceSpec(LOSSY, 1e3, 20.0, TIMES))
    assert np.all(tr.p_loss >= -1e-15)
    assert np.all(np.diff(tr.p_loss) >= -1e-15)
    assert np.all(tr.p1 >= 0) and np.all(tr.p1 + tr.p_loss <= 1 + 1e-12)


def test_mirror_under_sign_flip():
    a = simulate_sequence(SequenceSpec(LOSSY, 1e3, 0.0, TIMES))
    b = simulate_sequence(SequenceSpec(LOSSY, -1e3, 0.0, TIMES))
    assert np.max(np.abs(a.p1 - b.p1)) <= 1e-9


def test_period_halves_when_shift_doubles():
    p1 = fringe_metrics(simulate_sequence(SequenceSpec(LOSSLESS, 1e3, 0.0, TIMES)))[0]
    p2 = fringe_metrics(simulate_sequence(SequenceSpec(LOSSLESS, 2e3, 0.0, TIMES)))[0]
    assert p2 == pytest.approx(p1 / 2, rel=1e-2)


def test_export(tmp_path):
    tr = simulate_sequence(SequenceSpec(LOSSLESS, 1e3, 0.0, TIMES[:5]))
    lines = export_trace(tr, tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "t_s,p1,p_loss" and len(lines) == 6
    assert float(lines[3].split(",")[1]) == tr.p1[2]
