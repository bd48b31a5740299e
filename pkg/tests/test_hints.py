import logging
import math

import numpy as np
import pytest

from hintforge.hints import (
    HintError,
    ScoreFamily,
    recover_hint,
    sufficient_samples,
)
from hintforge.rng import stream


def test_recover_argmax_of_empirical_means():
    family = ScoreFamily(
        ("a", "b", "c"),
        score=lambda h, x: {"a": 0.2, "b": 0.9, "c": 0.5}[h],
    )
    result = recover_hint(family, [0, 1, 2, 3])
    assert result.selected_id == "b"
    assert result.n == 4
    assert result.means == {"a": 0.2, "b": 0.9, "c": 0.5}


def test_tie_breaks_toward_smallest_hint_id():
    family = ScoreFamily(("z", "m", "a"), score=lambda h, x: 0.5)
    assert recover_hint(family, [0]).selected_id == "a"
    ints = ScoreFamily((9, 3, 7), score=lambda h, x: 1.0)
    assert recover_hint(ints, [0, 1]).selected_id == 3


def test_tie_break_falls_back_to_family_order_for_mixed_ids():
    family = ScoreFamily(("b", 1, "a"), score=lambda h, x: 0.25)
    assert recover_hint(family, [0]).selected_id == "b"


def test_out_of_range_scores_clamped_and_logged(caplog):
    family = ScoreFamily(
        ("lo", "hi"),
        score=lambda h, x: -0.5 if h == "lo" else 1.7,
    )
    with caplog.at_level(logging.WARNING, logger="hintforge.hints"):
        result = recover_hint(family, [0, 1, 2])
    assert family.clamp_count == 6
    assert "clamped" in caplog.text
    assert result.means == {"lo": 0.0, "hi": 1.0}
    assert result.selected_id == "hi"


def test_score_batch_agrees_with_scalar_path():
    def scalar(h, x):
        return (x * h) % 1.0

    def batch(h, xs):
        return (np.asarray(xs, dtype=float) * h) % 1.0

    samples = [0.1, 0.4, 0.7, 0.9]
    a = recover_hint(ScoreFamily((1, 2, 3), scalar), samples)
    b = recover_hint(ScoreFamily((1, 2, 3), scalar, score_batch=batch), samples)
    assert a.selected_id == b.selected_id
    for h in (1, 2, 3):
        assert a.means[h] == pytest.approx(b.means[h], abs=1e-15)


def test_score_batch_shape_checked():
    family = ScoreFamily(
        ("only",),
        score=lambda h, x: 0.5,
        score_batch=lambda h, xs: [0.5],
    )
    with pytest.raises(HintError):
        recover_hint(family, [0, 1, 2])


def test_sufficient_samples_formula():
    # ceil((2 / gamma^2) ln(2 N / delta))
    assert sufficient_samples(0.2, 10, 0.05) == math.ceil(
        50 * math.log(400)
    )
    assert sufficient_samples(1.0, 1, 0.5) == math.ceil(2 * math.log(4))
    assert sufficient_samples(0.1, 100, 0.05) == math.ceil(
        200 * math.log(4000)
    )


def test_sufficient_samples_validation():
    with pytest.raises(HintError):
        sufficient_samples(0.0, 10, 0.05)
    with pytest.raises(HintError):
        sufficient_samples(1.5, 10, 0.05)
    with pytest.raises(HintError):
        sufficient_samples(0.2, 0, 0.05)
    with pytest.raises(HintError):
        sufficient_samples(0.2, 10, 1.0)


def test_family_validation():
    with pytest.raises(HintError):
        ScoreFamily((), score=lambda h, x: 0.5)
    with pytest.raises(HintError):
        ScoreFamily(("a", "a"), score=lambda h, x: 0.5)
    with pytest.raises(HintError):
        recover_hint(ScoreFamily(("a",), score=lambda h, x: 0.5), [])


def test_recovery_succeeds_at_sufficient_samples_bernoulli():
    # Hint "true" scores Bernoulli(0.5 + gamma), rivals Bernoulli(0.5).
    gamma = 0.25
    hints = ("rival-1", "rival-2", "rival-3", "true")
    n = sufficient_samples(gamma, len(hints), 0.05)
    rng = stream(99, "hints-bernoulli")
    wins = 0
    trials = 50
    for _ in range(trials):
        draws = {
            h: rng.random(n) < (0.5 + gamma if h == "true" else 0.5)
            for h in hints
        }
        family = ScoreFamily(
            hints, score=None, score_batch=lambda h, xs: draws[h][list(xs)]
        )
        if recover_hint(family, list(range(n))).selected_id == "true":
            wins += 1
    assert wins >= math.floor(0.95 * trials)


def test_means_are_deterministic():
    rng = stream(5, "hints-det")
    data = rng.random(1000)
    family = ScoreFamily(("h",), score=None, score_batch=lambda h, xs: data)
    samples = list(range(1000))
    m1 = recover_hint(family, samples).means["h"]
    m2 = recover_hint(family, samples).means["h"]
    assert m1 == m2
