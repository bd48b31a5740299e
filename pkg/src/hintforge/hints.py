"""Margin-based hint recovery.

A score family assigns each candidate hint a per-sample score in [0, 1].
If the true hint's expected score beats every rival's by a margin gamma,
then ceil((2 / gamma^2) * ln(2 N / delta)) samples suffice for the
empirical argmax to recover it with probability 1 - delta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

log = logging.getLogger(__name__)


class HintError(ValueError):
    pass


@dataclass
class ScoreFamily:
    """Finite hypothesis class of hints with a bounded score function.

    ``score(hint_id, sample)`` must return a value in [0, 1]; out-of-range
    values are clamped (and counted in ``clamp_count``) so a misbehaving
    score cannot break the recovery guarantee.  ``score_batch`` optionally
    scores one hint on many samples at once and must agree with ``score``.
    """

    hint_ids: tuple
    score: Callable
    score_batch: Optional[Callable] = None

    def __post_init__(self):
        self.hint_ids = tuple(self.hint_ids)
        if not self.hint_ids:
            raise HintError("score family needs at least one hint")
        if len(set(self.hint_ids)) != len(self.hint_ids):
            raise HintError("hint ids must be unique")
        self.clamp_count = 0

    def _clamp(self, values: np.ndarray, hint_id) -> np.ndarray:
        bad = int(np.sum((values < 0.0) | (values > 1.0)))
        if bad:
            self.clamp_count += bad
            log.warning(
                "score family clamped %d out-of-range scores for hint %s",
                bad,
                hint_id,
            )
        return np.clip(values, 0.0, 1.0)

    def scores_for(self, hint_id, samples) -> np.ndarray:
        if self.score_batch is not None:
            values = np.asarray(self.score_batch(hint_id, samples), dtype=float)
        else:
            values = np.asarray([self.score(hint_id, x) for x in samples], dtype=float)
        if values.shape != (len(samples),):
            raise HintError("score_batch returned the wrong shape")
        return self._clamp(values, hint_id)


@dataclass(frozen=True)
class RecoveryResult:
    selected_id: object
    means: dict  # hint id -> empirical mean score
    n: int


def sufficient_samples(gamma: float, num_hints: int, delta: float) -> int:
    """Sample size that guarantees recovery under margin gamma."""
    if not 0 < gamma <= 1:
        raise HintError("margin gamma must lie in (0, 1]")
    if num_hints < 1:
        raise HintError("need at least one hint")
    if not 0 < delta < 1:
        raise HintError("delta must lie in (0, 1)")
    return math.ceil((2.0 / (gamma * gamma)) * math.log(2.0 * num_hints / delta))


def recover_hint(family: ScoreFamily, samples) -> RecoveryResult:
    """Empirical-mean argmax over the hint class; ties break toward the
    smallest hint id (family order for non-comparable ids)."""
    samples = list(samples)
    if not samples:
        raise HintError("sample is empty")
    n = len(samples)
    means = {}
    for hint_id in family.hint_ids:
        values = family.scores_for(hint_id, samples)
        # Pairwise summation in fixed sample order keeps the mean
        # byte-deterministic across platforms.
        means[hint_id] = float(np.add.reduce(values) / n)
    try:
        ordered = sorted(family.hint_ids)
    except TypeError:  # non-comparable ids fall back to family order
        ordered = list(family.hint_ids)
    best = None
    best_mean = -1.0
    for hint_id in ordered:
        if means[hint_id] > best_mean:
            best, best_mean = hint_id, means[hint_id]
    return RecoveryResult(best, means, n)
