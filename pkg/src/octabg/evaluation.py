"""Confusion counts and the negative-oriented F0 score.

Note the orientation: P0 and R0 are built on *true negatives* (background
pixels), not true positives, so F0 rewards clean background classification.
This is not the standard foreground F-measure; a detector that misses the
whole foreground can still score high if the background is large and clean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EvalStats:
    """Pixel confusion counts; foreground is the positive class."""

    true_neg: int = 0
    true_pos: int = 0
    false_neg: int = 0
    false_pos: int = 0

    def __add__(self, other: "EvalStats") -> "EvalStats":
        return EvalStats(
            self.true_neg + other.true_neg,
            self.true_pos + other.true_pos,
            self.false_neg + other.false_neg,
            self.false_pos + other.false_pos,
        )

    @property
    def total(self) -> int:
        return self.true_neg + self.true_pos + self.false_neg + self.false_pos


def accumulate(predicted: np.ndarray, truth: np.ndarray,
               stats: EvalStats | None = None) -> EvalStats:
    """Add one mask pair's confusion counts to ``stats`` (additive across pairs)."""
    predicted = np.asarray(predicted, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if predicted.shape != truth.shape:
        raise ValueError(f"mask dimensions {predicted.shape} vs {truth.shape} do not match")
    base = stats if stats is not None else EvalStats()
    return base + EvalStats(
        true_neg=int((~predicted & ~truth).sum()),
        true_pos=int((predicted & truth).sum()),
        false_neg=int((~predicted & truth).sum()),
        false_pos=int((predicted & ~truth).sum()),
    )


def f0_score(stats: EvalStats) -> tuple[float | None, float | None, float | None]:
    """(P0, R0, F0) with P0 = Tn/(Tn+Fn), R0 = Tn/(Tn+Fp), F0 their harmonic mean.

    Degenerate denominators yield None ("undefined") rather than a fabricated
    zero: P0 needs Tn+Fn > 0, R0 needs Tn+Fp > 0, and F0 additionally needs
    P0 + R0 > 0.
    """
    tn, fn, fp = stats.true_neg, stats.false_neg, stats.false_pos
    p0 = tn / (tn + fn) if tn + fn > 0 else None
    r0 = tn / (tn + fp) if tn + fp > 0 else None
    if p0 is None or r0 is None or p0 + r0 == 0:
        f0 = None
    else:
        f0 = 2 * p0 * r0 / (p0 + r0)
    return p0, r0, f0


def _fmt(score: float | None) -> str:
    return "undefined" if score is None else f"{score:.6f}"


def emit_report(rows) -> str:
    """CSV comparison table, one row per (method, dataset, stats), input order."""
    lines = ["method,dataset,tn,tp,fn,fp,p0,r0,f0"]
    for method, dataset, stats in rows:
        p0, r0, f0 = f0_score(stats)
        lines.append(
            f"{method},{dataset},{stats.true_neg},{stats.true_pos},"
            f"{stats.false_neg},{stats.false_pos},{_fmt(p0)},{_fmt(r0)},{_fmt(f0)}"
        )
    return "\n".join(lines) + "\n"
