"""Morpheme-overlap and boundary-identification precision/recall/F1.

The primary metric counts how many predicted morphemes also occur in the
gold analysis of the same word, aggregated micro-style over a test set.
Multiset semantics are the default: a morph predicted twice scores twice
only if it also occurs twice in gold, which matters for agglutinating
repeats such as reduplicated suffixes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DataError
from .segmentation import SurfaceSegmentation

MULTISET = "multiset"
SET = "set"


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    tp: int
    n_pred: int
    n_gold: int

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "tp": self.tp,
            "n_pred": self.n_pred,
            "n_gold": self.n_gold,
        }


def _prf(tp: int, n_pred: int, n_gold: int) -> PRF:
    p = tp / n_pred if n_pred else 0.0
    r = tp / n_gold if n_gold else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return PRF(p, r, f1, tp, n_pred, n_gold)


def word_overlap(pred: Sequence[str], gold: Sequence[str],
                 overlap: str = MULTISET) -> tuple[int, int, int]:
    """Morpheme overlap counts (tp, n_pred, n_gold) for one word."""
    if not pred or not gold:
        raise DataError("cannot compare empty morpheme lists")
    if overlap == MULTISET:
        tp = sum((Counter(pred) & Counter(gold)).values())
        return tp, len(pred), len(gold)
    if overlap == SET:
        pred_set, gold_set = set(pred), set(gold)
        return len(pred_set & gold_set), len(pred_set), len(gold_set)
    raise ValueError(f"unknown overlap mode {overlap!r}")


def micro_prf(pairs: Iterable[tuple[Sequence[str], Sequence[str]]],
              overlap: str = MULTISET) -> PRF:
    """Micro-averaged P/R/F1 over (predicted, gold) morpheme-list pairs."""
    tp = n_pred = n_gold = 0
    n_pairs = 0
    for pred, gold in pairs:
        t, a, b = word_overlap(pred, gold, overlap)
        tp, n_pred, n_gold = tp + t, n_pred + a, n_gold + b
        n_pairs += 1
    if n_pairs == 0:
        raise DataError("no word pairs to evaluate")
    return _prf(tp, n_pred, n_gold)


def evaluate_segmentations(pred: Sequence[SurfaceSegmentation],
                           gold: Sequence[SurfaceSegmentation],
                           overlap: str = MULTISET) -> PRF:
    """micro_prf over parallel segmentations, checking that the words match."""
    if len(pred) != len(gold):
        raise DataError(f"{len(pred)} predictions for {len(gold)} gold words")
    for p, g in zip(pred, gold):
        if p.word != g.word:
            raise DataError(f"word mismatch: predicted {p.word!r}, gold {g.word!r}")
    return micro_prf((list(p.segments), list(g.segments)) for p, g in zip(pred, gold))


def boundary_prf(pairs: Iterable[tuple[SurfaceSegmentation, SurfaceSegmentation]]) -> PRF:
    """Micro P/R/F1 over internal cut positions (the classic boundary metric)."""
    tp = n_pred = n_gold = 0
    n_pairs = 0
    for pred, gold in pairs:
        if pred.word != gold.word:
            raise DataError(f"word mismatch: predicted {pred.word!r}, gold {gold.word!r}")
        pred_cuts, gold_cuts = set(pred.boundaries), set(gold.boundaries)
        tp += len(pred_cuts & gold_cuts)
        n_pred += len(pred_cuts)
        n_gold += len(gold_cuts)
        n_pairs += 1
    if n_pairs == 0:
        raise DataError("no word pairs to evaluate")
    return _prf(tp, n_pred, n_gold)
