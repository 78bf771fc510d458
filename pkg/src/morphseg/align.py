"""Constrained edit alignment between de-segmented canonical forms and words.

A canonical character may be copied, substituted or deleted but never
inserted: every character of the orthographic word must be produced by
exactly one canonical character.  Canonical morpheme boundaries are then
projected through the edit script onto the word, which both detects deleted
morphemes and yields the surface segmentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .corpus import AnnotatedWord, CanonicalAnalysis
from .errors import UnalignableError
from .segmentation import SurfaceSegmentation

COPY = "copy"
SUBSTITUTE = "substitute"
DELETE = "delete"


class EditOp(NamedTuple):
    kind: str
    canonical_index: int
    word_index: Optional[int]


@dataclass(frozen=True)
class EditScript:
    ops: tuple[EditOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind != COPY)


def desegment(analysis: CanonicalAnalysis) -> str:
    """Concatenation of the canonical morpheme texts."""
    return "".join(analysis.texts)


def align(canonical: str, word: str) -> EditScript:
    """Minimal-cost edit script turning ``canonical`` into ``word``.

    Unit costs (copy 0, substitute 1, delete 1); insertions are forbidden,
    so the word may not be longer than the canonical form.  Equal-cost
    scripts are disambiguated while scanning left to right, preferring
    copy over substitute over delete.
    """
    m, n = len(canonical), len(word)
    if n > m:
        raise UnalignableError(
            f"word {word!r} is longer than canonical form {canonical!r}")

    # suffix[i][j]: cheapest mapping of canonical[i:] onto word[j:]
    inf = math.inf
    suffix = [[inf] * (n + 1) for _ in range(m + 1)]
    suffix[m][n] = 0
    for i in range(m - 1, -1, -1):
        suffix[i][n] = m - i
        row, below = suffix[i], suffix[i + 1]
        ci = canonical[i]
        for j in range(n - 1, -1, -1):
            diag = below[j + 1] + (0 if ci == word[j] else 1)
            down = below[j] + 1
            row[j] = diag if diag <= down else down

    ops = []
    i = j = 0
    while i < m:
        cur = suffix[i][j]
        if j < n and canonical[i] == word[j] and suffix[i + 1][j + 1] == cur:
            ops.append(EditOp(COPY, i, j))
            i, j = i + 1, j + 1
        elif j < n and suffix[i + 1][j + 1] + 1 == cur:
            ops.append(EditOp(SUBSTITUTE, i, j))
            i, j = i + 1, j + 1
        else:
            ops.append(EditOp(DELETE, i, None))
            i += 1
    return EditScript(tuple(ops))


def project_segments(analysis: CanonicalAnalysis, word: str) -> list[tuple[str, str]]:
    """Pair every canonical morpheme with its projected surface substring.

    When the de-segmented canonical form equals the word the projection is
    the identity; otherwise morpheme spans are mapped through the minimal
    edit script.  Fully deleted morphemes project to the empty string.
    """
    canonical = desegment(analysis)
    texts = analysis.texts
    if canonical == word:
        return [(t, t) for t in texts]
    script = align(canonical, word)
    # word position reached after consuming each canonical prefix
    wpos = [0]
    for op in script.ops:
        wpos.append(wpos[-1] + (0 if op.kind == DELETE else 1))
    pairs = []
    start = 0
    for text in texts:
        end = start + len(text)
        pairs.append((text, word[wpos[start]:wpos[end]]))
        start = end
    return pairs


def derive_surface(analysis: CanonicalAnalysis, word: str) -> SurfaceSegmentation:
    """Surface segmentation of ``word`` induced by its canonical analysis."""
    if not word:
        raise ValueError("word must be non-empty")
    segments = [surface for _, surface in project_segments(analysis, word) if surface]
    return SurfaceSegmentation.from_segments(segments)


@dataclass(frozen=True)
class AlignmentStats:
    """Aggregated alignment outcomes; the pct_* properties expose ratios.

    Raw counts are kept so that statistics from several datasets can be
    merged for either micro-averaged or per-dataset reporting.
    """

    n_aligned: int = 0
    n_differing: int = 0
    n_substitutions: int = 0
    n_deletions: int = 0
    n_segments: int = 0
    n_segments_equal: int = 0
    unalignable_count: int = 0

    @property
    def pct_differing(self) -> float:
        return self.n_differing / self.n_aligned if self.n_aligned else 0.0

    @property
    def pct_replacements(self) -> float:
        ops = self.n_substitutions + self.n_deletions
        return self.n_substitutions / ops if ops else 0.0

    @property
    def pct_deletions(self) -> float:
        ops = self.n_substitutions + self.n_deletions
        return self.n_deletions / ops if ops else 0.0

    @property
    def pct_segments_equal(self) -> float:
        return self.n_segments_equal / self.n_segments if self.n_segments else 0.0

    def merged_with(self, other: "AlignmentStats") -> "AlignmentStats":
        return AlignmentStats(*(a + b for a, b in zip(self._astuple(), other._astuple())))

    def _astuple(self) -> tuple[int, ...]:
        return (self.n_aligned, self.n_differing, self.n_substitutions,
                self.n_deletions, self.n_segments, self.n_segments_equal,
                self.unalignable_count)

    def as_dict(self) -> dict:
        out = {
            "n_aligned": self.n_aligned,
            "n_differing": self.n_differing,
            "n_substitutions": self.n_substitutions,
            "n_deletions": self.n_deletions,
            "n_segments": self.n_segments,
            "n_segments_equal": self.n_segments_equal,
            "unalignable_count": self.unalignable_count,
            "pct_differing": self.pct_differing,
            "pct_replacements": self.pct_replacements,
            "pct_deletions": self.pct_deletions,
            "pct_segments_equal": self.pct_segments_equal,
        }
        return out


def alignment_stats(items: Iterable[AnnotatedWord]) -> AlignmentStats:
    """Alignment statistics over a dataset (ratios cover aligned words only)."""
    n_aligned = n_differing = n_sub = n_del = 0
    n_segments = n_segments_equal = 0
    unalignable = 0
    for item in items:
        canonical = desegment(item.analysis)
        if len(item.word) > len(canonical):
            unalignable += 1
            continue
        n_aligned += 1
        if canonical != item.word:
            n_differing += 1
            script = align(canonical, item.word)
            for op in script.ops:
                if op.kind == SUBSTITUTE:
                    n_sub += 1
                elif op.kind == DELETE:
                    n_del += 1
        for text, surface in project_segments(item.analysis, item.word):
            if surface:
                n_segments += 1
                if surface == text:
                    n_segments_equal += 1
    return AlignmentStats(n_aligned, n_differing, n_sub, n_del,
                          n_segments, n_segments_equal, unalignable)
