"""Unsupervised segmenters: branching-entropy objectives, a seeded random
baseline, and a minimum-description-length morph lexicon.

The entropy segmenters operate on precomputed per-gap profiles, so they are
independent of the language model that produced the entropies.  Threshold
constants therefore always need retuning when the model family or entropy
base changes; ``tune_theta`` grid-searches against gold segmentations.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

from . import evaluate
from .charlm import CharLm, EntropyProfile, entropy_profile
from .errors import DataError, ModelFormatError
from .segmentation import SurfaceSegmentation

# Per-language threshold defaults for the constant objective.  These were
# tuned against a different entropy estimator, so treat them as starting
# points for tune_theta rather than as portable truths.
DEFAULT_THETAS = {
    "isiNdebele": 4.0,
    "siSwati": 3.0,
    "isiXhosa": 12.0,
    "isiZulu": 2.5,
}

_MDL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class EntropyConfig:
    objective: str  # "constant" | "increase" | "relative"
    theta: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.objective not in ("constant", "increase", "relative"):
            raise ValueError(f"unknown entropy objective {self.objective!r}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")


def segment_constant_entropy(profile: EntropyProfile, theta: float) -> SurfaceSegmentation:
    """Cut every gap whose left + right entropy exceeds ``theta``."""
    cuts = tuple(g for g, s in enumerate(profile.sums, start=1) if s > theta)
    return SurfaceSegmentation(profile.word, cuts)


def segment_entropy_increase(profile: EntropyProfile) -> SurfaceSegmentation:
    """Cut where entropy rises along either reading direction.

    The left profile is read left to right: gap g is cut when
    left[g] > left[g-1].  The right profile is read right to left: gap g
    is cut when right[g] > right[g+1].  Comparisons are strict, so the
    first gap can only be cut by the right test and the last gap only by
    the left test.
    """
    left, right = profile.left, profile.right
    n_gaps = len(left)
    cuts = []
    for g in range(1, n_gaps + 1):
        i = g - 1
        rising_left = i >= 1 and left[i] > left[i - 1]
        rising_right = i + 1 < n_gaps and right[i] > right[i + 1]
        if rising_left or rising_right:
            cuts.append(g)
    return SurfaceSegmentation(profile.word, tuple(cuts))


def segment_relative_entropy(profile: EntropyProfile, alpha: float = 1.0) -> SurfaceSegmentation:
    """Cut gaps whose entropy sum exceeds alpha times the word's mean sum."""
    sums = profile.sums
    if not sums:
        return SurfaceSegmentation(profile.word)
    mean = sum(sums) / len(sums)
    cuts = tuple(g for g, s in enumerate(sums, start=1) if s > alpha * mean)
    return SurfaceSegmentation(profile.word, cuts)


def segment_with_entropy(profile: EntropyProfile, config: EntropyConfig) -> SurfaceSegmentation:
    if config.objective == "constant":
        return segment_constant_entropy(profile, config.theta)
    if config.objective == "increase":
        return segment_entropy_increase(profile)
    return segment_relative_entropy(profile, config.alpha)


def segment_random(word: str, p: float,
                   rng: Union[int, random.Random]) -> SurfaceSegmentation:
    """Cut each internal gap independently with probability ``p``.

    ``rng`` may be a seed or a live generator; passing the same seed and
    word always reproduces the same segmentation.
    """
    if not 0 <= p <= 1:
        raise ValueError("boundary probability must lie in [0, 1]")
    if isinstance(rng, int):
        rng = random.Random(rng)
    cuts = tuple(g for g in range(1, len(word)) if rng.random() < p)
    return SurfaceSegmentation(word, cuts)


def tune_theta(fwd: CharLm, bwd: CharLm, gold: Sequence[SurfaceSegmentation],
               thetas: Iterable[float]) -> list[tuple[float, float]]:
    """Morpheme micro-F1 of the constant objective for each candidate theta."""
    profiles = [entropy_profile(fwd, bwd, seg.word) for seg in gold]
    results = []
    for theta in thetas:
        pairs = [
            (list(segment_constant_entropy(prof, theta).segments), list(seg.segments))
            for prof, seg in zip(profiles, gold)
        ]
        results.append((theta, evaluate.micro_prf(pairs).f1))
    return results


class MdlModel:
    """Morph lexicon with token counts under a two-part code.

    Total cost = corpus bits (each morph token coded by its lexicon
    probability) + lexicon bits ((length + 1) * char_cost per morph type).
    The per-character cost defaults to log2(alphabet size + 1), the extra
    symbol acting as the morph terminator.
    """

    def __init__(self, alphabet: Iterable[str], char_cost: float | None = None):
        self.alphabet = frozenset(alphabet)
        self.char_cost = (char_cost if char_cost is not None
                          else math.log2(len(self.alphabet) + 1))
        self.lexicon: Counter = Counter()
        self.total = 0
        self._sum_clogc = 0.0
        self._lexicon_bits = 0.0

    # -- incremental cost bookkeeping -----------------------------------
    def _add(self, morph: str, k: int = 1) -> None:
        c = self.lexicon[morph]
        if c == 0:
            self._lexicon_bits += (len(morph) + 1) * self.char_cost
        else:
            self._sum_clogc -= c * math.log2(c)
        c += k
        self.lexicon[morph] = c
        self._sum_clogc += c * math.log2(c)
        self.total += k

    def _remove(self, morph: str, k: int = 1) -> None:
        c = self.lexicon[morph]
        if c < k:
            raise ValueError(f"removing {k} x {morph!r} with count {c}")
        self._sum_clogc -= c * math.log2(c)
        c -= k
        if c == 0:
            del self.lexicon[morph]
            self._lexicon_bits -= (len(morph) + 1) * self.char_cost
        else:
            self.lexicon[morph] = c
            self._sum_clogc += c * math.log2(c)
        self.total -= k

    def total_cost(self) -> float:
        if self.total == 0:
            return 0.0
        corpus = self.total * math.log2(self.total) - self._sum_clogc
        return corpus + self._lexicon_bits

    def recompute_cost(self) -> float:
        """Cost from scratch; also resets accumulated floating-point drift."""
        self._sum_clogc = sum(c * math.log2(c) for c in self.lexicon.values())
        self._lexicon_bits = sum(
            (len(m) + 1) * self.char_cost for m in self.lexicon)
        return self.total_cost()


def _optimize_word(model: MdlModel, morph: str, count: int) -> list[str]:
    """Re-segment one occurrence group greedily, recursing into adopted splits.

    The caller must have removed the occurrence's current morphs; on return
    the chosen decomposition has been added back.
    """
    model._add(morph, count)
    best_cost = model.total_cost()
    model._remove(morph, count)
    best_split = None
    for i in range(1, len(morph)):
        left, right = morph[:i], morph[i:]
        model._add(left, count)
        model._add(right, count)
        cost = model.total_cost()
        model._remove(left, count)
        model._remove(right, count)
        if cost < best_cost:
            best_cost, best_split = cost, i
    if best_split is None:
        model._add(morph, count)
        return [morph]
    left, right = morph[:best_split], morph[best_split:]
    # commit the split, re-optimizing each side in the presence of the other
    model._add(right, count)
    segs = _optimize_word(model, left, count)
    model._remove(right, count)
    segs += _optimize_word(model, right, count)
    return segs


def mdl_train(words: Iterable[str], seed: int = 42, max_passes: int = 10,
              min_gain: float = 1e-4, char_cost: float | None = None) -> MdlModel:
    """Greedy recursive binary splitting under the two-part code.

    Every pass revisits each distinct word in a seeded random order and
    re-segments it whenever that lowers the total cost (a worse reanalysis
    is rolled back, so the cost never increases).  Passes stop when the
    relative improvement falls below ``min_gain`` or after ``max_passes``.
    """
    words = list(words)
    if not words:
        raise DataError("cannot train an MDL model on an empty corpus")
    freq = Counter(words)
    model = MdlModel({ch for w in words for ch in w}, char_cost)
    analyses: dict[str, list[str]] = {}
    for word, count in freq.items():
        analyses[word] = [word]
        model._add(word, count)

    rng = random.Random(seed)
    order = sorted(freq)
    prev_cost = model.recompute_cost()
    for _ in range(max_passes):
        rng.shuffle(order)
        for word in order:
            count = freq[word]
            old_segs = analyses[word]
            old_cost = model.total_cost()
            for m in old_segs:
                model._remove(m, count)
            new_segs = _optimize_word(model, word, count)
            if model.total_cost() > old_cost + 1e-9:
                for m in new_segs:
                    model._remove(m, count)
                for m in old_segs:
                    model._add(m, count)
            else:
                analyses[word] = new_segs
        cost = model.recompute_cost()
        if prev_cost - cost < min_gain * max(prev_cost, 1.0):
            break
        prev_cost = cost
    return model


def mdl_segment(model: MdlModel, word: str) -> SurfaceSegmentation:
    """Lowest-cost decomposition of ``word`` into lexicon morphs.

    Dynamic program over cut positions minimizing the summed code length;
    substrings not covered by the lexicon fall back to smoothed
    single-character morphs, so every word stays segmentable.
    """
    if not word:
        raise ValueError("word must be non-empty")
    n_tokens = model.total + 1
    fallback = math.log2(n_tokens * (len(model.alphabet) + 1))
    max_len = max(map(len, model.lexicon), default=1)
    n = len(word)
    best = [0.0] + [math.inf] * n
    back = [0] * (n + 1)
    for j in range(1, n + 1):
        for i in range(max(0, j - max_len), j):
            piece = word[i:j]
            if piece in model.lexicon:
                cost = best[i] - math.log2(model.lexicon[piece] / n_tokens)
            elif j - i == 1:
                cost = best[i] + fallback
            else:
                continue
            if cost < best[j]:
                best[j], back[j] = cost, i
    cuts = []
    j = n
    while j > 0:
        j = back[j]
        if j > 0:
            cuts.append(j)
    return SurfaceSegmentation(word, tuple(sorted(cuts)))


def save_mdl(model: MdlModel, sink: Union[str, IO[str]]) -> None:
    """Write the lexicon as versioned text, one morph/count line per type."""
    own = isinstance(sink, str)
    fh = open(sink, "w", encoding="utf-8") if own else sink
    try:
        fh.write(f"morphseg-mdl {_MDL_FORMAT_VERSION}\n")
        fh.write(f"alphabet {''.join(sorted(model.alphabet))}\n")
        fh.write(f"char_cost {model.char_cost!r}\n")
        fh.write("[lexicon]\n")
        for morph in sorted(model.lexicon):
            fh.write(f"{morph}\t{model.lexicon[morph]}\n")
        fh.write("[end]\n")
    finally:
        if own:
            fh.close()


def load_mdl(source: Union[str, IO[str]]) -> MdlModel:
    """Read a lexicon written by save_mdl."""
    own = isinstance(source, str)
    fh = open(source, "r", encoding="utf-8") if own else source
    try:
        lines = fh.read().splitlines()
    finally:
        if own:
            fh.close()
    if not lines or not lines[0].startswith("morphseg-mdl "):
        raise ModelFormatError("not an MDL model file")
    if lines[0].split()[1] != str(_MDL_FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model version in {lines[0]!r}")
    header: dict[str, str] = {}
    i = 1
    while i < len(lines) and lines[i] != "[lexicon]":
        key, _, value = lines[i].partition(" ")
        header[key] = value
        i += 1
    if i == len(lines):
        raise ModelFormatError("missing [lexicon] section")
    try:
        char_cost = float(header["char_cost"])
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"bad model header: {exc}") from exc
    model = MdlModel(header.get("alphabet", ""), char_cost)
    closed = False
    for line in lines[i + 1:]:
        if line == "[end]":
            closed = True
            break
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ModelFormatError(f"bad lexicon line {line!r}")
        try:
            count = int(parts[1])
        except ValueError:
            raise ModelFormatError(f"bad count in line {line!r}") from None
        if count < 1:
            raise ModelFormatError(f"non-positive count in line {line!r}")
        model._add(parts[0], count)
    if not closed:
        raise ModelFormatError("model file is truncated")
    return model
