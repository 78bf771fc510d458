"""Deterministic synthetic concatenative corpora with gold segmentations.

Words are built by sampling affixes around a stem from randomly generated
inventories, so the gold boundaries are known by construction.  The same
seed always yields byte-identical corpora, and the three splits are
word-disjoint because duplicates are folded before splitting.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DataError
from .segmentation import SurfaceSegmentation


@dataclass(frozen=True)
class GrammarConfig:
    n_prefixes: int = 20
    n_stems: int = 50
    n_suffixes: int = 20
    min_morphs: int = 2
    max_morphs: int = 5
    train_size: int = 2000
    dev_size: int = 200
    test_size: int = 500
    alphabet: str = "abcdefghijklmnopqrstuvwxyz"
    prefix_lengths: tuple[int, int] = (1, 3)
    stem_lengths: tuple[int, int] = (3, 5)
    suffix_lengths: tuple[int, int] = (1, 3)

    def __post_init__(self):
        if self.n_stems < 1 or not self.alphabet:
            raise DataError("degenerate grammar: need at least one stem and an alphabet")
        if self.n_prefixes < 0 or self.n_suffixes < 0:
            raise DataError("degenerate grammar: negative inventory size")
        if not 1 <= self.min_morphs <= self.max_morphs:
            raise DataError("degenerate grammar: bad morph count range")
        if min(self.train_size, self.dev_size, self.test_size) < 0:
            raise DataError("degenerate grammar: negative split size")


class SynthCorpus(NamedTuple):
    train: list[SurfaceSegmentation]
    dev: list[SurfaceSegmentation]
    test: list[SurfaceSegmentation]


def _inventory(rng: random.Random, size: int, lengths: tuple[int, int],
               alphabet: str) -> list[str]:
    out: list[str] = []
    seen = set()
    attempts = 0
    while len(out) < size and attempts < size * 1000 + 1000:
        attempts += 1
        length = rng.randint(*lengths)
        morph = "".join(rng.choice(alphabet) for _ in range(length))
        if morph not in seen:
            seen.add(morph)
            out.append(morph)
    return out


def generate(config: GrammarConfig = GrammarConfig(), seed: int = 42) -> SynthCorpus:
    """Three word-disjoint splits of concatenative words with gold cuts.

    If the grammar cannot produce enough unique words the splits simply
    come out smaller, filled in train, dev, test order.
    """
    rng = random.Random(seed)
    prefixes = _inventory(rng, config.n_prefixes, config.prefix_lengths, config.alphabet)
    stems = _inventory(rng, config.n_stems, config.stem_lengths, config.alphabet)
    suffixes = _inventory(rng, config.n_suffixes, config.suffix_lengths, config.alphabet)
    if not stems:
        raise DataError("degenerate grammar: empty stem inventory")

    need = config.train_size + config.dev_size + config.test_size
    words: list[SurfaceSegmentation] = []
    seen: set[str] = set()
    stale = 0
    while len(words) < need and stale < 20000:
        n_morphs = rng.randint(config.min_morphs, config.max_morphs)
        n_affixes = n_morphs - 1
        n_pre = rng.randint(0, n_affixes) if prefixes else 0
        n_suf = n_affixes - n_pre if suffixes else 0
        morphs = [rng.choice(prefixes) for _ in range(n_pre)]
        morphs.append(rng.choice(stems))
        morphs += [rng.choice(suffixes) for _ in range(n_suf)]
        word = "".join(morphs)
        if word in seen:
            stale += 1
            continue
        stale = 0
        seen.add(word)
        words.append(SurfaceSegmentation.from_segments(morphs))

    train = words[:config.train_size]
    dev = words[config.train_size:config.train_size + config.dev_size]
    test = words[config.train_size + config.dev_size:need]
    return SynthCorpus(train, dev, test)
