"""Reading and cleaning word-level morphological annotations.

The interchange format is UTF-8 text, one record per line::

    word<TAB>text1[TAG1]-text2[TAG2]-...

Lines starting with ``#`` are comments.  The reader is tolerant: upstream
releases that carry extra TAB-separated columns load unchanged (only the
first two columns are used), and a single space-separated pair also parses.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import AnnotationParseError

_UNIT_RE = re.compile(r"\A([^\[\]]*)\[([^\[\]]+)\]\Z")


@dataclass(frozen=True)
class Morpheme:
    text: str
    tag: str


@dataclass(frozen=True)
class CanonicalAnalysis:
    morphemes: tuple[Morpheme, ...]

    def __post_init__(self):
        if not self.morphemes:
            raise ValueError("analysis needs at least one morpheme")

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(m.text for m in self.morphemes)


@dataclass(frozen=True)
class AnnotatedWord:
    word: str
    analysis: CanonicalAnalysis


@dataclass(frozen=True)
class Dataset:
    split: str
    items: tuple[AnnotatedWord, ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(item.word for item in self.items)


def parse_annotation(raw: str) -> CanonicalAnalysis:
    """Parse ``text[TAG]-text[TAG]-...`` into an ordered morpheme list.

    Zero-length morph texts are legal here (they mark morphemes with no
    surface realization); preprocessing drops them later.
    """
    morphemes = []
    for unit in raw.split("-"):
        m = _UNIT_RE.match(unit)
        if m is None:
            raise AnnotationParseError(f"malformed unit {unit!r} in {raw!r}")
        morphemes.append(Morpheme(m.group(1), m.group(2)))
    return CanonicalAnalysis(tuple(morphemes))


def format_annotation(analysis: CanonicalAnalysis) -> str:
    """Inverse of parse_annotation; zero-length morphs serialize verbatim."""
    return "-".join(f"{m.text}[{m.tag}]" for m in analysis.morphemes)


class SkippedLine(NamedTuple):
    line_no: int
    line: str
    reason: str


class LoadResult(NamedTuple):
    items: list[AnnotatedWord]
    skipped: list[SkippedLine]


def load_corpus(lines: Iterable[str]) -> LoadResult:
    """Parse a line-oriented annotated corpus, skipping malformed lines.

    Returns the surviving words plus a record of every skipped line so
    callers can surface parse problems without aborting the load.
    """
    items: list[AnnotatedWord] = []
    skipped: list[SkippedLine] = []
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" in line:
            fields = [f for f in line.split("\t") if f]
        else:
            fields = line.split()
        if len(fields) < 2:
            skipped.append(SkippedLine(line_no, line, "expected word and annotation"))
            continue
        word, annotation = fields[0], fields[1]
        try:
            analysis = parse_annotation(annotation)
        except AnnotationParseError as exc:
            skipped.append(SkippedLine(line_no, line, str(exc)))
            continue
        items.append(AnnotatedWord(word, analysis))
    return LoadResult(items, skipped)


def is_excluded_token(word: str) -> bool:
    """True for tokens carrying digits or made entirely of non-letters."""
    return any(c.isdigit() for c in word) or not any(c.isalpha() for c in word)


@dataclass
class PreprocessReport:
    raw_train: int = 0
    raw_test: int = 0
    excluded_nonword: int = 0
    zero_morphemes_dropped: int = 0
    excluded_unsegmented: int = 0
    duplicates_removed: int = 0
    train_overlap_removed: int = 0
    train_size: int = 0
    dev_size: int = 0
    test_size: int = 0

    def as_dict(self) -> dict:
        return dict(vars(self))

    def __str__(self) -> str:
        return "\n".join(f"{key}: {value}" for key, value in vars(self).items())


class PreprocessResult(NamedTuple):
    train: Dataset
    dev: Dataset
    test: Dataset
    report: PreprocessReport


def _clean(items: Iterable[AnnotatedWord], report: PreprocessReport) -> list[AnnotatedWord]:
    out = []
    for item in items:
        if is_excluded_token(item.word):
            report.excluded_nonword += 1
            continue
        kept = tuple(m for m in item.analysis.morphemes if m.text)
        dropped = len(item.analysis.morphemes) - len(kept)
        report.zero_morphemes_dropped += dropped
        # a word reduced to a single morpheme counts as unsegmented
        if len(kept) <= 1:
            report.excluded_unsegmented += 1
            continue
        if dropped:
            item = AnnotatedWord(item.word, CanonicalAnalysis(kept))
        out.append(item)
    return out


def _dedup(items: list[AnnotatedWord], report: PreprocessReport) -> list[AnnotatedWord]:
    seen = set()
    out = []
    for item in items:
        if item.word in seen:
            report.duplicates_removed += 1
            continue
        seen.add(item.word)
        out.append(item)
    return out


def preprocess(
    raw_train: Iterable[AnnotatedWord],
    raw_test: Iterable[AnnotatedWord],
    dev_fraction: float,
    shuffle_seed: int | None = None,
) -> PreprocessResult:
    """Clean, deduplicate and split annotated words.

    Tokens with digits or no letters are excluded, zero-length morphs are
    dropped, words left with a single morpheme are excluded, splits are
    deduplicated, and every train word that also occurs in test is removed
    from train.  The dev set is the last ceil(dev_fraction * |train|) words
    in corpus order (or in shuffled order when ``shuffle_seed`` is given).
    """
    if not 0 < dev_fraction < 0.5:
        raise ValueError("dev_fraction must lie in (0, 0.5)")
    report = PreprocessReport()
    raw_train = list(raw_train)
    raw_test = list(raw_test)
    report.raw_train = len(raw_train)
    report.raw_test = len(raw_test)

    test_items = _dedup(_clean(raw_test, report), report)
    train_items = _dedup(_clean(raw_train, report), report)

    test_words = {item.word for item in test_items}
    kept = []
    for item in train_items:
        if item.word in test_words:
            report.train_overlap_removed += 1
        else:
            kept.append(item)

    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(kept)
    n_dev = math.ceil(dev_fraction * len(kept))
    split_at = len(kept) - n_dev
    train_split = Dataset("train", tuple(kept[:split_at]))
    dev_split = Dataset("dev", tuple(kept[split_at:]))
    test_split = Dataset("test", tuple(test_items))
    report.train_size = len(train_split)
    report.dev_size = len(dev_split)
    report.test_size = len(test_split)
    return PreprocessResult(train_split, dev_split, test_split, report)
