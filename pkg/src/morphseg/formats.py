"""Line-oriented file formats shared by the command-line tools.

All files are UTF-8 and ``#`` starts a comment line.  Words files hold one
word per line (extra TAB-separated columns are ignored, so a segmentation
file doubles as a words file).  Segmentation files hold
``word<TAB>seg1-seg2-...`` records; since ``-`` is the segment separator,
words containing a literal hyphen are not representable and are rejected.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .corpus import AnnotatedWord, LoadResult, format_annotation, load_corpus
from .errors import DataError
from .segmentation import SurfaceSegmentation


def _content_lines(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield line_no, line


def read_words(path: str) -> list[str]:
    """One word per line; only the first TAB-separated column is used."""
    words = []
    for line_no, line in _content_lines(path):
        word = line.split("\t")[0].strip()
        if not word:
            raise DataError(f"{path}:{line_no}: empty word")
        if any(c.isspace() for c in word):
            raise DataError(f"{path}:{line_no}: word contains whitespace")
        words.append(word)
    return words


def write_words(path: str, words: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for word in words:
            fh.write(word + "\n")


def read_segmentations(path: str) -> list[SurfaceSegmentation]:
    """Parse ``word<TAB>seg1-seg2-...`` records, validating each one."""
    segs = []
    for line_no, line in _content_lines(path):
        parts = line.split("\t")
        if len(parts) < 2:
            raise DataError(f"{path}:{line_no}: expected word<TAB>segments")
        word, seg_str = parts[0], parts[1]
        pieces = seg_str.split("-")
        if any(not p for p in pieces):
            raise DataError(f"{path}:{line_no}: empty segment in {seg_str!r}")
        if "".join(pieces) != word:
            raise DataError(
                f"{path}:{line_no}: segments {seg_str!r} do not spell {word!r}")
        segs.append(SurfaceSegmentation.from_segments(pieces))
    return segs


def write_segmentations(path: str, segs: Iterable[SurfaceSegmentation]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for seg in segs:
            if "-" in seg.word:
                raise DataError(
                    f"word {seg.word!r} contains the segment separator '-'")
            fh.write(f"{seg.word}\t{'-'.join(seg.segments)}\n")


def read_annotated(path: str) -> LoadResult:
    """Load an annotated corpus file (word<TAB>annotation records)."""
    with open(path, "r", encoding="utf-8") as fh:
        return load_corpus(fh)


def write_annotated(path: str, items: Iterable[AnnotatedWord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in items:
            fh.write(f"{item.word}\t{format_annotation(item.analysis)}\n")
