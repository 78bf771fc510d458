"""BMES character labels and their bijection with surface segmentations.

Each character of a word carries one of four labels: B(egin), M(iddle) and
E(nd) spell out a multi-character segment, S marks a single-character
segment.  The label alphabet is kept in sorted order; decoders break score
ties by this index order.
"""

from .errors import InvalidLabelSeq
from .segmentation import SurfaceSegmentation

LABELS = ("B", "E", "M", "S")
LABEL_INDEX = {label: i for i, label in enumerate(LABELS)}

START_LABELS = frozenset("BS")
END_LABELS = frozenset("ES")
NEXT_LABELS = {
    "B": frozenset("EM"),
    "M": frozenset("EM"),
    "E": frozenset("BS"),
    "S": frozenset("BS"),
}


def encode_bmes(seg: SurfaceSegmentation) -> str:
    """Label string of a segmentation: length-1 segments S, longer ones B M* E."""
    parts = []
    for segment in seg.segments:
        if len(segment) == 1:
            parts.append("S")
        else:
            parts.append("B" + "M" * (len(segment) - 2) + "E")
    return "".join(parts)


def check_labels(labels: str, length: int | None = None) -> None:
    """Raise InvalidLabelSeq unless ``labels`` obeys the BMES transition rules."""
    if not labels:
        raise InvalidLabelSeq("empty label sequence")
    if length is not None and len(labels) != length:
        raise InvalidLabelSeq(f"{len(labels)} labels for {length} characters")
    for lab in labels:
        if lab not in LABEL_INDEX:
            raise InvalidLabelSeq(f"unknown label {lab!r}")
    if labels[0] not in START_LABELS:
        raise InvalidLabelSeq(f"sequence may not start with {labels[0]}")
    for a, b in zip(labels, labels[1:]):
        if b not in NEXT_LABELS[a]:
            raise InvalidLabelSeq(f"illegal transition {a}->{b}")
    if labels[-1] not in END_LABELS:
        raise InvalidLabelSeq(f"sequence may not end with {labels[-1]}")


def decode_bmes(labels: str, word: str) -> SurfaceSegmentation:
    """Invert encode_bmes: a boundary follows every E and S except the last."""
    check_labels(labels, len(word))
    cuts = tuple(i + 1 for i, lab in enumerate(labels[:-1]) if lab in END_LABELS)
    return SurfaceSegmentation(word, cuts)
