"""Surface segmentations: substring decompositions of a word."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class SurfaceSegmentation:
    """A word plus the cut positions that split it into segments.

    ``boundaries`` are strictly increasing indices in the open interval
    (0, len(word)), so every induced segment is non-empty and the segments
    concatenate back to the word exactly.
    """

    word: str
    boundaries: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.word:
            raise ValueError("word must be non-empty")
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        prev = 0
        for cut in self.boundaries:
            if not prev < cut < len(self.word):
                raise ValueError(
                    f"bad cut position {cut} for word {self.word!r}")
            prev = cut

    @classmethod
    def from_segments(cls, segments: Sequence[str]) -> "SurfaceSegmentation":
        """Build from an explicit list of non-empty segments."""
        if not segments or any(not seg for seg in segments):
            raise ValueError("segments must be a non-empty list of non-empty strings")
        cuts = []
        pos = 0
        for seg in segments[:-1]:
            pos += len(seg)
            cuts.append(pos)
        return cls("".join(segments), tuple(cuts))

    @property
    def segments(self) -> tuple[str, ...]:
        edges = (0, *self.boundaries, len(self.word))
        return tuple(self.word[a:b] for a, b in zip(edges, edges[1:]))

    def __str__(self) -> str:
        return "-".join(self.segments)
