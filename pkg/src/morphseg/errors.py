"""Exception hierarchy shared across the package."""


class MorphsegError(Exception):
    """Base class for every error raised by this package."""


class AnnotationParseError(MorphsegError):
    """A morphological annotation or corpus line could not be parsed."""


class DataError(MorphsegError):
    """Input data violates a documented contract (mismatched words, bad records)."""


class UnalignableError(MorphsegError):
    """A word cannot be aligned to its canonical form without insertions."""


class InvalidLabelSeq(MorphsegError):
    """A label string violates the BMES transition rules."""


class ModelFormatError(MorphsegError):
    """A model file is truncated, corrupted or of an unsupported version."""


class NumericalError(MorphsegError):
    """Training produced a non-finite objective or gradient."""
