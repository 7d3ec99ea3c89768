"""Exception hierarchy shared by the builder, the stores and the CLI."""

from __future__ import annotations


class GCISError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(GCISError, ValueError):
    pass


class EmptyPattern(GCISError, ValueError):
    pass


class UnknownSymbol(GCISError, KeyError):
    pass


class OutOfRange(GCISError, IndexError):
    pass


class Overflow(GCISError, OverflowError):
    """A value does not fit the fixed-width field it must be stored in."""


class InvalidValue(GCISError, ValueError):
    pass


class NotBitonic(GCISError, ValueError):
    pass


class FormatError(GCISError):
    """Raised while decoding an index file."""


class BadMagic(FormatError):
    pass


class VersionMismatch(FormatError):
    pass


class TruncatedStream(FormatError):
    pass


class ChecksumMismatch(FormatError):
    pass
