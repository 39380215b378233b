"""Exception types shared across the package."""


class XorFuncError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateSignatureConflict(XorFuncError):
    """Two equal 128-bit signatures carry different function values.

    Retrying the whole build with a fresh global seed resolves this
    unless the input itself maps one key to two values.
    """


class DuplicateLocalSignature(XorFuncError):
    """Two distinct signatures collide on (shard, local signature).

    For functions this is fatal for the current seed; if it persists,
    widen the signature (sig_bits=128) so more entropy survives
    sharding.
    """


class RetriesExhausted(XorFuncError):
    """Every global seed attempt failed to build the structure."""


class BuildError(XorFuncError):
    """A single construction attempt failed (retried internally)."""


class StructureFormatError(XorFuncError):
    """A serialized structure file is malformed or unsupported."""
