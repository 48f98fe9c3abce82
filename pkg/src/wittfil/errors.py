"""Exception types shared across the package.

Every error that the CLI maps to an exit code lives here so that the
command layer can catch by family rather than by module.
"""


class WittfilError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(WittfilError):
    """A needed series coefficient lies at or beyond the known window."""


class DivisionByZero(WittfilError):
    """Inversion of zero, or of an element not determinably nonzero."""


class NotAPthPower(WittfilError):
    """p-th root requested of an element outside (field)^p."""


class CharacteristicMismatch(WittfilError):
    """Operation requires a base ring of characteristic p."""


class UnsupportedRing(WittfilError):
    """Operation not defined over this coefficient ring (e.g. ghost in char p)."""


class ShapeMismatch(WittfilError):
    """Incompatible lengths/shapes for a homomorphism word application."""


class InvalidDecomposition(WittfilError):
    """A Frobenius decomposition does not reconstruct its element or breaks its level."""


class CapExceeded(WittfilError):
    """A configured internal bound (F-degree, Witt length) was exceeded."""


class SearchSpaceExceeded(WittfilError):
    """Brute-force oracle asked outside its tiny configured domain."""


class RankCapExceeded(WittfilError):
    """Higher local field rank beyond the configured cap."""


class UnsupportedResidueField(WittfilError):
    """Extension construction needs residue-field structure we do not model."""


class ParseError(WittfilError):
    """Expression failed to parse; carries position and expectation info."""

    def __init__(self, message, pos=None, expected=None):
        super().__init__(message)
        self.pos = pos
        self.expected = expected


class UnknownSuite(WittfilError):
    """Verification suite name not registered."""


class VerificationFailure(WittfilError):
    """A verification suite found a counterexample."""
