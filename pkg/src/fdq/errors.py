"""Exception hierarchy shared by all fdq modules.

Every error raised by core operations derives from FdqError so the CLI can
map any failure to exit code 3 with a stable one-line message.
"""


class FdqError(Exception):
    """Base class for all errors raised by fdq core operations."""


class TruncationMismatch(FdqError):
    """Two series (or series-valued structures) have different truncation orders."""


class NotReal(FdqError):
    """A sign was requested for a series with a nonzero imaginary part."""


class NotUnit(FdqError):
    """Inversion of a series whose lambda^0 coefficient vanishes."""


class BadLeadingTerm(FdqError):
    """Binomial root of a series whose lambda^0 coefficient is not 1."""


class SignatureMismatch(FdqError):
    """Operands live on phase spaces with different signatures or charts."""


class DimensionMismatch(FdqError):
    """A point or vector has the wrong number of components."""


class RankMismatch(FdqError):
    """Module coordinates or class vectors have incompatible lengths."""


class NotHermitian(FdqError):
    """A matrix expected to be Hermitian is not."""


class AlgebraMismatch(FdqError):
    """Bimodule composition over mismatched base algebras."""


class ShapeMismatch(FdqError):
    """Matrix shapes are incompatible for the requested operation."""


class DefectNotSmall(FdqError):
    """Idempotency defect has a nonzero lambda^0 part; deformation undefined."""


class InvalidWeights(FdqError):
    """A positivity certificate carries a non-positive weight."""


class PositivityRefuted(FdqError):
    """A functional required to be positive produced a negative value."""


class PrecisionExhausted(FdqError):
    """A rank decision needed coefficients beyond the truncation order."""


class NotCyclic(FdqError):
    """A candidate cyclic vector fails to generate the module."""


class ParseError(FdqError):
    """Source text outside the expression grammar."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownVariable(ParseError):
    """An identifier that is not a reserved word or a known variable."""


class MixedChart(ParseError):
    """Real (q/p) and holomorphic (z/zb) variables mixed in one expression."""


class SchemaError(FdqError):
    """JSON payload violating a serialization schema."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{message} (at {pointer or '/'})")
        self.pointer = pointer


class ConfigError(FdqError):
    """Invalid run configuration value."""


class UnknownSuite(FdqError):
    """Requested property suite does not exist."""
