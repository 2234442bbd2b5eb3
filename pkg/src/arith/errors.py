"""
This module defines the exception hierarchy shared by every package.
"""


class PTWError(Exception):
    """Base class for all errors raised by the library."""


class ZeroDenominator(PTWError):
    """A rational function was built with a zero denominator."""


class PoleHit(PTWError):
    """An evaluation annihilated the denominator."""


class UnboundVariable(PTWError):
    """An evaluation left an indeterminate without a binding."""


class RegimeMismatch(PTWError):
    """Symbolic and numeric scalars were combined."""


class EssentialSingularity(PTWError):
    """Reserved: never raised for rational input."""


class ZeroInput(PTWError):
    """The valuation of zero was requested."""


class SymbolicRootOfUnity(PTWError):
    """A non-real value of psi was requested in the symbolic regime."""


class SymbolicRegime(PTWError):
    """The operation only exists in the numeric regime."""


class SymbolicRamified(PTWError):
    """A ramified character reached a symbolic-only code path."""


class InsufficientPrecision(PTWError):
    """The data is not resolved finely enough for the requested operation."""


class InvalidCharacter(PTWError):
    """The tame data does not have the declared conductor."""


class NonSummableTail(PTWError):
    """A tail series diverges even after rational continuation."""


class UnrecognizedPoleStructure(PTWError):
    """A pole pattern matches no implemented tail germ."""


class OracleRequired(PTWError):
    """No closed form exists and the oracle is disabled."""


class OutsideHeckeFamily(PTWError):
    """The measure is not a Hecke translate of a basic vector."""


class DegenerateParameter(PTWError):
    """The character parameter sits on a degenerate value."""


class PrecisionExhausted(PTWError):
    """A refinement did not stabilize within the maximal precision."""


class NotLocallyConstant(PTWError):
    """An integrand changed under one level of mesh refinement."""


class NonFinite(PTWError):
    """A numeric operation produced NaN or infinity."""
