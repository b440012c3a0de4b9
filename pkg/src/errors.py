"""
Exceptions raised by camforge.

Everything derives from CamforgeError. ParameterError covers inputs the user has to fix (the command
line exits with code 2), ModelError covers a valid input the model cannot carry through (exit code 3).
"""


class CamforgeError(Exception):
    """Base class for all camforge errors. Replaces bare numerical failures with informative messages."""


class ParameterError(CamforgeError, ValueError):
    """The supplied parameters, files or expressions are unusable."""


class ModelError(CamforgeError):
    """The model is undefined or could not be evaluated for otherwise valid input."""


class InvalidParameters(ParameterError):
    """A parameter violates the invariants of the type it was given to."""


class ConfigError(ParameterError):
    """A configuration file, flag or input file could not be read."""


class ParseError(ParameterError):
    """A force expression is not well formed.
    Attributes:
        offset: int, byte offset into the expression text where parsing failed.
        expected: frozenset of str, the tokens that would have been accepted at offset.
    """
    def __init__(self, message: str, offset: int, expected=frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ''
        super().__init__(f"{message} at offset {offset}{detail}")


class NonIntegerExponent(ParseError):
    """The right-hand side of '^' is not an integer constant."""


class LockedRange(ModelError):
    """|Y| reached the rod length; the roller is locked by the two rods."""


class NotLinear(ModelError):
    """A linear stiffness was requested for a spring model with a nonzero half gap."""


class ZeroStiffness(ModelError):
    """The net linear stiffness is zero, so the track design would divide by zero."""


class OutOfTable(ModelError):
    """A sampled force was queried outside of its table."""


class QuadratureFailure(ModelError):
    """Adaptive quadrature could not meet its tolerance within the depth limit."""


class NonFiniteForce(ModelError):
    """A force expression produced a non-finite value inside the search window."""


class OutOfDomain(ModelError):
    """A position lies outside of the open domain of a track or branch."""


class TravelExceeded(ModelError):
    """A track sample reaches or passes the travel limit."""


class NonMonotoneX(ModelError):
    """Sample positions are not strictly increasing."""


class InsufficientSamples(ModelError):
    """Too few samples were supplied for the requested operation."""


class SearchWindowEmpty(ModelError):
    """The domain search window is too small to contain a single march step."""


class RootSingularity(ModelError):
    """The track slope is unbounded because Y vanishes at the queried position."""


class EmptyDomain(ModelError):
    """A branch has no admissible positions left after shrinking by the boundary tolerance."""


class InvalidInitialState(ModelError):
    """A simulation was started outside of the track domain or inside the lock guard."""


class NoOverlap(ModelError):
    """Two trajectories share no common time span."""
