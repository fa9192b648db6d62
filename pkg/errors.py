"""
Errors module - Exception hierarchy shared by the library and the CLI.

Library code raises these; only app.py turns them into exit codes.
"""


class AutomatonGroupError(Exception):
    """Root of every error raised by this package."""


class ConstructionError(AutomatonGroupError):
    """An automaton, acceptor or grammar could not be built as described."""


class NotInvertible(AutomatonGroupError):
    """A negative state was applied in an automaton whose rows are not permutations."""


class AlphabetMismatch(AutomatonGroupError):
    """Parts that must share an alphabet do not."""


class NotPowerOfTwo(AutomatonGroupError):
    """Commutator depth parameters must be powers of two."""


class GammaNotPowerOfTwo(NotPowerOfTwo):
    """The configuration alphabet was not padded to a power of two."""


class EmptyInput(AutomatonGroupError):
    """A builder received an empty list where at least one item is required."""


class Nondeterministic(ConstructionError):
    """A transition table defines two moves for the same (state, symbol)."""


class SpaceBoundViolation(AutomatonGroupError):
    """The simulated machine left the tape segment allowed by its space bound."""


class GuardExceeded(AutomatonGroupError):
    """Expanding a straight-line program would exceed the configured length guard."""


class CyclicGrammar(ConstructionError):
    """A straight-line program references itself."""


class FormatError(AutomatonGroupError):
    """A JSON document or a command-line literal is malformed."""


class NoComputation(AutomatonGroupError):
    """A witness was requested for an input the machine does not accept."""
