"""Exception hierarchy for the engine.

Every validation failure names the offending element in ``args`` so callers
(and the CLI) can report precise witnesses.  Exit-code mapping: subclasses of
``ValidationError`` are user errors (CLI exit 2), ``DecisionNegative`` marks a
sound "no" answer (exit 1) and ``InternalAssertion`` marks bugs that the
engine's own postconditions caught (exit 3).
"""


class BesgError(Exception):
    """Base class for all engine errors."""


class ValidationError(BesgError):
    """Input rejected by a validator; args carry the witness."""


class DecisionNegative(BesgError):
    """A decision procedure answered "no"."""


class InternalAssertion(BesgError):
    """A postcondition the engine guarantees was violated; this is a bug."""


# --- graphs -----------------------------------------------------------------

class SelfLoopError(ValidationError):
    pass


class DuplicateEdgeError(ValidationError):
    pass


class UnknownLabelError(ValidationError):
    pass


class DanglingEndpointError(ValidationError):
    pass


class NotStringGraphError(ValidationError):
    pass


class NotEncodedStringGraphError(ValidationError):
    pass


# --- DPO rewriting on graphs --------------------------------------------------

class DanglingEdgeError(ValidationError):
    pass


class ParEdgesViolationError(ValidationError):
    pass


class IsolatedWireVertexInSideError(ValidationError):
    pass


class InterfaceNotBoundaryError(ValidationError):
    pass


class InputOutputMismatchError(ValidationError):
    pass


class NoMatchError(DecisionNegative):
    pass


class EdgesConditionViolationError(ValidationError):
    pass


class BadMorphismError(ValidationError):
    pass


# --- edNCE grammars ----------------------------------------------------------

class UnknownVertexError(ValidationError):
    pass


class ParallelBridgeError(ValidationError):
    pass


class LabelMismatchError(ValidationError):
    pass


class MalformedTreeError(ValidationError):
    pass


class NotBoundaryError(ValidationError):
    pass


class NonFinalEdgesError(ValidationError):
    pass


class BadGrammarError(ValidationError):
    pass


# --- decoding systems / B-ESG ------------------------------------------------

class MissingTripleError(ValidationError):
    pass


class AnchorMismatchError(ValidationError):
    pass


class RhsHasBoundaryError(ValidationError):
    pass


class RhsHasEncodingError(ValidationError):
    pass


class RhsTooSmallError(ValidationError):
    pass


class InvalidBesgError(ValidationError):
    """Raised with the full list of violated B-ESG clauses."""

    def __init__(self, violations):
        super().__init__(violations)
        self.violations = list(violations)

    def __str__(self):
        return "; ".join(str(v) for v in self.violations)


class BoundTooLargeForBudgetError(BesgError):
    pass


class NotMatchExhaustiveError(ValidationError):
    pass


# --- grammar-level rewriting --------------------------------------------------

class BoundaryViolationError(ValidationError):
    pass


class IO1ViolationError(ValidationError):
    pass


class IO2ViolationError(ValidationError):
    pass


class NotProperNormalFormError(ValidationError):
    pass


class BijectionMismatchError(ValidationError):
    pass


class DanglingInstructionError(ValidationError):
    pass


class DanglingVertexError(ValidationError):
    pass


class CIConditionViolationError(ValidationError):
    pass


class ResultNotBesgError(InternalAssertion):
    pass


class ScriptNotConcreteError(ValidationError):
    pass


class ReplayMismatchError(InternalAssertion):
    pass


class NonDisjointMatchesError(InternalAssertion):
    pass


# --- !-graphs ------------------------------------------------------------------

class UnknownBangVertexError(ValidationError):
    pass


class InvalidBangGraphError(ValidationError):
    pass


class NontrivialOverlapError(ValidationError):
    pass
