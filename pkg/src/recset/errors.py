"""Exception hierarchy shared by every recset module."""


class RecsetError(Exception):
    """Base class for all library errors."""


class OutOfUniverse(RecsetError, ValueError):
    pass


class MixedUniverse(RecsetError, TypeError):
    pass


class ArityMismatch(RecsetError, TypeError):
    pass


class ValueOverflow(RecsetError, OverflowError):
    pass


class InvalidInstance(RecsetError, ValueError):
    pass


class EmptyBase(InvalidInstance):
    pass


class NotAUnit(InvalidInstance):
    pass


class InvalidSpec(InvalidInstance):
    pass


class DimensionMismatch(InvalidInstance):
    pass


class BadAlphabet(InvalidInstance):
    pass


class NotInM(RecsetError, LookupError):
    """Raised when an element is not in the saturated set.

    ``proven_absent`` is True only when saturation reached a fixpoint; after a
    limit was hit the element may still belong to the full set.
    """

    def __init__(self, element, proven_absent: bool):
        self.element = element
        self.proven_absent = proven_absent
        flavor = "proven absent" if proven_absent else "unknown (limit hit)"
        super().__init__(f"{element!r} not in M: {flavor}")


class DescriptionTooLong(RecsetError):
    pass


class InvalidInput(RecsetError, ValueError):
    pass


class NotAtFixpoint(InvalidInput):
    pass


class UniverseTooLarge(RecsetError, ValueError):
    pass


class NoClosedSuperset(RecsetError):
    pass


class HypothesisViolated(RecsetError):
    def __init__(self, message, counterexamples=()):
        super().__init__(message)
        self.counterexamples = list(counterexamples)


class SpecParseError(RecsetError, ValueError):
    """Malformed JSON or element text; carries a position when one is known."""


class SpecValidationError(RecsetError, ValueError):
    """Well-formed input rejected by a builder or schema check; names the field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
