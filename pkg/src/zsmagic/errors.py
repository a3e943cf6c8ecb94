"""Exception types shared across the library."""


class ZsmagicError(Exception):
    """Base class for all library errors."""


class GroupSpecError(ZsmagicError, ValueError):
    """Malformed group specification or element."""


class PreconditionError(ZsmagicError, ValueError):
    """An operation was called outside its documented domain."""


class OutOfTheoremRangeError(PreconditionError):
    """The request is well-formed but outside the range any known
    construction covers; the library refuses rather than guesses."""


class InfeasibleError(ZsmagicError):
    """The requested object provably does not exist."""


class BudgetExceededError(ZsmagicError):
    """A bounded search ran out of nodes before reaching an answer."""


class VerificationError(ZsmagicError):
    """A certificate failed its verifier.  Carries the first violated
    constraint as a machine-readable locus string."""

    def __init__(self, locus: str):
        super().__init__(locus)
        self.locus = locus
