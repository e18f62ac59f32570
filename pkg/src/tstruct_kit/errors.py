"""Exception vocabulary shared across the package.

Every error carries enough context to reproduce the failing call; none of
them is ever silenced internally.
"""


class TstructError(Exception):
    """Base class for all package errors."""


class ParseError(TstructError):
    """An input file line could not be parsed; message cites the line."""


class MalformedRelation(TstructError):
    """A relation is not a combination of parallel paths of length >= 2."""


class NonAdmissible(TstructError):
    """The relation ideal could not be certified admissible within the cap."""


class UnknownVertex(TstructError):
    """A vertex id is not part of the quiver."""


class AlgebraMismatch(TstructError):
    """Two objects over different algebras were combined."""


class ZeroModule(TstructError):
    """An operation that needs a nonzero module received the zero module."""


class BudgetExceeded(TstructError):
    """A configured search budget (orbit, line or universe) ran out."""


class UniverseIncomplete(TstructError):
    """An operation requiring a complete universe got an uncertified one."""


class NotAChainMap(TstructError):
    """Components do not commute with the differentials."""


class NotAComplex(TstructError):
    """Differentials do not compose to zero or have mismatched ends."""


class WindowTooSmall(TstructError):
    """A resolution window does not cover the degrees a computation needs."""


class NotProjectiveEntries(TstructError):
    """A complex expected to have projective entries does not."""


class NotInjectiveEntries(TstructError):
    """A complex expected to have injective entries does not."""


class NotATorsionClass(TstructError):
    """A member set is not closed under quotients and extensions."""


class WindowMissing(TstructError):
    """A generated t-structure specification lacks its window."""


class WindowViolation(TstructError):
    """An intermediate-window validation found a counterexample."""


class NotSilting(TstructError):
    """A complex failed the silting verification it was required to pass."""


class NotPerfect(TstructError):
    """An operation needs a bounded complex of projectives."""


class NotInHeart(TstructError):
    """An object is not in the heart of the given t-structure."""


class UndecidedStructure(TstructError):
    """An exact structural decision is outside the implemented range.

    Raised instead of guessing (for example: radical computation over a
    prime smaller than the endomorphism dimension).
    """
