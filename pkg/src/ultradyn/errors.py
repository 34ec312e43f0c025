"""Exception hierarchy.

Domain errors are violated hypotheses or preconditions (bad input); internal
inconsistencies mean two independent computations of the same quantity
disagreed, which is always a bug.
"""


class UltradynError(Exception):
    pass


class DomainError(UltradynError, ValueError):
    pass


class InternalInconsistency(UltradynError, RuntimeError):
    pass


class UndefinedInfiniteSum(DomainError, ArithmeticError):
    pass


class NotPrime(DomainError):
    pass


class DegreeTooSmall(DomainError):
    pass


class ZeroInput(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class DegenerateInput(DomainError):
    pass


class InfiniteVd(DomainError):
    pass


class NoPreimage(DomainError):
    pass


class TraceTooShort(DomainError):
    pass


class TameCaseUnsupported(DomainError):
    pass


class MissingRootPointData(DomainError):
    pass


class EmptyGrid(DomainError):
    pass
