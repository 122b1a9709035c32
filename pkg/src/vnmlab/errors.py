"""Exception hierarchy shared by every vnmlab module."""


class VnmlabError(ValueError):
    """Base class for contract violations raised by the library."""


class InvalidLayout(VnmlabError):
    pass


class InvalidAssignment(VnmlabError):
    pass


class LayoutMismatch(VnmlabError):
    pass


class LayoutCollision(VnmlabError):
    pass


class UnknownRegister(VnmlabError):
    pass


class InvalidWeights(VnmlabError):
    pass


class WidthMismatch(VnmlabError):
    pass


class UnreachableOutcome(VnmlabError):
    pass


class InvalidPeriod(VnmlabError):
    pass


class NotCoprime(VnmlabError):
    pass


class InvalidLabel(VnmlabError):
    pass


class NoCollision(VnmlabError):
    pass


class FamilyMismatch(VnmlabError):
    pass


class InsufficientConstraints(VnmlabError):
    pass


class UnsupportedInstance(VnmlabError):
    pass


class Inconclusive(VnmlabError):
    pass
