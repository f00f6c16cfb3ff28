"""Exception hierarchy shared by every canonlab module."""


class CanonlabError(Exception):
    """Base class for all library errors."""


class CurveError(CanonlabError):
    """A curve description violates a structural invariant."""

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class DuplicateBranch(CurveError):
    pass


class DanglingBranch(CurveError):
    pass


class Disconnected(CurveError):
    pass


class InvalidCurve(CurveError):
    """Raised by :func:`check_valid` and carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class EmptySide(CanonlabError):
    pass


class TooManyComponents(CanonlabError):
    pass


class TwistOnNode(CanonlabError):
    pass


class InvalidBundle(CanonlabError):
    pass


class ZeroSpace(CanonlabError):
    pass


class PoleAtPoint(CanonlabError):
    pass


class BundleMismatch(CanonlabError):
    pass


class ExpressFailure(AssertionError):
    """A product or restriction left the target section space.

    This can only happen through an internal gluing bug, so it derives from
    AssertionError rather than from the library error tree.
    """


class GenusTooSmall(CanonlabError):
    pass


class NotAPencil(CanonlabError):
    pass


class NotGloballyGenerated(CanonlabError):
    pass


class TooFewSections(CanonlabError):
    pass


class WrongCardinality(CanonlabError):
    pass


class BadParameters(CanonlabError):
    pass
