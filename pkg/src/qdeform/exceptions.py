"""Exception hierarchy shared by all qdeform modules."""


class QDeformError(Exception):
    """Base class for errors raised by qdeform."""


class Infeasible(QDeformError, ValueError):
    """Right-hand side lies outside the column space at tolerance."""


class SingularTransform(QDeformError, ValueError):
    """A basis change could not be inverted at the working tolerance."""


class QuiverMismatch(QDeformError, ValueError):
    """Representations over different quivers were combined."""


class DimensionMismatch(QDeformError, ValueError):
    """Matrix extents disagree with a dimension vector."""


class IndexOutOfRange(QDeformError, IndexError):
    """An elementary index lies outside the arrow's matrix."""


class LengthMismatch(QDeformError, ValueError):
    """A coordinate vector has the wrong length."""


class UnknownParameter(QDeformError, KeyError):
    """A parameter value was supplied for a slot outside the index set."""


class InconsistentBlocks(QDeformError, ValueError):
    """Pairwise block deformations do not assemble into a miniversal one."""


class NotIdentity(QDeformError, ValueError):
    """The arrow to contract does not carry an identity matrix."""


class LoopArrow(QDeformError, ValueError):
    """A loop cannot be contracted."""


class BadInterval(QDeformError, ValueError):
    """Interval endpoints are invalid for the chain."""


class OrderViolation(QDeformError, ValueError):
    """Interval pair is not lexicographically ordered."""


class NotMiniversal(QDeformError, ValueError):
    """The index set does not give a direct-sum complement."""


class SingularStep(QDeformError, ArithmeticError):
    """A reduction step produced a non-invertible basis change."""


class NoConvergence(QDeformError, RuntimeError):
    """The iterative reduction did not reach the target tolerance.

    The partial :class:`~qdeform.reducer.ReductionResult` is kept on
    ``result`` so callers can inspect the history.
    """

    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result


class PreconditionViolated(QDeformError, ValueError):
    """Certified mode was requested outside the certified radius."""
