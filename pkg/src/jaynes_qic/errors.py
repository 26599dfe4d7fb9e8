"""Exception types raised across the package."""


class JaynesQICError(Exception):
    """Base class for all package errors."""


class NotDensityMatrix(JaynesQICError, ValueError):
    pass


class NotPure(JaynesQICError, ValueError):
    pass


class InconsistentData(JaynesQICError, ValueError):
    """No density matrix reproduces the supplied means."""


class DegenerateObservable(JaynesQICError, ValueError):
    pass


class EmptyConstraintSet(JaynesQICError, ValueError):
    pass


class OutOfFamilyRange(JaynesQICError, ValueError):
    pass


class InvalidDelta(JaynesQICError, ValueError):
    pass


class InvalidMethod(JaynesQICError, ValueError):
    pass


class InvalidBudget(JaynesQICError, ValueError):
    pass


class InconsistentEnsemble(JaynesQICError, ValueError):
    pass


class TooLarge(JaynesQICError, ValueError):
    """Dense reference objects are capped at 10 qubits."""
