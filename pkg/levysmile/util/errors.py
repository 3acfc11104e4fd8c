"""
Error hierarchy for levysmile

Every error carries the exit status the command line front end reports for
it: 1 for bad input, 2 for numerical failures. Verification failures (3) are
not exceptions, the `verify` task sets that status itself.
"""

INPUT_ERROR_STATUS = 1
NUMERICAL_ERROR_STATUS = 2
VERIFY_FAILURE_STATUS = 3


class LevySmileError(RuntimeError):
    exit_status = INPUT_ERROR_STATUS


# ----------
# Input errors
# ----------


class ModelConfigError(LevySmileError, ValueError):
    """
    Invalid model parameters, model file, or run configuration
    """


class StripViolation(LevySmileError):
    """
    Argument outside the analyticity strip s_- < Re(s) < s_+
    """


class BranchCut(StripViolation):
    """
    Argument on the real segment where a logarithm's argument is <= 0
    """


class MomentExplosion(LevySmileError):
    """
    The model has no finite first moment (s_+ <= 1)
    """


class UnboundedMoments(LevySmileError):
    """
    The critical moments are infinite (entire mgf)
    """


class NotApplicable(LevySmileError):
    """
    No result in this library covers the requested model/drift combination
    """


class DriftNotZero(NotApplicable):
    pass


class PriceOutOfBounds(LevySmileError):
    pass


class NegativeArgument(LevySmileError, ValueError):
    pass


# ----------
# Numerical failures
# ----------


class NoConvergence(LevySmileError):
    exit_status = NUMERICAL_ERROR_STATUS


class StepTooSmall(LevySmileError):
    exit_status = NUMERICAL_ERROR_STATUS


class AllPointsFailed(LevySmileError):
    exit_status = NUMERICAL_ERROR_STATUS


class NonFiniteValue(LevySmileError):
    exit_status = NUMERICAL_ERROR_STATUS


def get_exit_status(exc):
    return getattr(exc, "exit_status", INPUT_ERROR_STATUS)
