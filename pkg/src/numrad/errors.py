"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """An eigen-solve failed to converge."""


class DimensionMismatch(ValueError):
    pass


class DegenerateZ(ValueError):
    """phi(|z|^2) is too small to normalize z against the state."""


class UnnormalizedZ(ValueError):
    pass


class ZeroParameter(ValueError):
    """A parameter that must be a nonzero complex number was zero."""


ZeroAlpha = ZeroParameter


class NegativeZeta(ValueError):
    pass


class EtaOutOfRange(ValueError):
    pass


class XiOutOfDomain(ValueError):
    pass


class ResampleBudgetExhausted(RuntimeError):
    pass
