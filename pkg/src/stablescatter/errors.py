"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside its admissible domain."""


class SingularityError(ValueError):
    """Evaluation requested exactly on a kernel singularity."""


class QuadratureError(RuntimeError):
    """An adaptive quadrature failed to reach the requested tolerance."""


class DegenerateMeasureError(ValueError):
    """The sampling measure of an estimator has zero total mass."""


class FitFailureError(RuntimeError):
    """An extrapolation fit rejected its input sequence."""


class AssemblyBudgetError(RuntimeError):
    """A Galerkin assembly exceeded its size or refinement budget."""


class NonconvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class IllConditionedError(RuntimeError):
    """A first-kind system could not be solved to the requested residual."""


class ConfigError(ValueError):
    """An experiment configuration failed validation.

    Carries ``section`` and ``key`` so the CLI can point at the offending
    entry.
    """

    def __init__(self, message, section=None, key=None):
        self.section = section
        self.key = key
        loc = ""
        if section is not None:
            loc = f"[{section}]" + (f" {key}" if key else "")
            message = f"{loc}: {message}"
        super().__init__(message)
