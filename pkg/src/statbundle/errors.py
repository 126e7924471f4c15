"""Exception hierarchy for the statbundle package.

Every failure mode raised by the library derives from
:class:`StatBundleError`, so callers can catch one base class.  Subclasses
distinguish validation problems (bad inputs, broken invariants) from
numeric ones (domain boundaries, failed inversions, diverging
integrations); the CLI maps the two families onto distinct exit codes.
"""


class StatBundleError(Exception):
    """Base class for all statbundle errors."""


class DimensionMismatch(StatBundleError):
    """Operands live on different sample spaces."""


class BaseMismatch(StatBundleError):
    """Fiber elements are based at different densities."""


class ValidationError(StatBundleError):
    """A constructor invariant failed (normalization, finiteness, centering)."""


class DomainError(StatBundleError):
    """Input left the open domain of a chart or operation."""


class PoleError(DomainError):
    """Stereographic chart evaluated at (or too close to) its pole."""


class CenteringDriftError(StatBundleError):
    """A quantity that should be centered drifted beyond the diagnostic bound."""


class GradientContractError(StatBundleError):
    """A functional's declared Euclidean gradient disagrees with its value map."""


class ConditioningError(StatBundleError):
    """Linear solve rejected: matrix condition number above threshold."""


class RegularityError(StatBundleError):
    """Fiber-gradient inversion (Legendre step) failed to converge."""


class IntegrationError(StatBundleError):
    """An ODE integration produced a non-finite or invalid state."""


class InfeasibleError(StatBundleError):
    """Constraint value outside the attainable open range."""


class DegenerateError(StatBundleError):
    """Problem data degenerate (e.g. constant constraint statistic)."""


class ConfigError(StatBundleError):
    """Malformed or incomplete run configuration."""
