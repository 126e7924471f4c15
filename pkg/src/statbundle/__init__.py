"""Dually affine information geometry on finite sample spaces.

Charts and parallel transports for the mixture/exponential/flat
geometries of positive densities, covariant calculus along density
curves, natural gradients and Fisher matrices, gradient flows and
Lagrangian/Hamiltonian dynamics on statistical bundles, and an
Orlicz-norm toolkit, all validated by the identities they satisfy.
"""

from .errors import (
    BaseMismatch,
    CenteringDriftError,
    ConditioningError,
    ConfigError,
    DegenerateError,
    DimensionMismatch,
    DomainError,
    GradientContractError,
    InfeasibleError,
    IntegrationError,
    PoleError,
    RegularityError,
    StatBundleError,
    ValidationError,
)
from .measure import (
    EXPONENTIAL,
    MIXTURE,
    Density,
    FiberElement,
    FiniteSpace,
    RandomVariable,
    center,
    covariance,
    expectation,
    pairing,
    renormalize,
    third_covariance,
)
from .charts import (
    GEOMETRY_KINDS,
    cumulant,
    cumulant_d1,
    cumulant_d2,
    cumulant_d3,
    displacement_expr,
    entropy,
    exp_chart,
    exp_inv,
    flat_chart,
    flat_inv,
    kl,
    kl_pythagoras,
    mix_chart,
    mix_inv,
    moment,
    sphere_chart,
    sphere_inv,
    sqrt_chart,
    sqrt_inv,
)
from .transport import (
    BundlePoint,
    bundle_chart,
    e_transport,
    m_transport,
    transport,
    transport_duality_gap,
)
from .calculus import (
    BundleCurve,
    FullBundleCurve,
    SmoothCurve,
    e_acceleration,
    e_cov_deriv,
    m_acceleration,
    m_cov_deriv,
    riemannian_deriv,
    velocity,
)
from .gradients import (
    Functional,
    FullBundleFunctional,
    ParametricModel,
    constrained_max_entropy,
    entropy_functional,
    fisher_matrix,
    grad_conjugate_cumulant,
    grad_cumulant_lagrangian,
    grad_entropy,
    grad_quadratic,
    natural_gradient,
    parametric_natural_gradient,
    total_derivative,
)
from .dynamics import (
    FlowResult,
    HamiltonianSpec,
    LagrangianSpec,
    conjugate_cumulant_hamiltonian,
    cumulant_lagrangian,
    entropy_flow_closed,
    entropy_flow_descent_closed,
    entropy_flow_numeric,
    euler_lagrange_flow,
    exp_geodesic,
    exp_geodesic_curve,
    fisher_rao_geodesic,
    gibbs_curve,
    hamilton_flow,
    invert_fiber_gradient,
    legendre_hamiltonian,
    mix_geodesic,
    mix_geodesic_curve,
    quadratic_hamiltonian,
    quadratic_lagrangian,
    sir_flow,
    sir_second_order_matrix,
)
from .orlicz import (
    YOUNG_KINDS,
    DominationReport,
    TailBoundReport,
    YoungIdentityReport,
    YoungPair,
    domination_audit,
    luxemburg_norm,
    orlicz_dual_pairing_gap,
    subexp_bracket_norm,
    tail_bound_audit,
    young,
    young_eval,
    young_identity_audit,
)

__version__ = "0.1.0"
