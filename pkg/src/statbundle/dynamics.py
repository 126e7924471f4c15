"""Geodesics, gradient flows, the SIR system, and bundle mechanics.

All continuous flows integrate with classical fixed-step RK4 in the
exponential chart anchored at the initial density, which preserves
positivity by construction; the anchor is moved to the current density
whenever the chart coordinate grows beyond ``REANCHOR_LIMIT`` (a plain
change of origin).  Densities are renormalized explicitly after every
step and the pre-renormalization residual is recorded as a monitor.

Mechanics run on the full bundle: a Lagrangian ``L(q, w, t)`` with fiber
variable ``w`` in the exponential fiber has momentum
``eta = Grad_e L(q, w, t)`` in the mixture fiber, and the extremal
equations integrate, in the chart at the anchor ``p``,

    du/dt    = U_e[q -> p] w           (w recovered from eta)
    dzeta/dt = U_m[q -> p] Grad L      (zeta the chart momentum)

The Hamiltonian form replaces the right-hand sides with ``Grad_m H`` and
``-Grad H``.  For the kinetic-energy pair (``L = <w,w>_q / 2``,
``H = <eta,eta>_q / 2``) the flow conserves the energy exactly and its
trajectories have zero Riemannian acceleration: they are great circles
under the square-root embedding (:func:`fisher_rao_geodesic`), not
one-parameter exponential families.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .calculus import SmoothCurve
from .charts import cumulant, entropy, exp_inv
from .errors import (
    DomainError,
    IntegrationError,
    RegularityError,
    ValidationError,
)
from .gradients import (
    conjugate_cumulant_value,
    grad_conjugate_cumulant,
    grad_cumulant_lagrangian,
    grad_quadratic,
    grad_entropy,
)
from .measure import (
    EXPONENTIAL,
    MIXTURE,
    Density,
    FiberElement,
    FiniteSpace,
    RandomVariable,
    center,
    expectation,
    pairing,
    renormalize,
)

#: chart coordinate sup-norm that triggers a change of origin
REANCHOR_LIMIT = 30.0
#: flow densities must renormalize within this residual at every step
FLOW_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class FlowResult:
    """Trajectory of a flow: times, densities, optional fibers, monitors."""

    times: np.ndarray
    densities: List[Density]
    fibers: Optional[List[FiberElement]] = None
    monitors: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.size != len(self.densities):
            raise ValidationError("times and densities must have equal length")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ValidationError("times must be strictly increasing")
        object.__setattr__(self, "times", t)

    @property
    def density_matrix(self) -> np.ndarray:
        return np.stack([d.values for d in self.densities])


@dataclass(frozen=True)
class LagrangianSpec:
    """A Lagrangian on the exponential bundle with its gradient maps.

    ``grad`` is the base (natural) gradient, a mixture element;
    ``fiber_grad`` the gradient in the fiber variable, also a mixture
    element (the momentum map).  ``fiber_grad_inverse`` may supply a
    closed-form inverse of the momentum map; damped Newton is the
    fallback.
    """

    value: Callable[[Density, FiberElement, float], float]
    grad: Callable[[Density, FiberElement, float], FiberElement]
    fiber_grad: Callable[[Density, FiberElement, float], FiberElement]
    fiber_grad_inverse: Optional[
        Callable[[Density, FiberElement, float, Optional[FiberElement]], FiberElement]
    ] = None
    time_dependent: bool = False


@dataclass(frozen=True)
class HamiltonianSpec:
    """A Hamiltonian on the mixture bundle with its gradient maps.

    ``grad`` is the base gradient (mixture element); ``fiber_grad`` the
    gradient in the momentum variable (an exponential element, the
    velocity map).
    """

    value: Callable[[Density, FiberElement, float], float]
    grad: Callable[[Density, FiberElement, float], FiberElement]
    fiber_grad: Callable[[Density, FiberElement, float], FiberElement]
    time_dependent: bool = False


# ---------------------------------------------------------------------------
# geodesics and closed forms
# ---------------------------------------------------------------------------

def exp_geodesic(p: Density, u: FiberElement, t: float) -> Density:
    """Point of the one-parameter exponential family at time ``t``."""
    u.require_kind(EXPONENTIAL)
    u.require_base(p)
    return exp_inv(p, u.with_values(t * u.values))


def exp_geodesic_curve(
    p: Density, u: FiberElement, domain: Tuple[float, float] = (0.0, 1.0)
) -> SmoothCurve:
    """The exponential geodesic as a curve with analytic derivatives."""
    u.require_kind(EXPONENTIAL)
    u.require_base(p)

    def at(t: float) -> Density:
        return exp_geodesic(p, u, t)

    def qdot(t: float) -> np.ndarray:
        q = at(t)
        star = u.values - expectation(u.values, q)
        return q.values * star

    def qddot(t: float) -> np.ndarray:
        q = at(t)
        star = u.values - expectation(u.values, q)
        var = expectation(star**2, q)
        return q.values * (star**2 - var)

    return SmoothCurve(eval=at, deriv=qdot, deriv2=qddot, domain=domain)


def mix_geodesic(p: Density, q: Density, t: float) -> Density:
    """Affine combination ``(1 - t) p + t q``; valid only while positive."""
    p.space.require_same(q.space)
    vals = (1.0 - t) * p.values + t * q.values
    if np.any(vals <= 0.0):
        raise DomainError(f"mixture segment leaves the positive densities at t={float(t):g}")
    return Density(p.space, vals)


def mix_geodesic_curve(
    p: Density, q: Density, domain: Tuple[float, float] = (0.0, 1.0)
) -> SmoothCurve:
    diff = q.values - p.values
    zero = np.zeros(p.n)
    return SmoothCurve(
        eval=lambda t: mix_geodesic(p, q, t),
        deriv=lambda t: diff,
        deriv2=lambda t: zero,
        domain=domain,
    )


def gibbs_curve(
    p: Density,
    u: FiberElement,
    a: Callable[[float], float],
    adot: Callable[[float], float],
    addot: Callable[[float], float],
    domain: Tuple[float, float] = (0.0, 1.0),
) -> SmoothCurve:
    """Reparametrized exponential family ``t -> e_p(a(t) u)`` with analytic derivatives."""
    u.require_kind(EXPONENTIAL)
    u.require_base(p)

    def at(t: float) -> Density:
        return exp_inv(p, u.with_values(a(t) * u.values))

    def qdot(t: float) -> np.ndarray:
        q = at(t)
        fluct = u.values - expectation(u.values, q)
        return q.values * adot(t) * fluct

    def qddot(t: float) -> np.ndarray:
        q = at(t)
        fluct = u.values - expectation(u.values, q)
        var = expectation(fluct**2, q)
        star = adot(t) * fluct
        return q.values * (star**2 + addot(t) * fluct - adot(t) ** 2 * var)

    return SmoothCurve(eval=at, deriv=qdot, deriv2=qddot, domain=domain)


def fisher_rao_geodesic(q0: Density, w0: FiberElement, t: float) -> Density:
    """Closed-form solution of the kinetic-energy flow started at ``(q0, w0)``.

    Under the square-root embedding the trajectory is the great circle
    ``rho(t) = cos(omega t) sqrt(q0) + sin(omega t) e`` with
    ``omega = |w0|_{q0} / 2`` and ``e`` the normalized initial direction.
    Constant speed makes the energy conservation exact.  Leaves the
    positive densities in finite time for large ``t``.
    """
    w0.require_kind(EXPONENTIAL)
    w0.require_base(q0)
    root = np.sqrt(q0.values)
    omega = 0.5 * np.sqrt(expectation(w0.values**2, q0))
    if omega == 0.0:
        return q0
    direction = w0.values * root / (2.0 * omega)
    rho = np.cos(omega * t) * root + np.sin(omega * t) * direction
    vals = rho**2
    if np.any(vals <= 0.0):
        raise DomainError("kinetic-energy trajectory left the positive densities")
    return Density(q0.space, vals)


def entropy_flow_closed(q0: Density, t: float) -> Density:
    """Closed form of the entropy ascent flow: ``q(t)`` proportional to ``q0**exp(-t)``."""
    return renormalize(q0.space, np.exp(np.exp(-t) * np.log(q0.values)))


def entropy_flow_descent_closed(q0: Density, t: float) -> Density:
    """Closed form of the entropy descent flow: proportional to ``q0**exp(t)``."""
    return renormalize(q0.space, np.exp(np.exp(t) * np.log(q0.values)))


# ---------------------------------------------------------------------------
# RK4 machinery in the exponential chart
# ---------------------------------------------------------------------------

def _steps(T: float, h: float) -> int:
    if h <= 0.0 or T <= 0.0:
        raise ValidationError("need positive horizon and step")
    return max(1, int(round(T / h)))


def _check_finite(arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise IntegrationError("integration produced a non-finite state")
    return arr


def _chart_density(anchor: Density, u: np.ndarray) -> Density:
    centered = u - expectation(u, anchor)
    return exp_inv(anchor, FiberElement(anchor, RandomVariable(anchor.space, centered), EXPONENTIAL))


def _record_density(space: FiniteSpace, q: Density, residuals: list) -> Density:
    residual = q.normalization_residual()
    residuals.append(residual)
    if residual > FLOW_RESIDUAL_TOL:
        raise IntegrationError(f"density drifted off normalization: {residual:.3e}")
    return renormalize(space, q.values)


def _integrate_velocity_field(
    q0: Density,
    section: Callable[[Density], np.ndarray],
    T: float,
    h: float,
) -> FlowResult:
    """RK4 integral curve of ``star(q) = section(q)`` in the exponential chart."""
    space = q0.space
    n_steps = _steps(T, h)
    anchor = q0
    u = np.zeros(space.n)

    def rhs(u_arr: np.ndarray) -> np.ndarray:
        q = _chart_density(anchor, u_arr)
        sec = section(q)
        return sec - expectation(sec, anchor)  # exponential transport to the anchor

    times = [0.0]
    residuals: list = []
    densities = [_record_density(space, q0, residuals)]
    entropies = [entropy(densities[0])]
    for k in range(n_steps):
        k1 = rhs(u)
        k2 = rhs(u + 0.5 * h * k1)
        k3 = rhs(u + 0.5 * h * k2)
        k4 = rhs(u + h * k3)
        u = _check_finite(u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        q = _record_density(space, _chart_density(anchor, u), residuals)
        if np.max(np.abs(u)) > REANCHOR_LIMIT:
            anchor, u = q, np.zeros(space.n)
        times.append((k + 1) * h)
        densities.append(q)
        entropies.append(entropy(q))
    return FlowResult(
        times=np.array(times),
        densities=densities,
        monitors={
            "entropy": np.array(entropies),
            "norm_residual": np.array(residuals),
        },
    )


def entropy_flow_numeric(q0: Density, T: float, h: float, ascent: bool = True) -> FlowResult:
    """RK4 integration of the entropy gradient flow (ascent) or its reversal."""
    sign = 1.0 if ascent else -1.0
    return _integrate_velocity_field(q0, lambda q: sign * grad_entropy(q).values, T, h)


# ---------------------------------------------------------------------------
# SIR epidemic flow
# ---------------------------------------------------------------------------

def sir_score(p: Density, beta: float, gamma: float) -> np.ndarray:
    """Velocity (Fisher score) of the SIR system at the density ``p = (S, I, R)``."""
    s, i, r = p.values
    return np.array([-beta * i, beta * s - gamma, gamma * i / r])


def sir_second_order_matrix(p: Density, beta: float, gamma: float) -> np.ndarray:
    """State matrix ``A(p)`` with mixture acceleration ``qddot/q = A(p) star(p)``.

    Rows S and I carry the transmission terms; the recovered row scales
    the infected score by ``gamma p(I)/p(R)``, the value of the recovered
    score itself, which is what differentiating the score equations
    yields.
    """
    s, i, r = p.values
    return np.array(
        [
            [-beta * i, -beta * i, 0.0],
            [beta * s, beta * s - gamma, 0.0],
            [0.0, gamma * i / r, 0.0],
        ]
    )


def sir_flow(p0: Density, beta: float, gamma: float, T: float, h: float) -> FlowResult:
    """Integrate the SIR score equations in log-density coordinates.

    Requires three states with uniform reference weights (the score
    equations conserve mass only against the uniform measure) and
    positive rates.
    """
    space = p0.space
    if space.n != 3:
        raise ValidationError("SIR flow needs a 3-point sample space (S, I, R)")
    if np.max(np.abs(space.weights - 1.0 / 3.0)) > 1e-12:
        raise ValidationError("SIR flow needs uniform reference weights")
    if beta < 0.0 or gamma <= 0.0:
        raise ValidationError("SIR needs beta >= 0 and gamma > 0")
    n_steps = _steps(T, h)

    def rhs(ell: np.ndarray) -> np.ndarray:
        p_vals = np.exp(ell)
        if np.any(p_vals <= 0.0) or not np.all(np.isfinite(p_vals)):
            raise IntegrationError("SIR state underflowed")
        s, i, r = p_vals
        return np.array([-beta * i, beta * s - gamma, gamma * i / r])

    ell = np.log(p0.values)
    times = [0.0]
    residuals = [p0.normalization_residual()]
    densities = [renormalize(space, p0.values)]
    for k in range(n_steps):
        k1 = rhs(ell)
        k2 = rhs(ell + 0.5 * h * k1)
        k3 = rhs(ell + 0.5 * h * k2)
        k4 = rhs(ell + h * k3)
        ell = _check_finite(ell + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        total = float(np.sum(np.exp(ell) * space.weights))
        residuals.append(abs(total - 1.0))
        if residuals[-1] > FLOW_RESIDUAL_TOL:
            raise IntegrationError(f"SIR mass drifted: {residuals[-1]:.3e}")
        ell = ell - np.log(total)
        times.append((k + 1) * h)
        densities.append(Density(space, np.exp(ell)))
    return FlowResult(
        times=np.array(times),
        densities=densities,
        monitors={"mass_residual": np.array(residuals)},
    )


# ---------------------------------------------------------------------------
# Lagrangian / Hamiltonian integrators
# ---------------------------------------------------------------------------

#: Newton settings for inverting the momentum map
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 60
NEWTON_MAX_HALVINGS = 40


def invert_fiber_gradient(
    L: LagrangianSpec,
    q: Density,
    eta: FiberElement,
    t: float,
    guess: Optional[FiberElement] = None,
) -> FiberElement:
    """Solve ``Grad_e L(q, w, t) = eta`` for the exponential element ``w``.

    Uses the Lagrangian's closed-form inverse when present, otherwise
    damped Newton on the centered fiber coordinates (step halving, up to
    ``NEWTON_MAX_HALVINGS``, convergence at residual 1e-12).
    """
    eta.require_kind(MIXTURE)
    eta.require_base(q)
    if L.fiber_grad_inverse is not None:
        return L.fiber_grad_inverse(q, eta, t, guess)

    n = q.n
    if guess is not None:
        w_vals = guess.values.copy()
    else:
        w_vals = eta.values - expectation(eta.values, q)

    def residual(vals: np.ndarray) -> np.ndarray:
        w = FiberElement(q, RandomVariable(q.space, vals - expectation(vals, q)), EXPONENTIAL)
        return L.fiber_grad(q, w, t).values - eta.values

    # centered perturbation basis: e_j - E_q[e_j], j = 0..n-2
    basis = np.eye(n)[:, : n - 1] - np.outer(
        np.ones(n), (q.values * q.space.weights)[: n - 1]
    )
    res = residual(w_vals)
    for _ in range(NEWTON_MAX_ITER):
        norm = float(np.max(np.abs(res)))
        if norm <= NEWTON_TOL:
            break
        eps = 1e-7 * max(1.0, float(np.max(np.abs(w_vals))))
        jac = np.empty((n - 1, n - 1))
        for j in range(n - 1):
            jac[:, j] = (residual(w_vals + eps * basis[:, j]) - res)[: n - 1] / eps
        try:
            delta = np.linalg.solve(jac, -res[: n - 1])
        except np.linalg.LinAlgError as exc:
            raise RegularityError(f"momentum map Jacobian singular: {exc}") from exc
        step = 1.0
        for _ in range(NEWTON_MAX_HALVINGS):
            trial = w_vals + step * (basis @ delta)
            trial_res = residual(trial)
            if float(np.max(np.abs(trial_res))) < norm:
                w_vals, res = trial, trial_res
                break
            step *= 0.5
        else:
            raise RegularityError("momentum map inversion stagnated")
    else:
        raise RegularityError("momentum map inversion did not converge")
    return FiberElement(
        q, RandomVariable(q.space, w_vals - expectation(w_vals, q)), EXPONENTIAL
    )


def legendre_hamiltonian(L: LagrangianSpec) -> HamiltonianSpec:
    """Legendre transform of a Lagrangian, as a Hamiltonian spec.

    ``H(q, eta, t) = <eta, w*>_q - L(q, w*, t)`` with ``w*`` the inverse
    momentum map; the base gradient flips sign (envelope theorem through
    the exact transport duality) and the fiber gradient is ``w*`` itself.
    """

    def w_star(q: Density, eta: FiberElement, t: float) -> FiberElement:
        return invert_fiber_gradient(L, q, eta, t)

    def value(q: Density, eta: FiberElement, t: float) -> float:
        w = w_star(q, eta, t)
        return pairing(eta, w, q) - L.value(q, w, t)

    def grad(q: Density, eta: FiberElement, t: float) -> FiberElement:
        w = w_star(q, eta, t)
        base = L.grad(q, w, t)
        return FiberElement(q, RandomVariable(q.space, -base.values), MIXTURE)

    def fiber_grad(q: Density, eta: FiberElement, t: float) -> FiberElement:
        return w_star(q, eta, t)

    return HamiltonianSpec(
        value=value, grad=grad, fiber_grad=fiber_grad, time_dependent=L.time_dependent
    )


def _mixture_center(vals: np.ndarray, p: Density) -> np.ndarray:
    return vals - expectation(vals, p)


@dataclass
class _ChartMechState:
    """Mutable chart state (anchor, coordinate, chart momentum) for mechanics flows."""

    anchor: Density
    u: np.ndarray
    zeta: np.ndarray

    def current(self) -> Tuple[Density, FiberElement]:
        q = _chart_density(self.anchor, self.u)
        eta_vals = (self.anchor.values / q.values) * _mixture_center(self.zeta, self.anchor)
        eta = FiberElement(q, RandomVariable(q.space, eta_vals), MIXTURE)
        return q, eta

    def maybe_reanchor(self) -> None:
        if np.max(np.abs(self.u)) > REANCHOR_LIMIT:
            q, eta = self.current()
            self.anchor = q
            self.u = np.zeros(q.n)
            self.zeta = eta.values.copy()


def _integrate_mechanics(
    q0: Density,
    eta0: FiberElement,
    rhs_maps: Callable[[Density, FiberElement, float], Tuple[FiberElement, FiberElement]],
    energy: Callable[[Density, FiberElement, float], float],
    T: float,
    h: float,
    velocity_fiber: Optional[Callable[[Density, FiberElement, float], FiberElement]] = None,
) -> FlowResult:
    """Shared RK4 loop for Hamilton and Euler-Lagrange systems.

    ``rhs_maps(q, eta, t)`` returns the pair (velocity fiber at ``q``,
    exponential; momentum rate at ``q``, mixture); the loop moves both to
    the anchor chart with the matching transports.
    """
    space = q0.space
    eta0.require_base(q0)
    eta0.require_kind(MIXTURE)
    n_steps = _steps(T, h)
    state = _ChartMechState(anchor=q0, u=np.zeros(space.n), zeta=eta0.values.copy())

    def rhs(t: float, u: np.ndarray, zeta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        local = _ChartMechState(anchor=state.anchor, u=u, zeta=zeta)
        q, eta = local.current()
        vel, eta_rate = rhs_maps(q, eta, t)
        du = vel.values - expectation(vel.values, state.anchor)
        dzeta = (q.values / state.anchor.values) * eta_rate.values
        return du, dzeta

    def record(t, times, residuals, densities, fibers, energies) -> None:
        q_chart, eta_chart = state.current()
        q = _record_density(space, q_chart, residuals)  # renormalized copy
        eta_vals = eta_chart.values - expectation(eta_chart.values, q)
        eta = FiberElement(q, RandomVariable(space, eta_vals), MIXTURE)
        times.append(t)
        densities.append(q)
        fibers.append(velocity_fiber(q, eta, t) if velocity_fiber else eta)
        energies.append(energy(q, eta, t))

    times: list = []
    residuals: list = []
    densities: list = []
    fibers: list = []
    energies: list = []
    record(0.0, times, residuals, densities, fibers, energies)
    for k in range(n_steps):
        t = k * h
        du1, dz1 = rhs(t, state.u, state.zeta)
        du2, dz2 = rhs(t + 0.5 * h, state.u + 0.5 * h * du1, state.zeta + 0.5 * h * dz1)
        du3, dz3 = rhs(t + 0.5 * h, state.u + 0.5 * h * du2, state.zeta + 0.5 * h * dz2)
        du4, dz4 = rhs(t + h, state.u + h * du3, state.zeta + h * dz3)
        state.u = _check_finite(state.u + (h / 6.0) * (du1 + 2 * du2 + 2 * du3 + du4))
        state.zeta = _check_finite(state.zeta + (h / 6.0) * (dz1 + 2 * dz2 + 2 * dz3 + dz4))
        state.u = state.u - expectation(state.u, state.anchor)
        state.zeta = _mixture_center(state.zeta, state.anchor)
        record((k + 1) * h, times, residuals, densities, fibers, energies)
        state.maybe_reanchor()
    return FlowResult(
        times=np.array(times),
        densities=densities,
        fibers=fibers,
        monitors={
            "energy": np.array(energies),
            "norm_residual": np.array(residuals),
        },
    )


def hamilton_flow(
    H: HamiltonianSpec, q0: Density, eta0: FiberElement, T: float, h: float
) -> FlowResult:
    """Integrate the Hamilton equations ``D eta = -Grad H``, ``star q = Grad_m H``.

    The energy monitor records ``H(q(t), eta(t), t)``.  For explicitly
    time-dependent Hamiltonians an ``energy_residual`` monitor with
    ``dH/dt - (partial H / partial t)`` is added instead of a drift
    reading.
    """

    def rhs_maps(q: Density, eta: FiberElement, t: float):
        vel = H.fiber_grad(q, eta, t)
        base = H.grad(q, eta, t)
        rate = FiberElement(q, RandomVariable(q.space, -base.values), MIXTURE)
        return vel, rate

    result = _integrate_mechanics(q0, eta0, rhs_maps, H.value, T, h)
    if H.time_dependent:
        delta = 1e-6
        partial = np.array(
            [
                (H.value(q, f, t + delta) - H.value(q, f, t - delta)) / (2.0 * delta)
                for q, f, t in zip(result.densities, result.fibers, result.times)
            ]
        )
        monitors = dict(result.monitors)
        monitors["energy_residual"] = (
            np.gradient(monitors["energy"], result.times) - partial
        )
        result = FlowResult(result.times, result.densities, result.fibers, monitors)
    return result


def euler_lagrange_flow(
    L: LagrangianSpec, q0: Density, w0: FiberElement, T: float, h: float
) -> FlowResult:
    """Integrate the extremal equations of the action of ``L``.

    The first-order form evolves the chart coordinate and the chart
    momentum; the velocity is recovered from the momentum through the
    inverse fiber gradient at every stage.  Returned fibers are the
    velocity elements ``w(t)``; the energy monitor is the Legendre value
    ``<eta, w>_q - L``.
    """
    w0.require_kind(EXPONENTIAL)
    w0.require_base(q0)
    eta0 = L.fiber_grad(q0, w0, 0.0)
    guess_holder = {"w": w0}

    def recover(q: Density, eta: FiberElement, t: float) -> FiberElement:
        w = invert_fiber_gradient(L, q, eta, t, guess=guess_holder["w"])
        guess_holder["w"] = w
        return w

    def rhs_maps(q: Density, eta: FiberElement, t: float):
        w = recover(q, eta, t)
        return w, L.grad(q, w, t)

    def energy(q: Density, eta: FiberElement, t: float) -> float:
        w = recover(q, eta, t)
        return pairing(eta, w, q) - L.value(q, w, t)

    return _integrate_mechanics(
        q0, eta0, rhs_maps, energy, T, h, velocity_fiber=recover
    )


# ---------------------------------------------------------------------------
# stock Lagrangians / Hamiltonians
# ---------------------------------------------------------------------------

def quadratic_lagrangian() -> LagrangianSpec:
    """Kinetic energy ``L(q, w) = <w, w>_q / 2`` (momentum map is the identity)."""

    def value(q: Density, w: FiberElement, t: float) -> float:
        return 0.5 * expectation(w.values**2, q)

    def grad(q: Density, w: FiberElement, t: float) -> FiberElement:
        return grad_quadratic(q, w)[0]

    def fiber_grad(q: Density, w: FiberElement, t: float) -> FiberElement:
        return FiberElement(q, RandomVariable(q.space, w.values), MIXTURE)

    def inverse(q, eta, t, guess=None) -> FiberElement:
        return FiberElement(q, RandomVariable(q.space, eta.values), EXPONENTIAL)

    return LagrangianSpec(value=value, grad=grad, fiber_grad=fiber_grad, fiber_grad_inverse=inverse)


def quadratic_hamiltonian() -> HamiltonianSpec:
    """``H(q, eta) = <eta, eta>_q / 2``, the Legendre pair of the kinetic Lagrangian."""

    def value(q: Density, eta: FiberElement, t: float) -> float:
        return 0.5 * expectation(eta.values**2, q)

    def grad(q: Density, eta: FiberElement, t: float) -> FiberElement:
        sq = eta.values**2
        vals = -0.5 * (sq - expectation(sq, q))
        return FiberElement(q, RandomVariable(q.space, vals), MIXTURE)

    def fiber_grad(q: Density, eta: FiberElement, t: float) -> FiberElement:
        return FiberElement(q, RandomVariable(q.space, eta.values), EXPONENTIAL)

    return HamiltonianSpec(value=value, grad=grad, fiber_grad=fiber_grad)


def cumulant_lagrangian() -> LagrangianSpec:
    """``L(q, w) = K_q(w)``, whose momentum map sends ``w`` to the tilted density."""

    def value(q: Density, w: FiberElement, t: float) -> float:
        return cumulant(q, w)

    def grad(q: Density, w: FiberElement, t: float) -> FiberElement:
        return grad_cumulant_lagrangian(q, w)[0]

    def fiber_grad(q: Density, w: FiberElement, t: float) -> FiberElement:
        return grad_cumulant_lagrangian(q, w)[1]

    def inverse(q, eta, t, guess=None) -> FiberElement:
        one_plus = 1.0 + eta.values
        if np.any(one_plus <= 0.0):
            raise DomainError("momentum outside the tilted-density range (eta > -1)")
        return center(np.log(one_plus), q, EXPONENTIAL)

    return LagrangianSpec(value=value, grad=grad, fiber_grad=fiber_grad, fiber_grad_inverse=inverse)


def conjugate_cumulant_hamiltonian() -> HamiltonianSpec:
    """``H(q, eta) = E_q[(1 + eta) log(1 + eta)]``, Legendre pair of the cumulant."""

    def value(q: Density, eta: FiberElement, t: float) -> float:
        return conjugate_cumulant_value(q, eta)

    def grad(q: Density, eta: FiberElement, t: float) -> FiberElement:
        return grad_conjugate_cumulant(q, eta)[0]

    def fiber_grad(q: Density, eta: FiberElement, t: float) -> FiberElement:
        return grad_conjugate_cumulant(q, eta)[1]

    return HamiltonianSpec(value=value, grad=grad, fiber_grad=fiber_grad)
