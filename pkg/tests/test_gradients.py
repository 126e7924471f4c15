import warnings

import numpy as np
import pytest

from statbundle import (
    ConditioningError,
    ConfigError,
    DegenerateError,
    Density,
    FiniteSpace,
    FullBundleCurve,
    FullBundleFunctional,
    Functional,
    GradientContractError,
    InfeasibleError,
    ParametricModel,
    SmoothCurve,
    center,
    constrained_max_entropy,
    cumulant,
    cumulant_d1,
    e_transport,
    entropy,
    entropy_functional,
    exp_geodesic_curve,
    exp_inv,
    expectation,
    fisher_matrix,
    grad_conjugate_cumulant,
    grad_cumulant_lagrangian,
    grad_entropy,
    grad_quadratic,
    kl,
    natural_gradient,
    pairing,
    parametric_natural_gradient,
    total_derivative,
    velocity,
)
from statbundle import fd
from statbundle.gradients import RankDeficiencyWarning
from statbundle.rand import random_density, random_fiber, random_space


# ---------------------------------------------------------------------------
# natural gradient
# ---------------------------------------------------------------------------

def test_natural_gradient_linear_functional():
    rng = np.random.default_rng(60)
    space = random_space(rng, 5)
    q = random_density(rng, space)
    f = rng.standard_normal(5)
    F = Functional(value=lambda d: expectation(f, d), euclid_grad=lambda d: f)
    grad = natural_gradient(F, q, self_check=True)
    expected = f - expectation(f, q)
    assert np.max(np.abs(grad.values - expected)) < 1e-14


def test_grad_entropy_examples(unit2, tilted2):
    assert np.max(np.abs(grad_entropy(unit2).values)) < 1e-14
    expected = -np.log(tilted2.values) - entropy(tilted2)
    assert np.allclose(grad_entropy(tilted2).values, expected)


def test_grad_entropy_agrees_with_natural_gradient():
    rng = np.random.default_rng(61)
    space = random_space(rng, 6)
    for _ in range(10):
        q = random_density(rng, space)
        a = natural_gradient(entropy_functional(), q).values
        b = grad_entropy(q).values
        assert np.max(np.abs(a - b)) < 1e-10


def test_gradient_contract_violation_detected():
    space = FiniteSpace(np.array([0.5, 0.5]))
    q = Density(space, np.array([1.0, 1.0]))
    lying = Functional(
        value=lambda d: expectation(np.array([1.0, -1.0]), d),
        euclid_grad=lambda d: np.array([5.0, 5.0]),  # wrong direction
    )
    with pytest.raises(GradientContractError):
        natural_gradient(lying, q, self_check=True)


def test_chain_rule_along_random_curves():
    rng = np.random.default_rng(62)
    for _ in range(20):
        space = random_space(rng, 5)
        p = random_density(rng, space)
        a = rng.standard_normal(5)
        F = Functional(
            value=lambda d: float(np.sum(np.log(d.values) * a * space.weights)),
            euclid_grad=lambda d: a / d.values,
        )
        u = random_fiber(rng, p, scale=0.5)
        curve = exp_geodesic_curve(p, u, domain=(-0.5, 0.5))
        t = float(rng.uniform(-0.3, 0.3))
        lhs = fd.diff1(lambda s: F.value(curve.eval(s)), t)
        q = curve.eval(t)
        rhs = pairing(natural_gradient(F, q), velocity(curve, t), q)
        assert abs(lhs - rhs) < 1e-6


def test_entropy_production_sign():
    # a section negatively correlated with log q must produce entropy
    rng = np.random.default_rng(63)
    space = random_space(rng, 4)
    q0 = random_density(rng, space, spread=0.8)

    def section(q):
        return grad_entropy(q).values  # E_q[log q * F] = -Var(log q) < 0

    assert expectation(np.log(q0.values) * section(q0), q0) < 0.0
    from statbundle.dynamics import _integrate_velocity_field

    flow = _integrate_velocity_field(q0, section, T=0.01, h=1e-3)
    ent = flow.monitors["entropy"]
    assert ent[1] > ent[0]


# ---------------------------------------------------------------------------
# Fisher matrix and the parametric natural gradient
# ---------------------------------------------------------------------------

def _bernoulli_model():
    space = FiniteSpace(np.array([0.5, 0.5]))
    p = Density(space, np.array([1.0, 1.0]))
    stat = np.array([1.0, -1.0])

    def at(theta):
        return exp_inv(p, center(theta[0] * stat, p))

    def scores(theta):
        q = at(theta)
        return [stat - expectation(stat, q)]

    return ParametricModel(dim=1, eval=at, scores=scores), p, stat


def test_fisher_matrix_two_state_value():
    model, _, _ = _bernoulli_model()
    info = fisher_matrix(model, np.array([0.0]))
    assert abs(info[0, 0] - 1.0) < 1e-12


def test_fisher_matrix_symmetry_and_fd_scores():
    rng = np.random.default_rng(64)
    space = random_space(rng, 4)
    p = random_density(rng, space)
    basis = [center(rng.standard_normal(4), p).values for _ in range(2)]
    model = ParametricModel(
        dim=2,
        eval=lambda th: exp_inv(p, center(th[0] * basis[0] + th[1] * basis[1], p)),
    )  # scores via finite differences
    theta = np.array([0.2, -0.3])
    info = fisher_matrix(model, theta)
    assert np.max(np.abs(info - info.T)) < 1e-14
    analytic = ParametricModel(
        dim=2,
        eval=model.eval,
        scores=lambda th: [
            b - expectation(b, model.eval(th)) for b in basis
        ],
    )
    assert np.max(np.abs(info - fisher_matrix(analytic, theta))) < 1e-8


def test_fisher_rank_deficiency_flagged():
    model, p, stat = _bernoulli_model()
    dup = ParametricModel(
        dim=2,
        eval=lambda th: model.eval(np.array([th[0] + th[1]])),
        scores=lambda th: 2 * model.scores(np.array([th[0] + th[1]])),
    )
    with pytest.warns(RankDeficiencyWarning):
        fisher_matrix(dup, np.array([0.1, 0.0]))
    F = Functional(value=lambda d: expectation(stat, d), euclid_grad=lambda d: stat)
    with pytest.raises(ConditioningError):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            parametric_natural_gradient(dup, np.array([0.1, 0.0]), F)


def test_parametric_natural_gradient_scalar_case():
    model, p, stat = _bernoulli_model()
    F = Functional(value=lambda d: expectation(stat, d), euclid_grad=lambda d: stat)
    theta = np.array([0.4])
    nat = parametric_natural_gradient(model, theta, F)
    q = model.density(theta)
    score = model.score_arrays(theta)[0]
    dF = expectation(natural_gradient(F, q).values * score, q)
    info = fisher_matrix(model, theta)[0, 0]
    assert nat[0] == pytest.approx(dF / info, abs=1e-12)
    const = Functional(value=lambda d: 3.0, euclid_grad=lambda d: np.zeros(2))
    assert np.allclose(parametric_natural_gradient(model, theta, const), 0.0)


def test_full_family_matches_projected_natural_gradient():
    # with scores spanning the centered space, the score combination
    # reproduces the nonparametric gradient
    rng = np.random.default_rng(65)
    space = random_space(rng, 4)
    p = random_density(rng, space)
    basis = [center(b, p).values for b in np.eye(4)[:3]]
    model = ParametricModel(
        dim=3,
        eval=lambda th: exp_inv(p, center(sum(t * b for t, b in zip(th, basis)), p)),
        scores=lambda th: [
            b - expectation(b, model.eval(th)) for b in basis
        ],
    )
    a = rng.standard_normal(4)
    F = Functional(value=lambda d: expectation(a, d), euclid_grad=lambda d: a)
    theta = rng.uniform(-0.3, 0.3, size=3)
    nat = parametric_natural_gradient(model, theta, F)
    q = model.density(theta)
    combo = sum(c * s for c, s in zip(nat, model.score_arrays(theta)))
    target = natural_gradient(F, q).values
    # equality as elements of the fiber at q (both centered)
    assert np.max(np.abs(combo - expectation(combo, q) - target)) < 1e-8


def test_reparametrization_invariance():
    rng = np.random.default_rng(66)
    space = random_space(rng, 4)
    p = random_density(rng, space)
    basis = [center(rng.standard_normal(4), p).values for _ in range(2)]

    def family(mat):
        def at(th):
            coeff = mat @ th
            return exp_inv(p, center(coeff[0] * basis[0] + coeff[1] * basis[1], p))

        def scores(th):
            q = at(th)
            raw = [b - expectation(b, q) for b in basis]
            return [mat[0, j] * raw[0] + mat[1, j] * raw[1] for j in range(2)]

        return ParametricModel(dim=2, eval=at, scores=scores)

    a_mat = np.array([[2.0, 1.0], [0.5, -1.0]])
    ident = family(np.eye(2))
    reparam = family(a_mat)
    F = Functional(
        value=lambda d: entropy(d), euclid_grad=lambda d: -np.log(d.values) - 1.0
    )
    theta = np.array([0.3, -0.2])
    theta_prime = np.linalg.solve(a_mat, theta)
    nat = parametric_natural_gradient(ident, theta, F)
    nat_prime = parametric_natural_gradient(reparam, theta_prime, F)
    assert np.max(np.abs(a_mat @ nat_prime - nat)) < 1e-8


# ---------------------------------------------------------------------------
# fiber gradients of the model scalars
# ---------------------------------------------------------------------------

def test_grad_quadratic_examples(unit2, sign2):
    zero = sign2.with_values(np.zeros(2))
    g, ge = grad_quadratic(unit2, zero)
    assert np.max(np.abs(g.values)) == 0.0
    g, ge = grad_quadratic(unit2, sign2)
    assert np.max(np.abs(g.values)) < 1e-15  # w^2 constant on two points
    assert np.allclose(ge.values, sign2.values)


def test_grad_quadratic_matches_base_derivative():
    # finite differences of q -> L(q, transported w) in the chart
    rng = np.random.default_rng(67)
    space = random_space(rng, 4)
    q = random_density(rng, space)
    w = random_fiber(rng, q, "exponential", scale=0.7)
    h = random_fiber(rng, q, "exponential", scale=0.6)

    def along(t):
        qt = exp_inv(q, h.with_values(t * h.values))
        wt = e_transport(q, qt, w)
        return 0.5 * expectation(wt.values**2, qt)

    lhs = fd.diff1(along, 0.0)
    grad = grad_quadratic(q, w)[0]
    rhs = pairing(grad, h, q)
    assert abs(lhs - rhs) < 1e-6


def test_cumulant_lagrangian_chart_identity():
    rng = np.random.default_rng(68)
    space = random_space(rng, 5)
    p = random_density(rng, space)
    for _ in range(20):
        u = random_fiber(rng, p, scale=0.5)
        v = random_fiber(rng, p, scale=0.5)
        q = exp_inv(p, u)
        w = e_transport(p, q, v)
        lhs = cumulant(q, w)
        rhs = (
            cumulant(p, u.with_values(u.values + v.values))
            - cumulant(p, u)
            - cumulant_d1(p, u, v)
        )
        assert abs(lhs - rhs) < 1e-10


def test_grad_cumulant_lagrangian_fiber_derivative():
    rng = np.random.default_rng(69)
    space = random_space(rng, 4)
    q = random_density(rng, space)
    w = random_fiber(rng, q, "exponential", scale=0.5)
    h = random_fiber(rng, q, "exponential", scale=0.5)
    _, ge = grad_cumulant_lagrangian(q, w)
    lhs = fd.diff1(lambda t: cumulant(q, w.with_values(w.values + t * h.values)), 0.0)
    assert abs(lhs - pairing(ge, h, q)) < 1e-6
    zero = w.with_values(np.zeros(4))
    g0, ge0 = grad_cumulant_lagrangian(q, zero)
    assert np.max(np.abs(g0.values)) < 1e-14
    assert np.max(np.abs(ge0.values)) < 1e-14


def test_conjugate_cumulant_identities():
    rng = np.random.default_rng(70)
    space = random_space(rng, 5)
    for _ in range(20):
        q = random_density(rng, space)
        eta = random_fiber(rng, q, "mixture", scale=0.5)
        from statbundle.gradients import conjugate_cumulant_value

        value = conjugate_cumulant_value(q, eta)
        r = Density(space, (1.0 + eta.values) * q.values)
        assert abs(value - kl(r, q)) < 1e-12
        # the two fiber gradients invert each other
        w = random_fiber(rng, q, "exponential", scale=0.6)
        momentum = grad_cumulant_lagrangian(q, w)[1]
        back = grad_conjugate_cumulant(q, momentum)[1]
        assert np.max(np.abs(back.values - w.values)) < 1e-8
    zero = random_fiber(rng, q, "mixture", scale=0.0)
    g, gm = grad_conjugate_cumulant(q, zero)
    assert np.max(np.abs(g.values)) == 0.0
    assert np.max(np.abs(gm.values)) == 0.0


# ---------------------------------------------------------------------------
# total derivative on the full bundle
# ---------------------------------------------------------------------------

def _pairing_functional():
    return FullBundleFunctional(
        value=lambda q, eta, w, c: pairing(eta, w, q),
        grad=lambda q, eta, w, c: center(np.zeros(q.n), q, "mixture"),
        grad_m=lambda q, eta, w, c: w,
        grad_e=lambda q, eta, w, c: eta,
    )


def test_total_derivative_stationary_curve(unit2):
    base = SmoothCurve.constant(unit2)
    eta0 = center(np.array([0.5, -0.5]), unit2, "mixture")
    w0 = center(np.array([1.0, -1.0]), unit2, "exponential")
    curve = FullBundleCurve(
        base, eta=lambda t: eta0, w=lambda t: w0,
        eta_deriv=lambda t: np.zeros(2), w_deriv=lambda t: np.zeros(2),
    )
    assert total_derivative(_pairing_functional(), curve, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_total_derivative_reproduces_pairing_rule():
    rng = np.random.default_rng(71)
    space = random_space(rng, 4)
    p = random_density(rng, space)
    u = random_fiber(rng, p, scale=0.4)
    base = exp_geodesic_curve(p, u, domain=(0.0, 1.0))
    raw = rng.standard_normal((2, 4))

    def eta_at(t):
        return center(raw[0] * (1 + 0.2 * t), base.eval(t), "mixture")

    def w_at(t):
        return center(raw[1] + 0.3 * np.sin(t), base.eval(t), "exponential")

    curve = FullBundleCurve(base, eta=eta_at, w=w_at)
    t = 0.5
    lhs = fd.diff1(
        lambda s: expectation(eta_at(s).values * w_at(s).values, base.eval(s)), t
    )
    rhs = total_derivative(_pairing_functional(), curve, t)
    assert abs(lhs - rhs) < 1e-7


def test_total_derivative_with_euclidean_block(unit2):
    base = SmoothCurve.constant(unit2)
    eta0 = center(np.array([0.5, -0.5]), unit2, "mixture")
    w0 = center(np.array([1.0, -1.0]), unit2, "exponential")
    F = FullBundleFunctional(
        value=lambda q, eta, w, c: pairing(eta, w, q) + float(np.sum(c**2)),
        grad=lambda q, eta, w, c: center(np.zeros(2), q, "mixture"),
        grad_m=lambda q, eta, w, c: w,
        grad_e=lambda q, eta, w, c: eta,
        euclid=lambda q, eta, w, c: 2.0 * c,
    )
    curve = FullBundleCurve(
        base, eta=lambda t: eta0, w=lambda t: w0,
        c=lambda t: np.array([t, 2.0 * t]),
        eta_deriv=lambda t: np.zeros(2), w_deriv=lambda t: np.zeros(2),
    )
    # d/dt (t^2 + 4 t^2) = 10 t
    assert total_derivative(F, curve, 0.3) == pytest.approx(3.0, abs=1e-9)


def test_total_derivative_missing_evaluator(unit2):
    base = SmoothCurve.constant(unit2)
    eta0 = center(np.array([0.5, -0.5]), unit2, "mixture")
    w0 = center(np.array([1.0, -1.0]), unit2, "exponential")
    F = FullBundleFunctional(value=lambda q, eta, w, c: 0.0)
    curve = FullBundleCurve(base, eta=lambda t: eta0, w=lambda t: w0)
    with pytest.raises(ConfigError):
        total_derivative(F, curve, 0.5)


# ---------------------------------------------------------------------------
# constrained maximum entropy
# ---------------------------------------------------------------------------

def test_maxent_already_satisfied():
    rng = np.random.default_rng(72)
    space = random_space(rng, 5)
    p = random_density(rng, space)
    f = rng.standard_normal(5)
    b = expectation(f, p)
    theta, q = constrained_max_entropy(f, b, p)
    assert abs(theta) < 1e-10
    assert np.max(np.abs(q.values - p.values)) < 1e-10


def test_maxent_two_state_closed_form(unit2):
    theta, q = constrained_max_entropy(np.array([1.0, -1.0]), np.tanh(1.0), unit2)
    assert theta == pytest.approx(1.0, abs=1e-10)
    assert abs(expectation(np.array([1.0, -1.0]), q) - np.tanh(1.0)) < 1e-10


def test_maxent_errors(unit2):
    with pytest.raises(InfeasibleError):
        constrained_max_entropy(np.array([1.0, -1.0]), 1.5, unit2)
    with pytest.raises(DegenerateError):
        constrained_max_entropy(np.array([2.0, 2.0]), 2.0, unit2)


def test_maxent_monotone_in_theta(unit2):
    f = np.array([1.0, -1.0])
    values = []
    for theta in (-1.0, 0.0, 1.0, 2.0):
        q = exp_inv(unit2, center(theta * f, unit2))
        values.append(expectation(f, q))
    assert all(a < b for a, b in zip(values, values[1:]))


def test_maxent_residual_random():
    rng = np.random.default_rng(73)
    for _ in range(20):
        space = random_space(rng, int(rng.integers(2, 8)))
        p = random_density(rng, space)
        f = rng.standard_normal(space.n)
        lo, hi = float(np.min(f)), float(np.max(f))
        b = float(rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)))
        _, q = constrained_max_entropy(f, b, p)
        assert abs(expectation(f, q) - b) <= 1e-10
