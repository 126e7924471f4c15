import numpy as np
import pytest

from statbundle import fd


def test_stencil_weights_first_derivative():
    w = fd.stencil_weights([-1, 0, 1], 1)
    assert np.allclose(w, [-0.5, 0.0, 0.5])


def test_stencil_weights_second_derivative():
    w = fd.stencil_weights([-1, 0, 1], 2)
    assert np.allclose(w, [1.0, -2.0, 1.0])


@pytest.mark.parametrize("order,halfwidth,rel", [(1, 2, 1e-9), (2, 2, 1e-8), (3, 3, 1e-6)])
def test_derivative_on_exponential(order, halfwidth, rel):
    val = fd.derivative(np.exp, 0.3, order=order, h=1e-2, halfwidth=halfwidth)
    assert val == pytest.approx(np.exp(0.3), rel=rel)


def test_derivative_exact_on_polynomials():
    poly = np.polynomial.Polynomial([1.0, -2.0, 3.0, 0.5])
    val = fd.derivative(poly, 0.7, order=2, h=0.1, halfwidth=1)
    assert val == pytest.approx(poly.deriv(2)(0.7), abs=1e-10)


def test_one_sided_offsets_near_boundary():
    offs = fd.interior_offsets(0.0, (0.0, 1.0), h=1e-2, halfwidth=1)
    assert offs == [0, 1, 2]
    offs = fd.interior_offsets(1.0, (0.0, 1.0), h=1e-2, halfwidth=2)
    assert offs == [-4, -3, -2, -1, 0]
    offs = fd.interior_offsets(0.5, (0.0, 1.0), h=1e-2, halfwidth=1)
    assert offs == [-1, 0, 1]


def test_one_sided_derivative_still_accurate():
    val = fd.derivative(np.sin, 0.0, order=1, h=1e-4, offsets=(0, 1, 2, 3))
    assert val == pytest.approx(1.0, rel=1e-9)


def test_array_valued_functions():
    g = lambda t: np.array([np.sin(t), np.cos(t)])
    out = fd.derivative(g, 0.2, order=1, h=1e-5, halfwidth=1)
    assert np.allclose(out, [np.cos(0.2), -np.sin(0.2)], atol=1e-9)
