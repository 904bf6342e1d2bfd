import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexfinsler.errors import UsageError
from hexfinsler.finsler import metric_sample, zoo
from hexfinsler.hvector import (
    angular_gradient,
    b_values,
    check_hvector,
    make_hvector,
    quadratic_gradient,
)

unit = st.floats(-0.5, 0.5, allow_nan=False)
vec3 = st.lists(unit, min_size=3, max_size=3)


def _y(v):
    y = np.asarray(v) + np.array([0.7, -0.4, 0.3])
    return y / np.linalg.norm(y)


@given(vec3, vec3)
def test_constant_covector_on_riemannian_base_is_strong(x, yv):
    hv = make_hvector("position", c=[0.2, -0.1, 0.05])
    rep = check_hvector(zoo("riemannian", 3), hv, x, _y(yv))
    assert rep.weak_ok() and rep.strong_ok()
    assert rep.rho == 0.0
    assert rep.indicatory_residual <= 1e-12


@given(vec3, vec3)
def test_mixed_hvector_on_randers_is_weak_only(x, yv):
    hv = make_hvector("mixed", f=0.15, c=[0.1, -0.05, 0.08])
    space = zoo("randers", 3)
    y = _y(yv)
    rep = check_hvector(space, hv, x, y)
    assert rep.weak_residual <= 1e-12
    assert rep.rho_direction_residual <= 1e-9
    assert not rep.strong_ok()
    # b_i = f l_i + c_i
    ms = metric_sample(space, x, y)
    assert np.allclose(b_values(space, hv, x, y), 0.15 * ms.l + [0.1, -0.05, 0.08], atol=1e-14)


def test_support_scaled_is_weak_with_rho_equal_to_f():
    hv = make_hvector("support_scaled", f=0.3)
    rep = check_hvector(zoo("quartic", 3), hv, [0, 0, 0], [0.6, 0.0, 0.8])
    assert rep.weak_residual <= 1e-12
    assert rep.rho == 0.3
    assert rep.tau == pytest.approx(0.3)
    assert np.abs(rep.m).max() <= 1e-14
    assert not rep.strong_ok()


@given(vec3)
def test_angular_gradient_is_tangent_to_spheres(xv):
    x = np.asarray(xv) + np.array([0.6, 0.1, 0.2])
    c = np.asarray(angular_gradient(0, 0.3)(list(x)))
    assert abs(c @ x) <= 1e-14
    # it is the gradient of 0.3 * x0 / |x|
    h = 1e-6
    phi = lambda z: 0.3 * z[0] / np.linalg.norm(z)
    grad = [(phi(x + h * e) - phi(x - h * e)) / (2 * h) for e in np.eye(3)]
    assert np.allclose(c, grad, atol=1e-9)


def test_quadratic_gradient_symmetrises_Q():
    c = quadratic_gradient([0.1, 0.0], [[0.0, 1.0], [0.0, 0.0]])
    assert c([1.0, 2.0]) == pytest.approx([0.1 + 1.0, 0.5])


def test_constructor_errors():
    with pytest.raises(UsageError):
        make_hvector("position")
    with pytest.raises(UsageError):
        make_hvector("mixed", c=[0, 0])
    with pytest.raises(UsageError):
        make_hvector("position", c=[0, 0], declared_level="medium")
    with pytest.raises(UsageError):
        make_hvector("spiral")
    assert make_hvector("zero").is_zero
