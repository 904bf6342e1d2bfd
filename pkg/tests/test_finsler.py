import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexfinsler.errors import ConstructionError, DegeneracyError, DomainError, UsageError
from hexfinsler.finsler import (
    ZOO_NAMES,
    check_euler,
    check_Lijk_identity,
    invert_metric,
    make_space,
    metric_sample,
    warped_metric,
    zoo,
)

unit = st.floats(-0.5, 0.5, allow_nan=False)


def direction(vals):
    y = np.asarray(vals, float) + np.array([0.9, 0.2, -0.3])[: len(vals)]
    return y / np.linalg.norm(y)


def test_euclidean_tensors():
    ms = metric_sample(zoo("euclidean", 3), [0.1, 0.2, 0.3], [3.0, 0.0, 4.0])
    assert ms.L == pytest.approx(5.0)
    assert np.allclose(ms.l, [0.6, 0.0, 0.8])
    assert np.allclose(ms.g, np.eye(3))
    assert np.abs(ms.C).max() < 1e-14


@given(st.lists(unit, min_size=3, max_size=3), st.lists(unit, min_size=3, max_size=3))
def test_riemannian_metric_is_the_quadratic_form(x, yv):
    y = direction(yv)
    a = np.asarray(warped_metric(3)(x))
    ms = metric_sample(zoo("riemannian", 3), x, y)
    assert np.allclose(ms.g, a, atol=1e-13)
    assert np.allclose(ms.l, a @ y / np.sqrt(y @ a @ y), atol=1e-13)
    assert np.abs(ms.C).max() < 1e-12


@given(st.lists(unit, min_size=3, max_size=3), st.lists(unit, min_size=3, max_size=3))
def test_randers_metric_matches_closed_form(x, yv):
    # g_ij = (L/alpha)(a_ij - alpha_i alpha_j) + (alpha_i + b_i)(alpha_j + b_j)
    y = direction(yv)
    space = zoo("randers_x", 3)
    a = np.asarray(warped_metric(3)(x))
    b = np.array([0.3 + 0.1 * x[1], 0.1 * x[0], 0.0])
    alpha = np.sqrt(y @ a @ y)
    al = a @ y / alpha
    L = alpha + b @ y
    g = L / alpha * (a - np.outer(al, al)) + np.outer(al + b, al + b)
    ms = metric_sample(space, x, y)
    assert ms.L == pytest.approx(L, rel=1e-14)
    assert np.allclose(ms.g, g, rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("name", ZOO_NAMES)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_Lijk_identity_and_euler_on_the_zoo(name, n, rng):
    space = zoo(name, n)
    for _ in range(5):
        x = rng.uniform(-0.5, 0.5, n)
        y = rng.normal(size=n)
        y /= np.linalg.norm(y)
        assert check_Lijk_identity(space, x, y) <= 1e-9
        assert max(check_euler(space, x, y).values()) <= 1e-9


def test_quartic_is_not_riemannian():
    ms = metric_sample(zoo("quartic", 3), [0, 0, 0], [0.6, 0.0, 0.8])
    assert np.abs(ms.C).max() > 1e-3


def test_construction_errors():
    with pytest.raises(ConstructionError):
        make_space("randers", 2, a=np.eye(2), b=[1.2, 0.0])
    with pytest.raises(ConstructionError):
        make_space("riemannian", 2, a=[[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(UsageError):
        zoo("bogus", 3)
    with pytest.raises(UsageError):
        zoo("euclidean", 6)
    with pytest.raises(UsageError):
        make_space("riemannian", 2)


def test_points_outside_the_domain_are_refused():
    space = zoo("randers", 2)
    with pytest.raises(DomainError):
        metric_sample(space, [0.0, 0.0], [0.0, 0.0])


def test_degenerate_metric_is_refused():
    with pytest.raises(DegeneracyError):
        invert_metric(np.diag([1.0, 1e-14]))
    with pytest.raises(DegeneracyError):
        invert_metric(np.diag([1.0, -1.0]))
