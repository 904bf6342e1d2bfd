import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexfinsler.errors import DomainError, UsageError
from hexfinsler.jets import (
    JetRequest,
    cos,
    exp,
    fd_agreement,
    fd_partial,
    get_ring,
    jet_eval,
    log,
    sin,
    sqrt,
    value_of,
)
from hexfinsler.jets import _backend

coords = st.floats(-1.0, 1.0, allow_nan=False)


def test_polynomial_partials_are_exact():
    # f = x0 * y0^2 * y1 + y1^3
    f = lambda X, Y: X[0] * Y[0] ** 2 * Y[1] + Y[1] ** 3
    x, y = [0.7, -0.2], [1.3, 0.4]
    tab = jet_eval(f, x, y, JetRequest(1, 3))
    assert tab.value == pytest.approx(0.7 * 1.3**2 * 0.4 + 0.4**3)
    assert tab.partial(None, (0,)) == pytest.approx(2 * 0.7 * 1.3 * 0.4)
    assert tab.partial(None, (0, 0, 1)) == pytest.approx(2 * 0.7)
    assert tab.partial(None, (1, 1, 1)) == pytest.approx(6.0)
    assert tab.partial(0, (0, 1)) == pytest.approx(2 * 1.3)
    assert tab.partial(1, (0,)) == 0.0


@given(coords, coords)
def test_elementary_functions_match_closed_forms(a, b):
    y = [1.5 + 0.3 * a, 0.5 + 0.2 * b]
    x = [a, b]
    tab = jet_eval(lambda X, Y: exp(X[0] * Y[0]), x, y, JetRequest(1, 2))
    e = math.exp(x[0] * y[0])
    assert tab.partial(None, (0, 0)) == pytest.approx(x[0] ** 2 * e, rel=1e-12, abs=1e-14)
    assert tab.partial(0, (0,)) == pytest.approx((1 + x[0] * y[0]) * e, rel=1e-12)

    tab = jet_eval(lambda X, Y: log(Y[0]) * sin(Y[1]) + cos(X[1]) * sqrt(Y[0]), x, y, JetRequest(1, 3))
    assert tab.partial(None, (0, 1)) == pytest.approx(math.cos(y[1]) / y[0], rel=1e-12)
    assert tab.partial(None, (0, 0, 0)) == pytest.approx(
        2 * math.sin(y[1]) / y[0] ** 3 + math.cos(b) * 3 / 8 * y[0] ** -2.5, rel=1e-12)
    assert tab.partial(1, (0,)) == pytest.approx(-math.sin(b) * 0.5 / math.sqrt(y[0]), rel=1e-12, abs=1e-15)


def test_fields_evaluate_on_plain_floats():
    assert value_of(exp(0.0) + sqrt(4.0)) == pytest.approx(3.0)


def test_y_tensor_is_symmetric_and_matches_partials():
    f = lambda X, Y: (Y[0] ** 2 + 2 * Y[1] ** 2 + Y[2] ** 2 + Y[0] * Y[2]) ** 0.5
    tab = jet_eval(f, [0, 0, 0], [0.3, -0.8, 0.5], JetRequest(0, 3))
    T = tab.y_tensor(3)
    for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0)]:
        assert np.allclose(T, T.transpose(perm))
    assert T[0, 1, 2] == pytest.approx(tab.partial(None, (2, 0, 1)))


@pytest.mark.parametrize("name", _backend.available())
def test_kernel_backends_agree(name, rng):
    ring = get_ring(3, 1, 4)
    ref = _backend.get("python")
    k = _backend.get(name)
    a, b = rng.normal(size=ring.size), rng.normal(size=ring.size)
    h = rng.normal(size=ring.size)
    h[0] = 0.0
    coef = rng.normal(size=6)
    args = (ring.ia, ring.ib, ring.ic, ring.size)
    assert np.allclose(k.mul(a, b, *args), ref.mul(a, b, *args), rtol=1e-13, atol=1e-13)
    assert np.allclose(k.horner(coef, h, *args), ref.horner(coef, h, *args), rtol=1e-12, atol=1e-12)


def test_switching_backend_leaves_results_unchanged():
    f = lambda X, Y: exp(Y[0] * Y[1]) / (1 + X[0] ** 2 + Y[1] ** 2)
    before = jet_eval(f, [0.2, 0.1], [0.5, 0.9], JetRequest(1, 4)).coeffs
    for name in _backend.available():
        prev = _backend.set_backend(name)
        try:
            out = jet_eval(f, [0.2, 0.1], [0.5, 0.9], JetRequest(1, 4)).coeffs
        finally:
            _backend.set_backend(prev)
        assert np.allclose(out, before, rtol=1e-13, atol=1e-15)


def test_finite_difference_oracle_agrees_with_jets():
    f = lambda X, Y: sqrt(Y[0] ** 2 + (1 + X[0] ** 2) * Y[1] ** 2) + 0.3 * Y[0]
    x, y = [0.3, -0.1], [0.6, 0.8]
    tab = jet_eval(f, x, y, JetRequest(1, 4))
    gaps = fd_agreement(f, x, y, tab, (1, 2, 3, 4))
    assert max(gaps[1], gaps[2], gaps[3]) <= 1e-5
    assert gaps[4] <= 1e-4
    assert fd_partial(f, x, y, (0, (1,))) == pytest.approx(tab.partial(0, (1,)), rel=1e-6)


def test_invalid_requests_are_rejected():
    with pytest.raises(UsageError):
        JetRequest(2, 1)
    with pytest.raises(UsageError):
        JetRequest(0, 9)
    with pytest.raises(DomainError):
        jet_eval(lambda X, Y: Y[0], [0.0, 0.0], [0.0, 0.0], JetRequest(0, 1))
    with pytest.raises(UsageError):
        jet_eval(lambda X, Y: Y[0], [0.0, 0.0], [1.0], JetRequest(0, 1))
    with pytest.raises(DomainError):
        jet_eval(lambda X, Y: Y[0], [0.0, 0.0], [1.0, 0.0], JetRequest(0, 1), domain=lambda x, y: False)
    tab = jet_eval(lambda X, Y: Y[0], [0.0, 0.0], [1.0, 0.0], JetRequest(0, 2))
    with pytest.raises(UsageError):
        tab.y_tensor(3)
    with pytest.raises(UsageError):
        tab.partial(None, (5,))


def test_log_of_nonpositive_jet_is_a_domain_error():
    with pytest.raises(DomainError):
        jet_eval(lambda X, Y: log(Y[0]), [0.0], [-1.0], JetRequest(0, 1))


@pytest.mark.parametrize("flag, expected", [("1", "python"), ("0", None)])
def test_backend_is_selected_at_import(flag, expected):
    import os
    import subprocess
    import sys

    env = dict(os.environ, HEXFINSLER_PURE=flag)
    out = subprocess.run([sys.executable, "-c", "import hexfinsler.jets as j; print(j.backend())"],
                         capture_output=True, text=True, env=env, check=True).stdout.strip()
    want = expected or ("cython" if "cython" in _backend.available() else "python")
    assert out == want
