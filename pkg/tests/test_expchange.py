import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexfinsler.errors import SingularChangeError
from hexfinsler.expchange import change_sample, star_space, verify_change
from hexfinsler.finsler import make_space, metric_sample, zoo
from hexfinsler.hvector import affine_scalar, make_hvector

unit = st.floats(-0.5, 0.5, allow_nan=False)
vec3 = st.lists(unit, min_size=3, max_size=3)

RANDERS = make_space("randers", 3, a=[[1.0, 0.0, 0.0], [0.0, 1.2, 0.1], [0.0, 0.1, 0.9]],
                     b=[0.25, -0.1, 0.15])
MIXED = make_hvector("mixed", f=affine_scalar(0.15, [0.05, -0.03, 0.02]), c=[0.1, -0.05, 0.08])


def _y(v):
    y = np.asarray(v) + np.array([0.5, 0.6, -0.4])
    return y / np.linalg.norm(y)


@given(vec3, vec3)
def test_closed_forms_match_differentiation_on_randers_mixed(x, yv):
    res = verify_change(RANDERS, MIXED, x, _y(yv))
    for key in ("starL", "eq3.1", "eq3.2", "eq3.3", "eq3.4", "eq3.6", "eq3.7", "eq3.7_vs_ad"):
        assert res[key] <= 1e-8, key


@given(vec3, vec3)
def test_star_fundamental_function_is_L_exp_beta_over_L(x, yv):
    y = _y(yv)
    ms = metric_sample(RANDERS, x, y)
    beta = (0.15 + 0.05 * x[0] - 0.03 * x[1] + 0.02 * x[2]) * ms.L + np.dot([0.1, -0.05, 0.08], y)
    cs = change_sample(RANDERS, MIXED, x, y)
    assert cs.starL == pytest.approx(ms.L * math.exp(beta / ms.L), rel=1e-14)
    assert cs.nu == pytest.approx(1 + cs.rho - cs.tau)


def test_zero_hvector_is_the_identity_change():
    space = zoo("quartic", 3)
    x, y = [0.1, 0.0, -0.2], [0.3, 0.9, 0.1]
    cs = change_sample(space, make_hvector("zero"), x, y)
    ms = metric_sample(space, x, y)
    assert cs.starL == ms.L
    assert np.allclose(cs.star_g, ms.g, atol=1e-15)
    assert np.allclose(cs.star_C, ms.C, atol=1e-15)
    assert np.allclose(cs.star_ginv, ms.ginv, atol=1e-13)


def test_singular_change_is_refused():
    space = zoo("euclidean", 2)
    hv = make_hvector("position", c=[2.0, 0.0])
    with pytest.raises(SingularChangeError):
        change_sample(space, hv, [0.0, 0.0], [1.0, 0.0])
    assert not star_space(space, hv).contains(np.zeros(2), np.array([1.0, 0.0]))
    assert star_space(space, hv).contains(np.zeros(2), np.array([-1.0, 0.0]))
