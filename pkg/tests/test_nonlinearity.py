import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlsconserve.nonlinearity import G_eval, Nonlinearity

nonneg = st.floats(0, 50, allow_nan=False)


def test_examples():
    assert G_eval(Nonlinearity.cubic(1.0), 4, 2) == 3
    assert G_eval(Nonlinearity.quintic(1.0), 1, 1) == 1
    assert G_eval(Nonlinearity.quintic(1.0), 2, 0) == pytest.approx(4 / 3, rel=1e-15)


def test_family_names():
    assert Nonlinearity(1.0, 1).family == "cubic"
    assert Nonlinearity(1.0, 2).family == "quintic"
    assert Nonlinearity(1.0, 3).family == "power3"
    with pytest.raises(ValueError):
        Nonlinearity(1.0, 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), nonneg, nonneg)
def test_divided_difference(p, a, b):
    nl = Nonlinearity(1.0, p)
    g = nl.G(a, b)
    assert g == pytest.approx(nl.G(b, a), rel=1e-14)
    if abs(a - b) > 1e-3 * max(1, a, b):
        ref = (nl.F(a) - nl.F(b)) / (a - b)
        assert g == pytest.approx(ref, rel=1e-9, abs=1e-12)
    # mean value: between f(a) and f(b)
    lo, hi = sorted((float(nl.f(a)), float(nl.f(b))))
    assert lo * (1 - 1e-12) - 1e-300 <= g <= hi * (1 + 1e-12) + 1e-300


@pytest.mark.parametrize("p", [1, 2, 3])
def test_near_equal_limit(p):
    nl = Nonlinearity(1.0, p)
    a = 0.7
    assert nl.G(a, a * (1 + 1e-14)) == pytest.approx(float(nl.f(a)), rel=1e-12)
    assert nl.G(a, a) == pytest.approx(float(nl.f(a)), rel=1e-15)


def test_vectorized_and_negative():
    nl = Nonlinearity.quintic(-1.0)
    out = nl.G(np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 0.0]))
    np.testing.assert_allclose(out, [0.0, 1.0, 4 / 3])
    with pytest.raises(ValueError):
        nl.G(-1.0, 0.0)
