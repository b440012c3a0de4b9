import numpy as np
import pytest

from src import gsm
from src.errors import InvalidParameters, LockedRange, NotLinear, ZeroStiffness
from tests import testcases


@pytest.mark.parametrize('testcase', testcases.gsm_tests)
def test_force_and_stiffness(testcase):
    """Test the spring model force and tangent stiffness against hand-computed values."""
    params = gsm.GsmParams(testcase.k1, testcase.k2, testcase.gap, testcase.length)
    assert gsm.gsm_force(params, testcase.y) == pytest.approx(testcase.force, rel=1e-12, abs=1e-12)
    assert gsm.gsm_stiffness(params, testcase.y) == pytest.approx(testcase.stiffness, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize('testcase', testcases.qzs_tests)
def test_quasi_zero(testcase):
    """Test that the quasi-zero-stiffness flag fires exactly when K1 = 2*K2."""
    assert gsm.is_quasi_zero(gsm.GsmParams(testcase.k1, testcase.k2, 0.0, 0.2)) is testcase.expected


class TestSpringLaws:
    def test_stiffness_is_force_slope(self):
        """Test the stiffness law against a central difference of the force law for random parameters."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            length = rng.uniform(0.05, 2.0)
            params = gsm.GsmParams(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(0, 0.9) * length,
                                   length)
            y = rng.uniform(-0.8, 0.8) * length
            h = 1e-6 * length
            slope = (gsm.gsm_force(params, y + h) - gsm.gsm_force(params, y - h)) / (2 * h)
            scale = abs(params.k_vertical) + 2 * abs(params.k_oblique) * length ** 3 / (length ** 2 - y ** 2) ** 1.5
            assert abs(slope - gsm.gsm_stiffness(params, y)) <= 1e-6 * scale

    def test_force_is_odd(self):
        """Test that F(-y) = -F(y)."""
        rng = np.random.default_rng(11)
        for _ in range(100):
            params = gsm.GsmParams(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(0, 0.15), 0.2)
            y = rng.uniform(-0.19, 0.19)
            assert gsm.gsm_force(params, -y) == pytest.approx(-gsm.gsm_force(params, y), rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize('y', [0.2, -0.2, 0.25])
    def test_locked(self, y):
        """Test that the rods lock the roller at |y| >= L instead of returning a non-finite value."""
        params = gsm.GsmParams(100, 30, 0.05, 0.2)
        with pytest.raises(LockedRange):
            gsm.gsm_force(params, y)
        with pytest.raises(LockedRange):
            gsm.gsm_stiffness(params, y)

    def test_origin_stiffness(self):
        assert gsm.origin_stiffness(gsm.GsmParams(100, 30, 0.05, 0.2)) == pytest.approx(55.0)


class TestParameters:
    @pytest.mark.parametrize('gap, length', [(0.3, 0.2), (0.2, 0.2), (-0.01, 0.2), (0.0, 0.0)])
    def test_invalid(self, gap, length):
        """Test that B >= L, negative B and non-positive L are rejected."""
        with pytest.raises(InvalidParameters):
            gsm.GsmParams(100, 30, gap, length)

    def test_linear(self):
        """Test the reduction to a linear spring for B = 0."""
        spring = gsm.linear_gsm(gsm.GsmParams(100, 30, 0.0, 0.2))
        assert spring == gsm.LinearGsm(40.0, 0.2)
        assert gsm.linear_gsm(gsm.GsmParams(100, 80, 0.0, 0.2)).stiffness == -60.0

    def test_not_linear(self):
        with pytest.raises(NotLinear):
            gsm.linear_stiffness(gsm.GsmParams(100, 30, 0.05, 0.2))

    def test_zero_stiffness(self):
        """Test that the quasi-zero-stiffness tuning cannot be used to shape a track."""
        with pytest.raises(ZeroStiffness):
            gsm.linear_gsm(gsm.GsmParams(100, 50, 0.0, 0.2))
        with pytest.raises(ZeroStiffness):
            gsm.LinearGsm(0.0, 0.2)


class TestCurve:
    def test_columns(self):
        curve = gsm.gsm_curve(gsm.GsmParams(100, 30, 0.05, 0.2))
        assert list(curve.columns) == ['Y', 'F', 'K']
        assert len(curve) == 201
        assert curve['Y'].iloc[-1] == pytest.approx(0.18)

    def test_quasi_zero_curve(self):
        """Test that a quasi-zero-stiffness model has a constant zero stiffness column."""
        curve = gsm.gsm_curve(gsm.GsmParams(100, 50, 0.0, 0.2), samples=11)
        assert (curve['K'] == 0).all()

    def test_range_locked(self):
        with pytest.raises(LockedRange):
            gsm.gsm_curve(gsm.GsmParams(100, 30, 0.05, 0.2), y_max=0.2)
