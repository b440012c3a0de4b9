import pytest
import shutil

import numpy as np

from src.force import parse_force
from src.gsm import LinearGsm
from src.track import fit_track
from src.design import DesignProblem, design_branches


@pytest.fixture(scope='class')
def testdir(tmp_path_factory):
    testdir = tmp_path_factory.mktemp('tests')
    yield testdir
    shutil.rmtree(testdir)


@pytest.fixture(scope='session')
def softening_problem():
    """M*X'' = 5000*X^3 shaped with |K| = 100 N/m, |delta| = 0.1 m and L = 0.2 m."""
    return DesignProblem(parse_force('5000*X^3'), stiffness=100.0, preload=0.1, travel_limit=0.2)


@pytest.fixture(scope='session')
def softening_branches(softening_problem):
    return design_branches(softening_problem)


@pytest.fixture(scope='session')
def quadratic_branches():
    return design_branches(DesignProblem(parse_force('X^2'), stiffness=100.0, preload=0.0, travel_limit=0.2))


@pytest.fixture(scope='session')
def identity_track():
    """Y = X on [-0.15, 0.15] with K = 100 N/m: a harmonic oscillator with omega = 10 rad/s for M = 1 kg."""
    xs = np.linspace(-0.15, 0.15, 31)
    return fit_track(np.column_stack([xs, xs]), LinearGsm(100.0, 0.2))


@pytest.fixture(scope='session')
def parabola_samples():
    """Y = 5*X^2 sampled 200 times on [-0.19, 0.19]."""
    xs = np.linspace(-0.19, 0.19, 200)
    return np.column_stack([xs, 5 * xs ** 2])
