"""
Static force and stiffness laws of the general spring model.

The general spring model is a vertical spring (stiffness k_vertical) in parallel with a pair of rigid
rods of length rod_length whose inner ends are held by oblique springs (stiffness k_oblique). The inner
ends sit half_gap either side of the roller at equilibrium. With half_gap = 0 the model is a linear
spring of stiffness k_vertical - 2*k_oblique, which may be positive, zero or negative.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from src import config
from src.errors import InvalidParameters, LockedRange, NotLinear, ZeroStiffness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GsmParams:
    """Physical parameters of the general spring model.
    Attributes:
        k_vertical: float, stiffness of the vertical spring [N/m]. Any real value.
        k_oblique: float, stiffness of each oblique spring [N/m]. Any real value.
        half_gap: float, distance from the roller to the inner spring ends at equilibrium [m].
        rod_length: float, length of each rigid rod [m]; also the travel limit of the roller.
    """
    k_vertical: float
    k_oblique: float
    half_gap: float
    rod_length: float

    def __post_init__(self):
        if not self.rod_length > 0:
            raise InvalidParameters(f"rod_length must be positive, got {self.rod_length}")
        if not 0 <= self.half_gap < self.rod_length:
            raise InvalidParameters(f"half_gap must satisfy 0 <= B < L, got B={self.half_gap}, "
                                    f"L={self.rod_length}")
        if not (math.isfinite(self.k_vertical) and math.isfinite(self.k_oblique)):
            raise InvalidParameters('spring stiffnesses must be finite')


@dataclass(frozen=True)
class LinearGsm:
    """A general spring model reduced to its linear form (half_gap = 0).
    Attributes:
        stiffness: float, net linear stiffness K_GSM [N/m]. Nonzero.
        travel_limit: float, rod length L [m]; |Y| must stay below it.
    """
    stiffness: float
    travel_limit: float

    def __post_init__(self):
        if not self.travel_limit > 0:
            raise InvalidParameters(f"travel_limit must be positive, got {self.travel_limit}")
        if self.stiffness == 0:
            raise ZeroStiffness('a linear spring model with zero stiffness cannot shape a track')
        if not math.isfinite(self.stiffness):
            raise InvalidParameters('stiffness must be finite')


def _check_travel(params: GsmParams, y: float):
    if abs(y) >= params.rod_length:
        raise LockedRange(f"|Y|={abs(y)} reaches the rod length {params.rod_length}; "
                          f"the roller is locked by the rods")


def gsm_force(params: GsmParams, y: float) -> float:
    """Returns the force needed to hold the roller at displacement y.
    Arguments:
        params: GsmParams.
        y: float, roller displacement [m].
    Returns:
        K1*y - 2*K2*(1 - B/sqrt(L^2 - y^2))*y in N.
    Raises:
        LockedRange if |y| >= L.
    """
    _check_travel(params, y)
    length = params.rod_length
    return (params.k_vertical * y
            - 2 * params.k_oblique * (1 - params.half_gap / math.sqrt(length ** 2 - y ** 2)) * y)


def gsm_stiffness(params: GsmParams, y: float) -> float:
    """Returns the tangent stiffness of the spring model at displacement y [N/m].
    Raises:
        LockedRange if |y| >= L.
    """
    _check_travel(params, y)
    length = params.rod_length
    return (params.k_vertical - 2 * params.k_oblique
            + 2 * params.k_oblique * params.half_gap * length ** 2 / (length ** 2 - y ** 2) ** 1.5)


def origin_stiffness(params: GsmParams) -> float:
    """Returns the stiffness at equilibrium, K1 - 2*K2 + 2*K2*B/L."""
    return gsm_stiffness(params, 0.0)


def linear_stiffness(params: GsmParams) -> float:
    """Returns the constant stiffness K1 - 2*K2 of a spring model with no half gap.
    A zero result is valid here (the quasi-zero-stiffness tuning); see is_quasi_zero.
    Raises:
        NotLinear if params.half_gap is not zero.
    """
    if params.half_gap != 0:
        raise NotLinear(f"half_gap={params.half_gap}; the spring model is only linear when it is 0")
    return params.k_vertical - 2 * params.k_oblique


def is_quasi_zero(params: GsmParams) -> bool:
    """Returns True when the linear part of the stiffness vanishes, |K1 - 2*K2| <= 1e-9*|K1|."""
    return abs(params.k_vertical - 2 * params.k_oblique) <= config.QZS_RELATIVE * abs(params.k_vertical)


def linear_gsm(params: GsmParams) -> LinearGsm:
    """Builds the LinearGsm used by track design.
    Raises:
        NotLinear if params.half_gap is not zero.
        ZeroStiffness if K1 = 2*K2.
    """
    stiffness = linear_stiffness(params)
    if stiffness == 0 or is_quasi_zero(params):
        raise ZeroStiffness(f"K1={params.k_vertical} and K2={params.k_oblique} give zero net stiffness")
    return LinearGsm(stiffness, params.rod_length)


def gsm_curve(params: GsmParams, y_max: float = None, samples: int = config.GSM_SAMPLES) -> pd.DataFrame:
    """Tabulates force and stiffness over a symmetric displacement range.
    Arguments:
        params: GsmParams.
        y_max: float or None, half width of the range. Defaults to 0.9*L.
        samples: int, number of evenly spaced displacements.
    Returns:
        A pandas DataFrame with columns Y, F, K.
    Raises:
        LockedRange if y_max reaches the rod length.
    """
    if y_max is None:
        y_max = config.GSM_RANGE_FRACTION * params.rod_length
    if samples < 2:
        raise InvalidParameters('at least two samples are needed to tabulate the spring model')
    ys = np.linspace(-y_max, y_max, samples)
    forces = [gsm_force(params, float(y)) for y in ys]
    stiffnesses = [gsm_stiffness(params, float(y)) for y in ys]
    logger.debug("Tabulated spring model over |Y| <= %s with %d samples", y_max, samples)
    return pd.DataFrame({'Y': ys, 'F': forces, 'K': stiffnesses})
