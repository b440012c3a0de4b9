"""
Forward statics of the roller-track model.

A Track pairs a profile Y(X) with a linear spring model. The spring pushes the roller with
F_GSM = -K*Y, and the track turns that into a restoring force on the mass of F(X) = -K*Y*dY/dX.
"""

import math
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from src import config
from src import tools
from src.force import ForceSpec, eval_force
from src.gsm import LinearGsm
from src.errors import (EmptyDomain, InsufficientSamples, InvalidParameters, NonMonotoneX, OutOfDomain,
                        TravelExceeded)

logger = logging.getLogger(__name__)


class Profile:
    """Evaluates a track profile. Subclasses supply Y, dY/dX, the product Y*dY/dX and its slope."""

    def value(self, x: float) -> float:
        raise NotImplementedError

    def slope(self, x: float) -> float:
        raise NotImplementedError

    def product(self, x: float) -> float:
        return self.value(x) * self.slope(x)

    def product_slope(self, x: float) -> float:
        raise NotImplementedError


class SplineProfile(Profile):
    """A natural cubic spline through sampled (X, Y) points.
    Attributes:
        spline: the scipy CubicSpline.
    """
    def __init__(self, xs, ys):
        self.spline = CubicSpline(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float),
                                  bc_type='natural')

    def value(self, x: float) -> float:
        return float(self.spline(x))

    def slope(self, x: float) -> float:
        return float(self.spline(x, 1))

    def product_slope(self, x: float) -> float:
        return self.slope(x) ** 2 + self.value(x) * float(self.spline(x, 2))


@dataclass(frozen=True)
class Track:
    """A roller track bound to a linear spring model.
    Attributes:
        profile: Profile, evaluates Y(X) and its derivatives.
        gsm: LinearGsm, the spring the roller presses against.
        preload: float, Y(0), the spring deformation at X = 0 [m].
        domain: (lo, hi), the open interval of admissible X. X = 0 is admissible even when it is an
            endpoint of a one-sided domain.
        trusted_margin: float, distance from each end inside which the profile is not trusted for
            verification (natural spline end zones) [m].
    """
    profile: Profile
    gsm: LinearGsm
    preload: float
    domain: Tuple[float, float]
    trusted_margin: float = 0.0

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi or not lo <= 0 <= hi:
            raise InvalidParameters(f"track domain ({lo}, {hi}) must be an interval reaching X=0")
        if abs(self.preload) >= self.gsm.travel_limit:
            raise TravelExceeded(f"preload {self.preload} reaches the travel limit {self.gsm.travel_limit}")
        if abs(self.profile.value(0.0) - self.preload) >= 1e-9 * (1 + abs(self.preload)):
            raise InvalidParameters('the profile does not pass through the preload at X=0')

    @property
    def stiffness(self) -> float:
        return self.gsm.stiffness

    @property
    def travel_limit(self) -> float:
        return self.gsm.travel_limit

    def contains(self, x: float) -> bool:
        """Returns True if x is admissible: inside the open domain, or exactly 0."""
        lo, hi = self.domain
        return lo < x < hi or x == 0

    def check(self, x: float):
        """Raises OutOfDomain if x is not admissible."""
        if not self.contains(x):
            raise OutOfDomain(f"X={x!r} is outside of the track domain {self.domain}")

    def mirrored(self) -> 'Track':
        """Returns the track reflected about Y = 0."""
        return Track(_MirroredProfile(self.profile), self.gsm, -self.preload, self.domain,
                     self.trusted_margin)


class _MirroredProfile(Profile):
    def __init__(self, profile: Profile):
        self.profile = profile

    def value(self, x):
        return -self.profile.value(x)

    def slope(self, x):
        return -self.profile.slope(x)

    def product(self, x):
        return self.profile.product(x)

    def product_slope(self, x):
        return self.profile.product_slope(x)


def spring_force(track: Track, x: float) -> float:
    """Returns the spring force -K*Y(x) acting on the roller [N].
    Raises:
        OutOfDomain.
    """
    track.check(x)
    return -track.stiffness * track.profile.value(x)


def restoring_force(track: Track, x: float) -> float:
    """Returns the restoring force -K*Y(x)*Y'(x) acting on the mass [N].
    Raises:
        OutOfDomain.
    """
    track.check(x)
    return -track.stiffness * track.profile.product(x)


def potential_energy(track: Track, x: float) -> float:
    """Returns the stored spring energy (K/2)*(Y(x)^2 - preload^2), zero at X = 0 [J].
    Raises:
        OutOfDomain.
    """
    track.check(x)
    return 0.5 * track.stiffness * (track.profile.value(x) ** 2 - track.preload ** 2)


def effective_stiffness(track: Track, x: float) -> float:
    """Returns -dF/dX of the restoring force, K*(Y'^2 + Y*Y''), so a positive value stabilizes [N/m].
    Raises:
        OutOfDomain.
    """
    track.check(x)
    return track.stiffness * track.profile.product_slope(x)


def fit_track(samples, gsm: LinearGsm) -> Track:
    """Fits a natural cubic spline track through sampled points.
    Arguments:
        samples: sequence of (X, Y) pairs with strictly increasing X whose range contains 0.
        gsm: LinearGsm.
    Returns:
        A Track on the open sample range with preload Y(0).
    Raises:
        NonMonotoneX if X is not strictly increasing.
        TravelExceeded if any |Y| reaches the travel limit.
        OutOfDomain if the sample range does not contain X = 0.
    """
    points = np.asarray(samples, dtype=float).reshape(-1, 2)
    if len(points) < 2:
        raise InsufficientSamples('a track needs at least two samples')
    xs, ys = points[:, 0], points[:, 1]
    if np.any(np.diff(xs) <= 0):
        raise NonMonotoneX('track sample positions must be strictly increasing')
    if np.any(np.abs(ys) >= gsm.travel_limit):
        raise TravelExceeded(f"a track sample reaches the travel limit {gsm.travel_limit}")
    if not xs[0] <= 0 <= xs[-1]:
        raise OutOfDomain(f"track samples span [{xs[0]}, {xs[-1]}], which does not contain X=0")
    profile = SplineProfile(xs, ys)
    dense = np.linspace(xs[0], xs[-1], 8 * len(xs))
    if np.any(np.abs(profile.spline(dense)) >= gsm.travel_limit):
        raise TravelExceeded('the spline through the samples overshoots the travel limit')
    span = xs[-1] - xs[0]
    margin = min(config.SPLINE_END_KNOTS * float(np.max(np.diff(xs))), 0.25 * span)
    logger.debug("Fitted a spline track through %d samples on [%s, %s]", len(xs), xs[0], xs[-1])
    return Track(profile, gsm, profile.value(0.0), (float(xs[0]), float(xs[-1])), margin)


@dataclass(frozen=True)
class ResidualReport:
    """How well a track reproduces a target force.
    Attributes:
        sup: float, largest |-K*Y*Y' - F| over the sample nodes [N].
        rms: float, root mean square of the same [N].
        sup_relative: float, sup / (1 + max|F|).
        rms_relative: float, rms / (1 + max|F|).
        samples: int, number of nodes.
    """
    sup: float
    rms: float
    sup_relative: float
    rms_relative: float
    samples: int

    def passes(self, threshold: float) -> bool:
        return self.sup_relative <= threshold


def track_residual(track: Track, force: ForceSpec, n_samples: int = config.RESIDUAL_SAMPLES,
                   tolerance: float = config.BOUNDARY_TOLERANCE) -> ResidualReport:
    """Compares -K*Y*Y' with the target force at Chebyshev nodes of the shrunk domain.
    Where |Y| falls below the tolerance the product Y*Y' is taken as 0.
    Arguments:
        track: Track.
        force: ForceSpec, the target.
        n_samples: int, number of nodes (at least 3).
        tolerance: float, the domain is shrunk by max(tolerance, track.trusted_margin) at each end.
    Raises:
        InsufficientSamples if n_samples < 3.
        EmptyDomain if nothing is left after shrinking.
    """
    if n_samples < 3:
        raise InsufficientSamples(f"at least 3 residual samples are needed, got {n_samples}")
    lo, hi = track.domain
    shrink = max(tolerance, track.trusted_margin)
    lo, hi = lo + shrink, hi - shrink
    if not lo < hi:
        raise EmptyDomain(f"domain {track.domain} is empty after shrinking by {shrink}")
    residuals, forces = [], []
    for x in tools.chebyshev_nodes(lo, hi, n_samples):
        x = float(x)
        y = track.profile.value(x)
        product = 0.0 if abs(y) < tolerance else y * track.profile.slope(x)
        target = eval_force(force, x)
        residuals.append(abs(-track.stiffness * product - target))
        forces.append(abs(target))
    residuals = np.array(residuals)
    scale = 1.0 + max(forces)
    sup = float(residuals.max())
    rms = float(math.sqrt(np.mean(residuals ** 2)))
    return ResidualReport(sup, rms, sup / scale, rms / scale, n_samples)


def read_track_samples(path: str) -> np.ndarray:
    """Reads an X,Y track CSV into an (n, 2) array."""
    return tools.read_pairs(path, 'track samples')


def write_track_samples(path: str, xs, ys):
    """Writes an X,Y track CSV."""
    tools.write_table(path, {'X': np.asarray(xs, dtype=float), 'Y': np.asarray(ys, dtype=float)})
