"""
Fixed-step, conservative time integration of M*X'' = F(X).

simulate_track integrates the roller-track model, whose force is the track restoring force -K*Y*Y';
simulate_reference integrates the target system directly. Both use the same stepping so their
trajectories can be compared sample by sample.
"""

import math
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from src import config
from src import tools
from src.force import ForceSpec, IntegralCache, eval_force
from src.track import Track, potential_energy, restoring_force
from src.errors import (InsufficientSamples, InvalidInitialState, InvalidParameters, NonFiniteForce, NoOverlap,
                        OutOfDomain, QuadratureFailure)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.
    Attributes:
        mass: float, M [kg].
        dt: float, time step [s].
        t_end: float, final time [s].
        method: str, 'verlet' (velocity Verlet, the default) or 'rk4'.
        lock_guard: float or None, distance eps_L below the travel limit at which the roller counts as
            locked [m]. None means 1e-6*L of the simulated track.
        record_stride: int, keep every n-th step.
    """
    mass: float
    dt: float
    t_end: float
    method: str = config.DEFAULT_METHOD
    lock_guard: Optional[float] = None
    record_stride: int = 1

    def __post_init__(self):
        for name in ('mass', 'dt', 't_end'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameters(f"{name} must be positive, got {value}")
        if self.method not in config.METHODS:
            raise InvalidParameters(f"method must be one of {config.METHODS}, got {self.method!r}")
        if self.lock_guard is not None and not self.lock_guard > 0:
            raise InvalidParameters(f"lock_guard must be positive, got {self.lock_guard}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise InvalidParameters(f"record_stride must be a positive integer, got {self.record_stride}")

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))


class TerminationKind(Enum):
    COMPLETED = 'Completed'
    LOCKED = 'Locked'
    DOMAIN_EXIT = 'DomainExit'
    NON_FINITE = 'NonFinite'


@dataclass(frozen=True)
class Termination:
    """Why a simulation stopped. t and x are the last admissible state (None when Completed)."""
    kind: TerminationKind
    t: Optional[float] = None
    x: Optional[float] = None

    def __str__(self):
        if self.kind is TerminationKind.COMPLETED:
            return self.kind.value
        if self.x is None:
            return f"{self.kind.value}(t={self.t!r})"
        return f"{self.kind.value}(t={self.t!r}, X={self.x!r})"


@dataclass
class SimResult:
    """A recorded trajectory.
    Attributes:
        samples: list of (t, X, V, E) tuples with strictly increasing t.
        termination: Termination.
        steps: int, number of completed integration steps.
    """
    samples: List[Tuple[float, float, float, float]] = field(default_factory=list)
    termination: Termination = Termination(TerminationKind.COMPLETED)
    steps: int = 0

    def _column(self, index: int) -> np.ndarray:
        return np.array([sample[index] for sample in self.samples])

    @property
    def times(self) -> np.ndarray:
        return self._column(0)

    @property
    def positions(self) -> np.ndarray:
        return self._column(1)

    @property
    def velocities(self) -> np.ndarray:
        return self._column(2)

    @property
    def energies(self) -> np.ndarray:
        return self._column(3)


class _Stop(Exception):
    def __init__(self, kind: TerminationKind):
        self.kind = kind


def _integrate(accel, admissible, energy, sim: SimConfig, x0: float, v0: float) -> SimResult:
    """Runs the fixed-step loop.
    Arguments:
        accel: callable X -> acceleration. May raise _Stop.
        admissible: callable X -> TerminationKind or None, checked after every full step.
        energy: callable (X, V) -> total energy.
    """
    dt = sim.dt
    result = SimResult()
    x, v = x0, v0
    try:
        a = accel(x)
    except _Stop as stop:
        raise InvalidInitialState(f"no acceleration at X0={x0!r} ({stop.kind.value})") from stop
    if not math.isfinite(a):
        raise InvalidInitialState(f"acceleration at X0={x0!r} is not finite")
    result.samples.append((0.0, x, v, energy(x, v)))
    last_recorded = 0
    n = 0
    termination = Termination(TerminationKind.COMPLETED)
    for n in range(1, sim.steps + 1):
        try:
            if sim.method == 'verlet':
                x_new = x + v * dt + 0.5 * a * dt * dt
                if not math.isfinite(x_new):
                    raise _Stop(TerminationKind.NON_FINITE)
                kind = admissible(x_new)
                if kind is not None:
                    raise _Stop(kind)
                a_new = accel(x_new)
                v_new = v + 0.5 * (a + a_new) * dt
            else:
                k1x, k1v = v, a
                k2x, k2v = v + 0.5 * dt * k1v, accel(x + 0.5 * dt * k1x)
                k3x, k3v = v + 0.5 * dt * k2v, accel(x + 0.5 * dt * k2x)
                k4x, k4v = v + dt * k3v, accel(x + dt * k3x)
                x_new = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
                v_new = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
                if not math.isfinite(x_new):
                    raise _Stop(TerminationKind.NON_FINITE)
                kind = admissible(x_new)
                if kind is not None:
                    raise _Stop(kind)
                a_new = accel(x_new)
            if not (math.isfinite(v_new) and math.isfinite(a_new)):
                raise _Stop(TerminationKind.NON_FINITE)
        except _Stop as stop:
            n -= 1
            if stop.kind is TerminationKind.NON_FINITE:
                termination = Termination(stop.kind, (n + 1) * dt)
            else:
                termination = Termination(stop.kind, n * dt, x)
            break
        x, v, a = x_new, v_new, a_new
        if n % sim.record_stride == 0:
            result.samples.append((n * dt, x, v, energy(x, v)))
            last_recorded = n
    if last_recorded != n:
        result.samples.append((n * dt, x, v, energy(x, v)))
    result.steps = n
    result.termination = termination
    logger.info("Simulation stopped after %d steps: %s", n, termination)
    return result


def simulate_track(track: Track, sim: SimConfig, x0: float, v0: float) -> SimResult:
    """Integrates M*X'' = -K*Y(X)*Y'(X) on a track.
    Stops at t_end, when |Y| reaches L - eps_L (Locked), when X leaves the track domain (DomainExit), or
    on a non-finite state (NonFinite). The terminal sample is the last admissible state.
    Raises:
        InvalidInitialState if x0 is outside of the domain or inside the lock guard.
    """
    guard = sim.lock_guard if sim.lock_guard is not None else config.LOCK_GUARD_FRACTION * track.travel_limit
    limit = track.travel_limit - guard

    def admissible(x):
        if not track.contains(x):
            return TerminationKind.DOMAIN_EXIT
        if abs(track.profile.value(x)) >= limit:
            return TerminationKind.LOCKED
        return None

    def accel(x):
        try:
            return restoring_force(track, x) / sim.mass
        except OutOfDomain as error:
            raise _Stop(TerminationKind.DOMAIN_EXIT) from error
        except NonFiniteForce as error:
            raise _Stop(TerminationKind.NON_FINITE) from error

    def energy(x, v):
        return 0.5 * sim.mass * v * v + potential_energy(track, x)

    if not (math.isfinite(x0) and math.isfinite(v0)):
        raise InvalidInitialState('initial state must be finite')
    kind = admissible(x0)
    if kind is not None:
        raise InvalidInitialState(f"X0={x0!r} is not admissible on the track ({kind.value})")
    return _integrate(accel, admissible, energy, sim, x0, v0)


def simulate_reference(force: ForceSpec, sim: SimConfig, x0: float, v0: float,
                       cache: IntegralCache = None) -> SimResult:
    """Integrates the target system M*X'' = F(X) with the same stepping as simulate_track.
    The energy is 0.5*M*V^2 - I(X). A state where F or I(X) cannot be evaluated ends the run (NonFinite).
    Raises:
        InvalidInitialState if the initial state is not finite or F or I(X) cannot be evaluated there.
        OutOfTable propagated for sampled forces.
    """
    cache = cache if cache is not None else IntegralCache(force)

    def admissible(x):
        try:
            work = cache.integral(x)
        except (NonFiniteForce, QuadratureFailure):
            return TerminationKind.NON_FINITE
        return None if math.isfinite(work) else TerminationKind.NON_FINITE

    def accel(x):
        try:
            return eval_force(force, x) / sim.mass
        except NonFiniteForce as error:
            raise _Stop(TerminationKind.NON_FINITE) from error

    def energy(x, v):
        return 0.5 * sim.mass * v * v - cache.integral(x)

    if not (math.isfinite(x0) and math.isfinite(v0)):
        raise InvalidInitialState('initial state must be finite')
    if admissible(x0) is not None:
        raise InvalidInitialState(f"the work integral cannot be evaluated at X0={x0!r}")
    return _integrate(accel, admissible, energy, sim, x0, v0)


def energy_drift(result: SimResult) -> float:
    """Returns (max E - min E) / |E(0)|, the relative spread of the recorded energy.
    Raises:
        InsufficientSamples with fewer than two samples.
    """
    if len(result.samples) < 2:
        raise InsufficientSamples('energy drift needs at least two samples')
    energies = result.energies
    return float((energies.max() - energies.min()) / (abs(energies[0]) + config.ENERGY_FLOOR))


def compare_trajectories(a: SimResult, b: SimResult) -> float:
    """Returns sup |X_a - X_b| over the common time span, interpolating linearly between samples.
    Raises:
        NoOverlap if the time spans do not intersect.
    """
    if not a.samples or not b.samples:
        raise NoOverlap('an empty trajectory has no time span')
    ta, xa, tb, xb = a.times, a.positions, b.times, b.positions
    start, end = max(ta[0], tb[0]), min(ta[-1], tb[-1])
    if end < start:
        raise NoOverlap(f"trajectories span [{ta[0]}, {ta[-1]}] and [{tb[0]}, {tb[-1]}]")
    in_a = (ta >= start) & (ta <= end)
    in_b = (tb >= start) & (tb <= end)
    differences = [np.abs(xa[in_a] - np.interp(ta[in_a], tb, xb)),
                   np.abs(xb[in_b] - np.interp(tb[in_b], ta, xa))]
    return float(max(d.max() for d in differences if d.size))


def run_reversibility(track: Track, sim: SimConfig, x0: float, v0: float,
                      steps: Optional[int] = None) -> Tuple[float, float]:
    """Integrates forward, reverses the velocity and integrates back for the same number of steps.
    Arguments:
        steps: int or None, number of forward steps; None runs to sim.t_end.
    Returns:
        The (X, V) reached; for a time-reversible method this is (x0, -v0) up to rounding.
    """
    if steps is not None:
        sim = replace(sim, t_end=steps * sim.dt)
    forward = simulate_track(track, sim, x0, v0)
    _, x, v, _ = forward.samples[-1]
    backward = simulate_track(track, replace(sim, t_end=forward.steps * sim.dt), x, -v)
    _, x_back, v_back, _ = backward.samples[-1]
    return x_back, v_back


def write_trajectory(path: str, result: SimResult):
    """Writes the t,X,V,E trajectory CSV."""
    tools.write_table(path, {'t': result.times, 'X': result.positions, 'V': result.velocities,
                             'E': result.energies})
