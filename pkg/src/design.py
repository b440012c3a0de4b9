"""
Inverse design: every track profile that realizes a target restoring force.

For -K*Y*dY/dX = F(X) with Y(0) = delta the solutions are
    Y(X) = s * sqrt(delta^2 - (2/K) * I(X)),   s = +1 or -1,   I(X) = integral of F over [0, X],
admissible while delta^2 - L^2 < (2/K)*I(X) < delta^2. Each combination of stiffness sign, preload class
(nonzero or zero) and branch sign s is one candidate; a candidate whose admissible set around X = 0 is
empty does not exist.
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import List, Optional, Tuple

from src import config
from src import tools
from src.force import (Expression, ForceSpec, IntegralCache, Polynomial, check_finite, eval_force,
                       force_slope, force_support)
from src.gsm import LinearGsm
from src.track import Profile, ResidualReport, Track, track_residual
from src.errors import (InvalidParameters, OutOfDomain, RootSingularity, SearchWindowEmpty,
                        ZeroStiffness)

logger = logging.getLogger(__name__)


class BoundaryKind(Enum):
    """Why a branch domain ends where it does."""
    TRAVEL_LIMIT = 'TravelLimit'
    ROOT_TOUCH = 'RootTouch'
    SEARCH_TRUNCATED = 'SearchTruncated'
    ORIGIN = 'Origin'


@dataclass(frozen=True)
class DesignProblem:
    """One track design problem.
    Attributes:
        force: ForceSpec, the target restoring force.
        stiffness: float, K_GSM [N/m], nonzero.
        preload: float, delta [m], |delta| < travel_limit.
        travel_limit: float, L [m].
        search_window: float or None, half width X_max of the domain search [m]; None means 10*L.
        boundary_tolerance: float, bisection tolerance on domain ends [m].
        quad_tolerance: float, absolute quadrature tolerance [N*m].
        exact_params: bool, if True only the given stiffness sign and preload class are designed;
            otherwise both stiffness signs and both preload classes are.
    """
    force: ForceSpec
    stiffness: float
    preload: float
    travel_limit: float
    search_window: Optional[float] = None
    boundary_tolerance: float = config.BOUNDARY_TOLERANCE
    quad_tolerance: float = config.QUAD_TOLERANCE
    exact_params: bool = False

    def __post_init__(self):
        if self.stiffness == 0:
            raise ZeroStiffness('track design divides by the spring stiffness, which is zero')
        if not self.travel_limit > 0:
            raise InvalidParameters(f"travel_limit must be positive, got {self.travel_limit}")
        if not abs(self.preload) < self.travel_limit:
            raise InvalidParameters(f"|preload|={abs(self.preload)} must be below the travel limit "
                                    f"{self.travel_limit}")
        if self.search_window is None:
            object.__setattr__(self, 'search_window', config.SEARCH_WINDOW_FACTOR * self.travel_limit)
        if not self.search_window > 0:
            raise InvalidParameters(f"search_window must be positive, got {self.search_window}")
        if not self.boundary_tolerance > 0:
            raise InvalidParameters('boundary_tolerance must be positive')

    @cached_property
    def cache(self) -> IntegralCache:
        return IntegralCache(self.force, self.quad_tolerance, self.search_window)

    def fork_cache(self) -> IntegralCache:
        """Returns a fresh, unshared integral cache with the problem tolerances."""
        return IntegralCache(self.force, self.quad_tolerance, self.search_window)


@dataclass(frozen=True)
class TrackBranch:
    """One signed square-root solution with its maximal admissible interval around X = 0.
    Attributes:
        sign: int, +1 or -1.
        stiffness: float, signed K_GSM [N/m].
        preload: float, |delta| for the nonzero class, 0 for the zero class [m].
        travel_limit: float, L [m].
        domain: (lo, hi), the open admissible interval.
        lower_kind, upper_kind: BoundaryKind of each end.
        label: str, one of Y11, Y21, Y12, Y22, Y13, Y23, Y14, Y24.
        force: ForceSpec the branch was designed for.
        cache: IntegralCache of that force.
        boundary_tolerance: float [m].
    """
    sign: int
    stiffness: float
    preload: float
    travel_limit: float
    domain: Tuple[float, float]
    lower_kind: BoundaryKind
    upper_kind: BoundaryKind
    label: str
    force: ForceSpec = field(compare=False, repr=False)
    cache: IntegralCache = field(compare=False, repr=False)
    boundary_tolerance: float = config.BOUNDARY_TOLERANCE

    @property
    def stiffness_class(self) -> str:
        return 'positive' if self.stiffness > 0 else 'negative'

    @property
    def preload_class(self) -> str:
        return 'zero' if self.preload == 0 else 'nonzero'

    @property
    def signed_preload(self) -> float:
        return self.sign * self.preload if self.preload else 0.0

    @property
    def scsm_equivalent(self) -> bool:
        """True for the positive-spring, preloaded configurations a classic cam-spring mechanism can build."""
        return self.stiffness > 0 and self.preload != 0

    def contains(self, x: float) -> bool:
        lo, hi = self.domain
        return lo < x < hi or x == 0

    def radicand(self, x: float) -> float:
        return self.preload ** 2 - 2 * self.cache.integral(x) / self.stiffness

    def mirror(self) -> 'TrackBranch':
        label = config.BRANCH_LABELS[(tools.sign(self.stiffness), self.preload == 0, -self.sign)]
        return TrackBranch(-self.sign, self.stiffness, self.preload, self.travel_limit, self.domain,
                           self.lower_kind, self.upper_kind, label, self.force, self.cache,
                           self.boundary_tolerance)


@dataclass
class BranchSet:
    """All branches that exist for a design problem, in report order.
    Attributes:
        problem: DesignProblem.
        branches: list of TrackBranch.
        existence_note: str, one line per candidate that was ruled out, plus enumeration remarks.
    """
    problem: DesignProblem
    branches: List[TrackBranch]
    existence_note: str = ''

    def __len__(self):
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    def __getitem__(self, label: str) -> TrackBranch:
        for branch in self.branches:
            if branch.label == label:
                return branch
        raise KeyError(f"No branch labelled '{label}'; available: {', '.join(self.labels())}")

    def labels(self) -> List[str]:
        return [branch.label for branch in self.branches]


def _bisect(g, inside: float, outside: float, admissible, tolerance: float) -> Tuple[float, float]:
    """Shrinks [inside, outside] around the point where 'admissible(g(x))' stops holding.
    Returns the final (inside, outside) pair; inside always satisfies the predicate."""
    while abs(outside - inside) > tolerance:
        middle = 0.5 * (inside + outside)
        if admissible(g(middle)):
            inside = middle
        else:
            outside = middle
    return inside, outside


def _search_side(problem: DesignProblem, cache: IntegralCache, stiffness: float, preload: float,
                 direction: int):
    """Marches from X = 0 towards direction*X_max and brackets the first violation.
    Returns:
        (end, kind), or None when a zero-preload candidate is inadmissible right next to X = 0.
    """
    lower_bound = preload ** 2 - problem.travel_limit ** 2
    upper_bound = preload ** 2

    def g(x):
        return 2 * cache.integral(x) / stiffness

    support = force_support(problem.force)
    reach = min(problem.search_window, support[1] if direction > 0 else -support[0])
    step = problem.search_window / config.MARCH_DIVISIONS
    if reach <= 0:
        return (0.0, BoundaryKind.SEARCH_TRUNCATED) if preload else None
    previous = 0.0
    k = 0
    while abs(previous) < reach:
        k += 1
        x = direction * min(k * step, reach)
        value = g(x)
        if value >= upper_bound:
            if previous == 0 and preload == 0:
                return None
            inside, _ = _bisect(g, previous, x, lambda v: v < upper_bound, problem.boundary_tolerance)
            return inside, BoundaryKind.ROOT_TOUCH
        if value <= lower_bound:
            inside, _ = _bisect(g, previous, x, lambda v: v > lower_bound, problem.boundary_tolerance)
            return inside, BoundaryKind.TRAVEL_LIMIT
        previous = x
    logger.debug("Domain search for K=%s, delta=%s reached %s without a violation",
                 stiffness, preload, direction * reach)
    return direction * reach, BoundaryKind.SEARCH_TRUNCATED


def _describe(stiffness: float, preload: float) -> str:
    return f"K{'>' if stiffness > 0 else '<'}0, delta{'=0' if preload == 0 else '!=0'}"


def _design_pair(problem: DesignProblem, cache: IntegralCache, stiffness: float, preload: float):
    """Finds the domain shared by the +/- branches of one (stiffness, preload class) candidate.
    Returns:
        (branches, note): two mirror branches and an empty note, or no branches and the reason.
    """
    upper = _search_side(problem, cache, stiffness, preload, 1)
    lower = _search_side(problem, cache, stiffness, preload, -1)
    zero = preload == 0
    labels = [config.BRANCH_LABELS[(tools.sign(stiffness), zero, s)] for s in (1, -1)]
    if upper is None and lower is None:
        condition = '-L^2 < (2/K)*I(X) < 0' if zero else 'delta^2-L^2 < (2/K)*I(X) < delta^2'
        note = (f"{'/'.join(labels)} ({_describe(stiffness, preload)}): {condition} fails on both sides "
                f"of X=0")
        return [], note
    hi, upper_kind = upper if upper is not None else (0.0, BoundaryKind.ORIGIN)
    lo, lower_kind = lower if lower is not None else (0.0, BoundaryKind.ORIGIN)
    branches = [TrackBranch(s, stiffness, preload, problem.travel_limit, (lo, hi), lower_kind, upper_kind,
                            label, problem.force, cache, problem.boundary_tolerance)
                for s, label in zip((1, -1), labels)]
    return branches, ''


def design_branches(problem: DesignProblem) -> BranchSet:
    """Enumerates every existing branch of a design problem.

    Unless problem.exact_params is set, both stiffness signs (+|K| and -|K|) are designed with both
    preload classes (|delta| and 0). When delta = 0 is requested, the nonzero class uses
    |delta| = 0.5*L. Each domain is found by marching out from X = 0 in steps of X_max/1024 and bisecting
    the first violation down to the boundary tolerance.
    Arguments:
        problem: DesignProblem.
    Returns:
        BranchSet with branches in the order Y11, Y21, Y12, Y22, Y13, Y23, Y14, Y24 (present subset).
    Raises:
        SearchWindowEmpty if X_max is too small to hold a march step.
        QuadratureFailure, NonFiniteForce, OutOfTable propagated from force evaluation.
    """
    step = problem.search_window / config.MARCH_DIVISIONS
    if not step > 0 or problem.search_window <= problem.boundary_tolerance:
        raise SearchWindowEmpty(f"search window {problem.search_window} holds no march step")
    lo, hi = force_support(problem.force)
    if not isinstance(problem.force, Polynomial):
        check_finite(problem.force, max(lo, -problem.search_window), min(hi, problem.search_window))

    notes = []
    if problem.exact_params:
        stiffnesses = [problem.stiffness]
        preloads = [abs(problem.preload)]
    else:
        stiffnesses = [abs(problem.stiffness), -abs(problem.stiffness)]
        magnitude = abs(problem.preload)
        if magnitude == 0:
            magnitude = config.FALLBACK_PRELOAD_FRACTION * problem.travel_limit
            notes.append(f"delta=0 was requested; the delta!=0 configurations use |delta|={magnitude!r}")
        preloads = [magnitude, 0.0]
    # expression integrals are memoized per candidate
    memoized = isinstance(problem.force, Expression)
    candidates = [(problem.fork_cache() if memoized else problem.cache, k, d)
                  for d in preloads for k in stiffnesses]
    logger.debug("Designing %d candidates for a %s force", len(candidates), type(problem.force).__name__)

    workers = min(tools.thread_count(), len(candidates))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda c: _design_pair(problem, *c), candidates))
    else:
        results = [_design_pair(problem, *c) for c in candidates]

    branches = []
    for pair, note in results:
        branches.extend(pair)
        if note:
            notes.append(note)
    branches.sort(key=lambda b: config.BRANCH_ORDER.index(b.label))
    logger.info("Designed %d branches (%s)", len(branches), ', '.join(b.label for b in branches))
    return BranchSet(problem, branches, '\n'.join(notes))


def eval_branch(branch: TrackBranch, x: float) -> float:
    """Returns Y(x) = sign*sqrt(delta^2 - (2/K)*I(x)) [m].
    Raises:
        OutOfDomain if x is outside of the branch domain.
    """
    if not branch.contains(x):
        raise OutOfDomain(f"X={x!r} is outside of {branch.label} domain {branch.domain}")
    return branch.sign * math.sqrt(max(branch.radicand(x), 0.0))


def branch_derivative(branch: TrackBranch, x: float) -> float:
    """Returns dY/dX = -F(x)/(K*Y(x)).
    Raises:
        OutOfDomain if x is outside of the branch domain.
        RootSingularity if |Y(x)| is below the boundary tolerance.
    """
    y = eval_branch(branch, x)
    if abs(y) < branch.boundary_tolerance:
        raise RootSingularity(f"{branch.label} touches Y=0 at X={x!r}; its slope is unbounded there")
    return -eval_force(branch.force, x) / (branch.stiffness * y)


class BranchProfile(Profile):
    """Exposes a closed-form branch as a track profile. Y*Y' is taken as -F/K, which stays finite
    where Y vanishes."""
    def __init__(self, branch: TrackBranch):
        self.branch = branch

    def value(self, x):
        return eval_branch(self.branch, x)

    def slope(self, x):
        return branch_derivative(self.branch, x)

    def product(self, x):
        return -eval_force(self.branch.force, x) / self.branch.stiffness

    def product_slope(self, x):
        return -force_slope(self.branch.force, x) / self.branch.stiffness


def to_track(branch: TrackBranch) -> Track:
    """Wraps a branch as a Track for the forward model and the simulator."""
    return Track(BranchProfile(branch), LinearGsm(branch.stiffness, branch.travel_limit),
                 branch.signed_preload, branch.domain)


def reconstruction_residual(branch: TrackBranch, n_samples: int = config.RESIDUAL_SAMPLES) -> ResidualReport:
    """Checks -K*Y*Y' against F at Chebyshev nodes of the domain shrunk by the boundary tolerance.
    Raises:
        InsufficientSamples if n_samples < 3.
        EmptyDomain if the shrunk domain is empty.
    """
    return track_residual(to_track(branch), branch.force, n_samples, branch.boundary_tolerance)


def branch_from_record(record: dict, force: ForceSpec, cache: IntegralCache,
                       boundary_tolerance: float = config.BOUNDARY_TOLERANCE) -> TrackBranch:
    """Rebuilds a branch from its report record."""
    return TrackBranch(int(record['sign']), float(record['stiffness']), float(record['preload']),
                       float(record['travel_limit']), (float(record['domain'][0]), float(record['domain'][1])),
                       BoundaryKind(record['boundary_kinds'][0]), BoundaryKind(record['boundary_kinds'][1]),
                       record['label'], force, cache, boundary_tolerance)

