"""
Target restoring forces F(X) and their running integral I(X) = integral of F from 0 to X.

A force is one of three variants:
    Polynomial: ascending coefficients, evaluated by Horner's rule and integrated exactly.
    Expression: a parsed arithmetic expression, integrated by adaptive Simpson quadrature.
    Sampled: a table of (X, F) points with a natural cubic or linear interpolant, integrated exactly.
"""

import bisect
import math
import logging
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from src import config
from src import expression
from src import tools
from src.errors import (ConfigError, InvalidParameters, NonFiniteForce, NonMonotoneX, OutOfTable,
                        ParseError, QuadratureFailure)

logger = logging.getLogger(__name__)

INTERPOLATIONS = ('cubic', 'linear')


def _horner(coefficients, x: float) -> float:
    result = 0.0
    for coefficient in reversed(coefficients):
        result = result * x + coefficient
    return result


@dataclass(frozen=True)
class Polynomial:
    """A polynomial force.
    Attributes:
        coefficients: tuple of float, ascending degree; coefficient k is in N/m^k.
    """
    coefficients: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise InvalidParameters('a polynomial force needs at least one coefficient')
        if not all(math.isfinite(c) for c in self.coefficients):
            raise InvalidParameters('polynomial coefficients must be finite')

    @cached_property
    def antiderivative(self) -> Tuple[float, ...]:
        return (0.0,) + tuple(c / (k + 1) for k, c in enumerate(self.coefficients))

    @cached_property
    def derivative(self) -> Tuple[float, ...]:
        return tuple(k * c for k, c in enumerate(self.coefficients))[1:] or (0.0,)

    @property
    def text(self) -> str:
        return expression.format_polynomial(self.coefficients)

    def evaluate(self, x: float) -> float:
        return _horner(self.coefficients, x)

    def slope(self, x: float) -> float:
        return _horner(self.derivative, x)

    def exact_integral(self, x: float) -> float:
        return _horner(self.antiderivative, x)

    def support(self) -> Tuple[float, float]:
        return -math.inf, math.inf


@dataclass(frozen=True)
class Expression:
    """A force given by expression text over X.
    Attributes:
        text: str, the source text.
        ast: the parsed syntax tree.
    """
    text: str
    ast: expression.Node = field(compare=False)

    @cached_property
    def function(self):
        return expression.compile_node(self.ast)

    def evaluate(self, x: float) -> float:
        try:
            value = self.function(x)
        except (ValueError, ZeroDivisionError, OverflowError) as error:
            raise NonFiniteForce(f"'{self.text}' cannot be evaluated at X={x!r}") from error
        if not math.isfinite(value):
            raise NonFiniteForce(f"'{self.text}' is not finite at X={x!r}")
        return float(value)

    def slope(self, x: float) -> float:
        step = config.DIFF_STEP * max(1.0, abs(x))
        return (self.evaluate(x + step) - self.evaluate(x - step)) / (2 * step)

    def support(self) -> Tuple[float, float]:
        return -math.inf, math.inf


@dataclass(frozen=True)
class Sampled:
    """A tabulated force.
    Attributes:
        points: tuple of (X, F) pairs with strictly increasing X.
        interpolation: 'cubic' (natural spline, the default) or 'linear'.
    """
    points: Tuple[Tuple[float, float], ...]
    interpolation: str = 'cubic'

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple((float(x), float(f)) for x, f in self.points))
        if len(self.points) < 2:
            raise InvalidParameters('a sampled force needs at least two points')
        if self.interpolation not in INTERPOLATIONS:
            raise InvalidParameters(f"interpolation must be one of {INTERPOLATIONS}, "
                                    f"got {self.interpolation!r}")
        xs = [x for x, _ in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise NonMonotoneX('sampled force positions must be strictly increasing')
        if not all(math.isfinite(x) and math.isfinite(f) for x, f in self.points):
            raise InvalidParameters('sampled force values must be finite')

    @cached_property
    def interpolant(self):
        xs = np.array([x for x, _ in self.points])
        fs = np.array([f for _, f in self.points])
        if self.interpolation == 'cubic':
            return CubicSpline(xs, fs, bc_type='natural')
        return make_interp_spline(xs, fs, k=1)

    @cached_property
    def _derivative(self):
        return self.interpolant.derivative()

    def _check(self, x: float):
        lo, hi = self.support()
        if not lo <= x <= hi:
            raise OutOfTable(f"X={x!r} lies outside of the force table [{lo!r}, {hi!r}]")

    def evaluate(self, x: float) -> float:
        self._check(x)
        return float(self.interpolant(x))

    def slope(self, x: float) -> float:
        self._check(x)
        return float(self._derivative(x))

    def exact_integral(self, x: float) -> float:
        self._check(x)
        self._check(0.0)
        if x == 0:
            return 0.0
        return float(self.interpolant.integrate(0.0, x))

    def support(self) -> Tuple[float, float]:
        return self.points[0][0], self.points[-1][0]


ForceSpec = Union[Polynomial, Expression, Sampled]


def parse_force(text: str, normalize: bool = True) -> ForceSpec:
    """Parses force expression text.
    Arguments:
        text: str, an arithmetic expression over X.
        normalize: bool, if True pure polynomials in X are returned as the Polynomial variant.
    Returns:
        A Polynomial or Expression.
    Raises:
        ParseError, NonIntegerExponent.
    """
    ast = expression.parse(text)
    if normalize:
        coefficients = expression.to_polynomial(ast)
        if coefficients is not None:
            if not np.all(np.isfinite(coefficients)):
                raise ParseError(f"'{text}' folds to non-finite polynomial coefficients", 0)
            return Polynomial(tuple(coefficients))
    return Expression(text, ast)


def eval_force(spec: ForceSpec, x: float) -> float:
    """Returns F(x) in N.
    Raises:
        OutOfTable for Sampled queries outside of the table.
        NonFiniteForce if an expression cannot be evaluated at x.
    """
    return spec.evaluate(x)


def force_slope(spec: ForceSpec, x: float) -> float:
    """Returns dF/dX at x in N/m. Exact for Polynomial and Sampled, a central difference for Expression."""
    return spec.slope(x)


def force_support(spec: ForceSpec) -> Tuple[float, float]:
    """Returns the closed range of X on which the force can be evaluated."""
    return spec.support()


def is_odd(spec: ForceSpec) -> bool:
    """Returns True for polynomials with only odd powers. Other variants are never reported odd."""
    if isinstance(spec, Polynomial):
        return all(c == 0 for c in spec.coefficients[0::2])
    return False


def check_finite(spec: ForceSpec, lo: float, hi: float, samples: int = config.CONTINUITY_SAMPLES):
    """Spot-checks that the force is finite at evenly spaced points over [lo, hi].
    Raises:
        NonFiniteForce at the first failing point.
    """
    for x in np.linspace(lo, hi, samples):
        value = spec.evaluate(float(x))
        if not math.isfinite(value):
            raise NonFiniteForce(f"force is not finite at X={float(x)!r}")


def adaptive_simpson(func, a: float, b: float, tolerance: float,
                     max_depth: int = config.SIMPSON_MAX_DEPTH) -> float:
    """Integrates func over [a, b] by adaptive Simpson quadrature with Richardson correction.
    Arguments:
        func: callable taking and returning a float.
        a, b: float, integration limits (b < a gives the negated integral).
        tolerance: float, absolute error target.
        max_depth: int, recursion limit.
    Raises:
        QuadratureFailure if a panel still misses its share of the tolerance at max_depth.
    """
    if a == b:
        return 0.0
    fa, fb = func(a), func(b)
    m = 0.5 * (a + b)
    fm = func(m)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _simpson(func, a, b, fa, fm, fb, whole, tolerance, 0, max_depth)


def _simpson(func, a, b, fa, fm, fb, whole, tolerance, depth, max_depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = func(lm), func(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    delta = left + right - whole
    # below this the difference is rounding noise
    floor = 64 * np.finfo(float).eps * abs(b - a) * (abs(fa) + 4 * abs(fm) + abs(fb)) / 6
    if abs(delta) <= 15 * tolerance or abs(delta) <= floor:
        return left + right + delta / 15
    if depth >= max_depth:
        raise QuadratureFailure(f"adaptive Simpson exceeded depth {max_depth} on [{a!r}, {b!r}]")
    return (_simpson(func, a, m, fa, flm, fm, left, 0.5 * tolerance, depth + 1, max_depth)
            + _simpson(func, m, b, fm, frm, fb, right, 0.5 * tolerance, depth + 1, max_depth))


class IntegralCache:
    """The running integral I(X) of a force, memoized for monotone sweeps away from X = 0.

    Polynomial and Sampled forces are integrated exactly. Expressions are integrated from the nearest
    checkpoint between 0 and X, and every result is stored as a new checkpoint. Lookups and appends are
    serialized by a lock; two threads computing the same X may duplicate work but cannot corrupt the
    checkpoint lists.
    Attributes:
        spec: the ForceSpec being integrated.
        tolerance: float, absolute quadrature tolerance over a span of length 'scale' [N*m].
        scale: float, the span over which the tolerance budget is shared [m].
    """
    def __init__(self, spec: ForceSpec, tolerance: float = config.QUAD_TOLERANCE, scale: float = 1.0):
        if not tolerance > 0:
            raise InvalidParameters(f"quadrature tolerance must be positive, got {tolerance}")
        self.spec = spec
        self.tolerance = tolerance
        self.scale = scale
        self._lock = threading.Lock()
        # per side: sorted |X| checkpoints and the matching integrals
        self._memo = {1: ([0.0], [0.0]), -1: ([0.0], [0.0])}

    def __len__(self):
        with self._lock:
            return len(self._memo[1][0]) + len(self._memo[-1][0]) - 2

    def checkpoints(self):
        """Returns all memoized (X, I(X)) pairs ordered by X."""
        with self._lock:
            negative = [(-d, v) for d, v in zip(*self._memo[-1]) if d > 0]
            positive = list(zip(*self._memo[1]))
        return sorted(negative) + positive

    def __call__(self, x: float) -> float:
        return self.integral(x)

    def integral(self, x: float) -> float:
        """Returns I(x) = integral of F over [0, x] in N*m. I(0) is exactly 0."""
        if x == 0:
            return 0.0
        if not isinstance(self.spec, Expression):
            return self.spec.exact_integral(x)
        side = 1 if x > 0 else -1
        distance = abs(x)
        with self._lock:
            keys, values = self._memo[side]
            index = bisect.bisect_right(keys, distance) - 1
            start, base = side * keys[index], values[index]
        if start == x:
            return base
        budget = self.tolerance * abs(x - start) / self.scale
        value = base + adaptive_simpson(self.spec.evaluate, start, x, budget)
        with self._lock:
            keys, values = self._memo[side]
            index = bisect.bisect_left(keys, distance)
            if index == len(keys) or keys[index] != distance:
                keys.insert(index, distance)
                values.insert(index, value)
        return value


def integral(cache: IntegralCache, x: float) -> float:
    """Returns the work integral of F from 0 to x in N*m.
    Raises:
        OutOfTable for Sampled queries outside of the table.
        QuadratureFailure if adaptive quadrature does not converge.
    """
    return cache.integral(x)


def load_force_table(path: str, interpolation: str = 'cubic') -> Sampled:
    """Loads a sampled force from a two column CSV (X, F). A header row is optional.
    Raises:
        ConfigError if the file cannot be read or does not hold two numeric columns.
    """
    values = tools.read_pairs(path, 'force table')
    return Sampled(tuple(map(tuple, values)), interpolation)


def force_to_record(spec: ForceSpec) -> dict:
    """Describes a force as plain data for reports."""
    if isinstance(spec, Polynomial):
        return {'kind': 'polynomial', 'text': spec.text, 'coefficients': list(spec.coefficients)}
    if isinstance(spec, Expression):
        return {'kind': 'expression', 'text': spec.text}
    return {'kind': 'sampled', 'interpolation': spec.interpolation,
            'points': [list(point) for point in spec.points]}


def force_from_record(record: dict) -> ForceSpec:
    """Rebuilds a force from force_to_record output."""
    kind = record.get('kind')
    if kind == 'polynomial':
        return Polynomial(tuple(record['coefficients']))
    if kind == 'expression':
        return parse_force(record['text'], normalize=False)
    if kind == 'sampled':
        return Sampled(tuple(tuple(p) for p in record['points']), record['interpolation'])
    raise ConfigError(f"Unknown force kind {kind!r}")
