"""Forward orbits, the trapping interval, entry times, the backward
recurrence for the left-identity regime, and the two-species simplex
operator that the interval map is the reduction of."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateParameterError, DomainError, SimplexViolationError
from .map_core import MapParams, check_domain, eval_f, eval_f_vec, iterate_n

SIMPLEX_TOL = 1e-12
DEFAULT_ENTRY_CAP = 1_000_000


@dataclass(frozen=True)
class InvariantInterval:
    """Half-open trapping interval (lo, hi]: lo excluded, hi included."""

    lo: float
    hi: float

    def __contains__(self, x: float) -> bool:
        return self.lo < x <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


def invariant_interval(p: MapParams) -> InvariantInterval:
    """The interval (1/2 - b/4, 1/2 + a/4] that the map sends onto itself.

    Defined only for a*b != 0; with a degenerate parameter one branch sits
    on the diagonal and there is no absorbing interval to speak of.
    """
    if p.is_degenerate:
        raise DegenerateParameterError(f"trapping interval needs a*b != 0, got a={p.a}, b={p.b}")
    return InvariantInterval(p.interval_lo, p.interval_hi)


class RecordPolicy(Enum):
    FULL = "full"
    UNTIL_FIXED = "until-fixed"
    UNTIL_ENTRY = "until-entry"


class Termination(Enum):
    MAX_ITERATIONS = "max-iterations"
    FIXED_POINT_REACHED = "fixed-point-reached"
    ENTERED_INTERVAL = "entered-interval"


@dataclass(frozen=True)
class OrbitRecord:
    """A forward orbit with trapping-interval annotations.

    iterates[0] is the starting point and iterates[k+1] = f(iterates[k]).
    entered_at is the first index whose iterate lies in the trapping
    interval, None if that never happened (always None for a*b = 0).
    """

    x0: float
    iterates: tuple[float, ...]
    entered_at: int | None
    terminated: Termination


def orbit(p: MapParams, x0: float, n: int, record: RecordPolicy = RecordPolicy.FULL) -> OrbitRecord:
    """Iterate n times from x0, annotating trapping-interval entry.

    Membership checks use the half-open endpoints with exact comparisons.
    Under RecordPolicy.FULL an orbit that lands exactly on a fixed point is
    padded with the constant tail so the caller always gets n+1 values; the
    other policies stop recording at their trigger.
    """
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    trap = None if p.is_degenerate else invariant_interval(p)

    x = check_domain(float(x0))
    xs = [x]
    entered = 0 if (trap is not None and x in trap) else None
    term = Termination.MAX_ITERATIONS

    k = 0
    while k < n:
        if record is RecordPolicy.UNTIL_ENTRY and entered is not None:
            term = Termination.ENTERED_INTERVAL
            break
        nxt = eval_f(p, x)
        k += 1
        xs.append(nxt)
        if entered is None and trap is not None and nxt in trap:
            entered = k
        if nxt == x:
            term = Termination.FIXED_POINT_REACHED
            if record is RecordPolicy.FULL:
                xs.extend([nxt] * (n - k))
            break
        x = nxt
    else:
        if record is RecordPolicy.UNTIL_ENTRY and entered is not None:
            term = Termination.ENTERED_INTERVAL

    return OrbitRecord(x0=xs[0], iterates=tuple(xs), entered_at=entered, terminated=term)


def entry_time(p: MapParams, x0: float, cap: int = DEFAULT_ENTRY_CAP) -> int | None:
    """Least n with f^n(x0) in the trapping interval, or None past the cap.

    The endpoints 0 and 1 sit on repelling fixed points and never enter;
    every interior point must enter long before the default cap, so None
    for an interior start is a property violation worth surfacing.
    """
    if p.is_degenerate:
        raise DegenerateParameterError("entry_time needs a*b != 0")
    trap = invariant_interval(p)
    x = check_domain(float(x0))
    for k in range(cap + 1):
        if x in trap:
            return k
        nxt = eval_f(p, x)
        if nxt == x:
            # parked on a fixed point outside the interval, will never enter
            return None
        x = nxt
    return None


def entry_times_batch(p: MapParams, xs, cap: int = DEFAULT_ENTRY_CAP) -> np.ndarray:
    """Vectorized entry_time over an array of starts; -1 encodes no entry."""
    if p.is_degenerate:
        raise DegenerateParameterError("entry_time needs a*b != 0")
    trap = invariant_interval(p)
    x = np.array(xs, dtype=float)
    times = np.full(x.shape, -1, dtype=np.int64)
    active = np.ones(x.shape, dtype=bool)
    for k in range(cap + 1):
        inside = active & (trap.lo < x) & (x <= trap.hi)
        times[inside] = k
        active &= ~inside
        if not active.any():
            break
        nxt = eval_f_vec(p, x)
        active &= nxt != x
        x = np.where(active, nxt, x)
    return times


def preimage_step(b: float, x: float) -> float:
    """Right-branch preimage used by the backward recurrence when a = 0.

    Solves x'*(1 - b + b*x') = x for the root in (1/2, 1) via

        x' = (sqrt(b*x + ((1-b)/2)^2) + (b-1)/2) / b

    and requires x in (1/2 - b/4, 1/2], the range the left-identity map
    actually attains on the right branch's image side.
    """
    b = float(b)
    if not (0.0 < b <= 1.0):
        raise DomainError(f"b must lie in (0,1], got {b}")
    x = float(x)
    lo = 0.5 - b / 4.0
    if not (lo < x <= 0.5):
        raise DomainError(f"x must lie in ({lo}, 0.5] for b={b}, got {x}")
    radicand = b * x + ((1.0 - b) / 2.0) ** 2
    if radicand < 0.0:
        # unreachable given the x range check, kept as an explicit guard
        raise DomainError(f"negative radicand {radicand} for b={b}, x={x}")
    return (math.sqrt(radicand) + (b - 1.0) / 2.0) / b


def backward_orbit(b: float, x: float, steps: int) -> tuple[float, ...]:
    """Repeated preimage_step, yielding x, x', x'', ... (steps+1 values).

    Only the first step leaves (1/2 - b/4, 1/2]; afterwards every value
    lies in (1/2, 1) where preimage_step's own domain check would reject
    it, so the chain continues with the raw right-branch inversion.
    """
    if steps < 0:
        raise DomainError(f"steps must be >= 0, got {steps}")
    out = [float(x)]
    cur = float(x)
    for _ in range(steps):
        if cur <= 0.5:
            cur = preimage_step(b, cur)
        else:
            radicand = b * cur + ((1.0 - b) / 2.0) ** 2
            cur = (math.sqrt(radicand) + (b - 1.0) / 2.0) / b
        out.append(cur)
    return tuple(out)


@dataclass(frozen=True)
class SimplexState:
    """A point (x, y) on the unit 1-simplex."""

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if x < 0.0 or y < 0.0 or abs(x + y - 1.0) > SIMPLEX_TOL:
            raise SimplexViolationError(f"({self.x}, {self.y}) is not on the simplex")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def simplex_orbit(a: float, z0: SimplexState, n: int) -> list[SimplexState]:
    """Orbit of the single-parameter operator x' = x*(1 + a*y) on the simplex.

    a ranges over [-1, 1] here; positive a drives x up toward 1, negative a
    drives it down toward 0, and a = 0 freezes the state. y is stored as the
    exact complement 1 - x' each step, which keeps the simplex invariant
    true by construction (see simplex_drift for the uncorrected variant).
    """
    a = float(a)
    if not (-1.0 <= a <= 1.0):
        raise DomainError(f"a must lie in [-1,1], got {a}")
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    states = [z0]
    x = z0.x
    for _ in range(n):
        x = x * (1.0 + a * states[-1].y)
        states.append(SimplexState(x, 1.0 - x))
    return states


def simplex_piecewise_orbit(p: MapParams, z0: SimplexState, n: int) -> list[SimplexState]:
    """Orbit of the two-parameter piecewise simplex operator.

    The x-component is advanced with eval_f itself, so it matches the 1D
    reduction exactly, float for float; y is the exact complement.
    """
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    states = [z0]
    x = z0.x
    for _ in range(n):
        x = eval_f(p, x)
        states.append(SimplexState(x, 1.0 - x))
    return states


def simplex_coefficients(p: MapParams, z: SimplexState) -> tuple[float, float]:
    """Mixed-pair offspring probabilities at the state z.

    Returns ((1+a)/2, (1-a)/2) while x <= 1/2 and ((1-b)/2, (1+b)/2) past
    the switch; the two components always sum to 1.
    """
    if z.x <= 0.5:
        return (1.0 + p.a) / 2.0, (1.0 - p.a) / 2.0
    return (1.0 - p.b) / 2.0, (1.0 + p.b) / 2.0


def simplex_drift(p: MapParams, z0: SimplexState, n: int) -> float:
    """Max |x + y - 1| over n steps when y is iterated independently.

    Diagnostic only: the production orbits store y as 1 - x, so this
    measures how much floating-point drift the uncorrected 2D update
    x' = x*(1 +/- c*y), y' = y*(1 -/+ c*x) would have accumulated.
    """
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    x, y = z0.x, z0.y
    worst = abs(x + y - 1.0)
    for _ in range(n):
        if x <= 0.5:
            x, y = x * (1.0 + p.a * y), y * (1.0 - p.a * x)
        else:
            x, y = x * (1.0 - p.b * y), y * (1.0 + p.b * x)
        worst = max(worst, abs(x + y - 1.0))
    return worst
