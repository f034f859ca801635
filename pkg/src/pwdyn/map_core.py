"""Core evaluation of the piecewise quadratic interval map.

The map acts on [0,1] with two increasing quadratic branches glued at a
single switching point:

    f(x) = x*(1 + a - a*x)   for 0 <= x <= 1/2
    f(x) = x*(1 - b + b*x)   for 1/2 <  x <= 1

with parameters a, b in [0,1]. The left branch owns x = 1/2 exactly, so f
is left-continuous there and jumps down by (a + b)/4 across the switch.
Reflecting the interval through x -> 1 - x exchanges the roles of a and b,
which is the symmetry `conjugate_map_check` measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NumericIntegrityError

DOMAIN_TOL = 1e-12
# map values may poke past an endpoint by a few rounding steps at most;
# anything worse means the formula itself went wrong
_CLAMP_SLACK = 4 * math.ulp(1.0)


@dataclass(frozen=True)
class MapParams:
    """Parameter pair (a, b), both confined to [0,1]."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
            raise DomainError(f"parameters must lie in [0,1]^2, got a={self.a}, b={self.b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_identity(self) -> bool:
        return self.a == 0.0 and self.b == 0.0

    @property
    def is_left_identity(self) -> bool:
        """True when the left branch is the identity but the right one is not."""
        return self.a == 0.0 and self.b != 0.0

    @property
    def is_degenerate(self) -> bool:
        return self.a == 0.0 or self.b == 0.0

    @property
    def interval_lo(self) -> float:
        """Open lower endpoint of the trapping interval, 1/2 - b/4."""
        return 0.5 - self.b / 4.0

    @property
    def interval_hi(self) -> float:
        """Closed upper endpoint of the trapping interval, 1/2 + a/4."""
        return 0.5 + self.a / 4.0

    def swapped(self) -> "MapParams":
        return MapParams(self.b, self.a)


class Branch(Enum):
    LEFT = "left"
    RIGHT = "right"


def branch_of(x: float) -> Branch:
    # exact comparison on purpose: 0.5 is representable and belongs to the left branch
    return Branch.LEFT if x <= 0.5 else Branch.RIGHT


@dataclass(frozen=True)
class BranchPoint:
    """A point tagged with the branch that evaluates it."""

    x: float
    branch: Branch

    @classmethod
    def at(cls, x: float) -> "BranchPoint":
        return cls(check_domain(float(x)), branch_of(x))


def check_domain(x: float) -> float:
    """Snap x into [0,1] when it is within DOMAIN_TOL, reject anything further out."""
    if x < 0.0:
        if x >= -DOMAIN_TOL:
            return 0.0
        raise DomainError(f"x={x!r} outside [0,1]")
    if x > 1.0:
        if x <= 1.0 + DOMAIN_TOL:
            return 1.0
        raise DomainError(f"x={x!r} outside [0,1]")
    if x != x:
        raise DomainError("x is NaN")
    return x


def _clamp_unit(y: float) -> float:
    if 0.0 <= y <= 1.0:
        return y
    if 1.0 < y <= 1.0 + _CLAMP_SLACK:
        return 1.0
    if -_CLAMP_SLACK <= y < 0.0:
        return 0.0
    raise NumericIntegrityError(f"map value {y!r} escaped [0,1] by more than rounding")


def eval_f(p: MapParams, x: float) -> float:
    """One application of the map."""
    x = check_domain(float(x))
    if x <= 0.5:
        y = x * (1.0 + p.a - p.a * x)
    else:
        y = x * (1.0 - p.b + p.b * x)
    return _clamp_unit(y)


def eval_f_vec(p: MapParams, xs: np.ndarray) -> np.ndarray:
    """Vectorized map step.

    The branch expressions are written exactly as in `eval_f` so scalar and
    array paths agree bit for bit. No domain snapping or overshoot policing
    happens here; batch callers own their arrays and keep them in [0,1].
    """
    xs = np.asarray(xs, dtype=float)
    return np.where(xs <= 0.5, xs * (1.0 + p.a - p.a * xs), xs * (1.0 - p.b + p.b * xs))


def left_deriv_formula(p: MapParams, x: float) -> float:
    """Left-branch derivative 1 + a - 2ax, evaluated without a branch check."""
    return 1.0 + p.a - 2.0 * p.a * x


def right_deriv_formula(p: MapParams, x: float) -> float:
    """Right-branch derivative 1 - b + 2bx, evaluated without a branch check."""
    return 1.0 - p.b + 2.0 * p.b * x


def eval_f_deriv(p: MapParams, x: float) -> float | None:
    """Branch derivative at x, or None at the switching point.

    f itself jumps at 1/2, so no two-sided derivative exists there even
    though both branch formulas tend to 1. Everywhere else the value lies
    in (1, 1 + max(a,b)] as long as the relevant parameter is positive.
    """
    x = check_domain(float(x))
    if x == 0.5:
        return None
    if x < 0.5:
        return left_deriv_formula(p, x)
    return right_deriv_formula(p, x)


def iterate_n(p: MapParams, x0: float, n: int) -> float:
    """n-fold composition applied to x0."""
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    x = check_domain(float(x0))
    for _ in range(n):
        x = eval_f(p, x)
    return x


def conjugate_map_check(p: MapParams, x: float) -> tuple[float, float]:
    """Both sides of the reflection identity at one point.

    Returns (1 - f_{a,b}(x), f_{b,a}(1 - x)). Away from x = 1/2 the two
    sides agree to machine precision; at exactly 1/2 branch ownership flips
    under the reflection, so that single point is a flagged exception the
    caller excludes rather than an error.
    """
    x = check_domain(float(x))
    lhs = 1.0 - eval_f(p, x)
    rhs = eval_f(p.swapped(), 1.0 - x)
    return lhs, rhs


def preimages_of(p: MapParams, y: float) -> tuple[float, ...]:
    """All x in [0, 1] with f(x) = y, honoring branch ownership.

    Each branch is a quadratic in x, inverted in closed form; a candidate
    counts only if it lands in its own branch's domain. A zero parameter
    turns its branch into the identity, whose inverse is y itself. Between
    zero and two preimages exist for any y.
    """
    out: list[float] = []
    a, b = p.a, p.b
    if a == 0.0:
        if 0.0 <= y <= 0.5:
            out.append(float(y))
    else:
        disc = (1.0 + a) * (1.0 + a) - 4.0 * a * y
        if disc >= 0.0:
            x = ((1.0 + a) - math.sqrt(disc)) / (2.0 * a)
            if 0.0 <= x <= 0.5:
                out.append(x)
    if b == 0.0:
        if 0.5 < y <= 1.0:
            out.append(float(y))
    else:
        disc = (1.0 - b) * (1.0 - b) + 4.0 * b * y
        if disc >= 0.0:
            x = ((b - 1.0) + math.sqrt(disc)) / (2.0 * b)
            if 0.5 < x <= 1.0:
                out.append(x)
    return tuple(out)
