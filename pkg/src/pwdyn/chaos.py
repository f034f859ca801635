"""Lyapunov exponents, parameter-sweep rules, and bifurcation sampling.

Sweeps are computed in fixed lane chunks whose decomposition never depends
on the thread count; threads only change which worker executes a chunk.
Since every kernel is elementwise, the output bytes are identical for any
--threads value, which is what makes sweep output reproducible.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, PreconditionError, RuleRangeError
from .map_core import MapParams, eval_f, eval_f_deriv
from .orbits import invariant_interval

LYAPUNOV_FLOOR = -1e-6
LYAPUNOV_CEIL_SLACK = 1e-9
MIN_LYAPUNOV_STEPS = 1_000
MIN_KEEP = 100
# lanes per work unit; fixed so chunk decomposition is thread-independent
CHUNK_LANES = 256


def lyapunov_ceiling(p: MapParams) -> float:
    """Upper bound ln(1 + max(a, b)) on the exponent, from the derivative
    bound that holds everywhere off the switching point."""
    return math.log(1.0 + max(p.a, p.b))


@dataclass(frozen=True)
class LyapunovEstimate:
    exponent: float
    n_used: int
    n_skipped: int
    x0: float


def lyapunov(p: MapParams, x0: float, burn: int = 10_000, n: int = 100_000) -> LyapunovEstimate:
    """Orbit-averaged log derivative from x0 after a transient.

    Iterates landing exactly on the switching point carry no derivative;
    they are skipped and counted rather than averaged. The identity map
    (a = b = 0) short-circuits to exponent zero.
    """
    if n < MIN_LYAPUNOV_STEPS:
        raise PreconditionError(f"n must be >= {MIN_LYAPUNOV_STEPS}, got {n}")
    if burn < 0:
        raise PreconditionError(f"burn must be >= 0, got {burn}")
    x0 = float(x0)
    if not 0.0 < x0 < 1.0 or x0 == 0.5:
        raise DomainError(f"x0 must lie in (0, 1) off the switching point, got {x0}")
    if p.is_identity:
        return LyapunovEstimate(0.0, n, 0, x0)
    x = x0
    for _ in range(burn):
        x = eval_f(p, x)
    total = 0.0
    skipped = 0
    for _ in range(n):
        d = eval_f_deriv(p, x)
        if d is None:
            skipped += 1
        else:
            total += math.log(abs(d))
        x = eval_f(p, x)
    used = n - skipped
    exponent = total / used if used > 0 else 0.0
    return LyapunovEstimate(exponent, used, skipped, x0)


def _step_lanes(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    # same expression structure as the scalar map, one lane per parameter point
    return np.where(x <= 0.5, x * (1.0 + a - a * x), x * (1.0 - b + b * x))


def lyapunov_lanes(
    a: np.ndarray, b: np.ndarray, x0: np.ndarray, burn: int, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch kernel: one exponent per (a, b, x0) lane.

    Returns (exponent, n_used, n_skipped) arrays. Switch hits are masked
    out per lane exactly as in the scalar path; identity lanes come out
    zero because no iterate moves and every log term is log(1).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.array(np.broadcast_to(np.asarray(x0, dtype=float), a.shape), dtype=float)
    for _ in range(burn):
        x = _step_lanes(a, b, x)
    total = np.zeros(a.shape)
    skipped = np.zeros(a.shape, dtype=np.int64)
    for _ in range(n):
        on_switch = x == 0.5
        d = np.where(x <= 0.5, 1.0 + a - 2.0 * a * x, 1.0 - b + 2.0 * b * x)
        total += np.where(on_switch, 0.0, np.log(np.abs(d)))
        skipped += on_switch
        x = _step_lanes(a, b, x)
    used = n - skipped
    exponent = np.where(used > 0, total / np.maximum(used, 1), 0.0)
    return exponent, used, skipped


class RuleKind(Enum):
    EQUAL = "b=a"
    HALF = "b=a/2"
    TWO_THIRDS = "b=2a/3"
    THREE_QUARTERS = "b=3a/4"
    FOUR_FIFTHS = "b=4a/5"
    FIVE_SIXTHS = "b=5a/6"
    RATIONAL_LOW = "b=a/(4-a^2)"
    RATIONAL_HIGH = "b=5a/(4-a^2)"
    CRITICAL = "b=4a/(4-a^2)"
    CONST = "b=const"
    RATIO = "b=ratio*a"


_NAMED_RULES = {
    "a": RuleKind.EQUAL,
    "a/2": RuleKind.HALF,
    "2a/3": RuleKind.TWO_THIRDS,
    "3a/4": RuleKind.THREE_QUARTERS,
    "4a/5": RuleKind.FOUR_FIFTHS,
    "5a/6": RuleKind.FIVE_SIXTHS,
    "a/(4-a^2)": RuleKind.RATIONAL_LOW,
    "5a/(4-a^2)": RuleKind.RATIONAL_HIGH,
    "4a/(4-a^2)": RuleKind.CRITICAL,
}

_LINEAR_FACTORS = {
    RuleKind.EQUAL: 1.0,
    RuleKind.HALF: 0.5,
    RuleKind.TWO_THIRDS: 2.0 / 3.0,
    RuleKind.THREE_QUARTERS: 0.75,
    RuleKind.FOUR_FIFTHS: 0.8,
    RuleKind.FIVE_SIXTHS: 5.0 / 6.0,
}


@dataclass(frozen=True)
class BRule:
    """A b-as-a-function-of-a rule for one-parameter sweeps."""

    kind: RuleKind
    value: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "BRule":
        s = text.strip().lower().replace(" ", "")
        if s.startswith("b="):
            s = s[2:]
        s = s.replace("**2", "^2")
        if s in _NAMED_RULES:
            return cls(_NAMED_RULES[s])
        if s.endswith("a") and len(s) > 1:
            try:
                r = float(s[:-1])
            except ValueError:
                raise DomainError(f"unrecognized sweep rule {text!r}") from None
            return cls._ratio(r, text)
        if s.startswith("a/"):
            try:
                d = float(s[2:])
            except ValueError:
                raise DomainError(f"unrecognized sweep rule {text!r}") from None
            if d <= 0.0:
                raise DomainError(f"rule divisor must be positive in {text!r}")
            return cls._ratio(1.0 / d, text)
        try:
            v = float(s)
        except ValueError:
            raise DomainError(f"unrecognized sweep rule {text!r}") from None
        if not 0.0 <= v <= 1.0:
            raise RuleRangeError(f"constant rule {text!r} puts b outside [0, 1]")
        return cls(RuleKind.CONST, v)

    @classmethod
    def _ratio(cls, r: float, text: str) -> "BRule":
        if r < 0.0:
            raise RuleRangeError(f"ratio rule {text!r} makes b negative")
        return cls(RuleKind.RATIO, r)

    def label(self) -> str:
        if self.kind is RuleKind.CONST:
            return f"b={format(self.value, '.17g')}"
        if self.kind is RuleKind.RATIO:
            return f"b={format(self.value, '.17g')}*a"
        return self.kind.value

    def b_of(self, a: float) -> float:
        if self.kind in _LINEAR_FACTORS:
            return _LINEAR_FACTORS[self.kind] * a
        if self.kind is RuleKind.RATIONAL_LOW:
            return a / (4.0 - a * a)
        if self.kind is RuleKind.RATIONAL_HIGH:
            return 5.0 * a / (4.0 - a * a)
        if self.kind is RuleKind.CRITICAL:
            return 4.0 * a / (4.0 - a * a)
        if self.kind is RuleKind.CONST:
            return self.value
        return self.value * a


def _sweep_points(rule: BRule, a_min: float, a_max: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    if steps < 1:
        raise PreconditionError(f"steps must be >= 1, got {steps}")
    if not 0.0 < a_min <= a_max <= 1.0:
        raise PreconditionError(f"need 0 < a_min <= a_max <= 1, got [{a_min}, {a_max}]")
    a = np.linspace(a_min, a_max, steps)
    b = np.array([rule.b_of(float(v)) for v in a])
    bad = np.nonzero((b < 0.0) | (b > 1.0))[0]
    if bad.size:
        j = int(bad[0])
        raise RuleRangeError(
            f"rule {rule.label()} leaves [0, 1]: b({format(float(a[j]), '.17g')}) = {format(float(b[j]), '.17g')}"
        )
    return a, b


def _run_chunked(worker, lanes: int, threads: int) -> list:
    """Apply worker(start, stop) over fixed-size lane chunks, optionally in
    a thread pool; the chunk list never depends on the thread count."""
    spans = [(s, min(s + CHUNK_LANES, lanes)) for s in range(0, lanes, CHUNK_LANES)]
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads == 1 or len(spans) == 1:
        return [worker(s, e) for s, e in spans]
    with ThreadPoolExecutor(max_workers=min(threads, len(spans))) as pool:
        futures = [pool.submit(worker, s, e) for s, e in spans]
        return [f.result() for f in futures]


def lyapunov_sweep(
    rule: BRule,
    a_min: float,
    a_max: float,
    steps: int,
    x0: float = 0.3,
    burn: int = 10_000,
    n: int = 100_000,
    threads: int = 1,
) -> list[tuple[float, float, float]]:
    """Exponent along a one-parameter slice b = rule(a).

    Returns (a, b, exponent) rows in a-order. Raises RuleRangeError before
    computing anything if the rule leaves [0, 1] on the requested range.
    """
    if n < MIN_LYAPUNOV_STEPS:
        raise PreconditionError(f"n must be >= {MIN_LYAPUNOV_STEPS}, got {n}")
    if not 0.0 < float(x0) < 1.0 or float(x0) == 0.5:
        raise DomainError(f"x0 must lie in (0, 1) off the switching point, got {x0}")
    a, b = _sweep_points(rule, a_min, a_max, steps)

    def worker(s: int, e: int) -> np.ndarray:
        lam, _, _ = lyapunov_lanes(a[s:e], b[s:e], float(x0), burn, n)
        return lam

    chunks = _run_chunked(worker, len(a), threads)
    lam = np.concatenate(chunks) if chunks else np.empty(0)
    return [(float(a[i]), float(b[i]), float(lam[i])) for i in range(len(a))]


@dataclass(frozen=True)
class BifurcationSample:
    """Post-transient iterates retained at one parameter point."""

    a: float
    b: float
    retained: tuple[float, ...]


def bifurcation_sweep(
    rule: BRule,
    a_min: float,
    a_max: float,
    steps: int,
    x0: float = 0.3,
    burn: int = 10_000,
    keep: int = 500,
    threads: int = 1,
) -> list[BifurcationSample]:
    """Attractor samples along b = rule(a): burn the transient, then record
    the next keep iterates at every parameter point."""
    if keep < MIN_KEEP:
        raise PreconditionError(f"keep must be >= {MIN_KEEP}, got {keep}")
    if burn < 0:
        raise PreconditionError(f"burn must be >= 0, got {burn}")
    if not 0.0 < float(x0) < 1.0:
        raise DomainError(f"x0 must lie in (0, 1), got {x0}")
    a, b = _sweep_points(rule, a_min, a_max, steps)

    def worker(s: int, e: int) -> np.ndarray:
        aa, bb = a[s:e], b[s:e]
        x = np.full(aa.shape, float(x0))
        for _ in range(burn):
            x = _step_lanes(aa, bb, x)
        rows = np.empty((keep, e - s))
        for i in range(keep):
            x = _step_lanes(aa, bb, x)
            rows[i] = x
        return rows

    chunks = _run_chunked(worker, len(a), threads)
    rows = np.concatenate(chunks, axis=1) if chunks else np.empty((keep, 0))
    return [
        BifurcationSample(float(a[i]), float(b[i]), tuple(float(v) for v in rows[:, i]))
        for i in range(len(a))
    ]


def band_count(values, gap: float = 0.01) -> int:
    """Number of clusters in a value set, where a jump larger than gap
    between adjacent sorted values starts a new cluster."""
    if isinstance(values, BifurcationSample):
        values = values.retained
    xs = sorted(float(v) for v in values)
    if not xs:
        raise PreconditionError("band_count needs at least one value")
    if gap <= 0.0:
        raise PreconditionError(f"gap must be positive, got {gap}")
    bands = 1
    for u, v in zip(xs, xs[1:]):
        if v - u > gap:
            bands += 1
    return bands


def retained_within(sample: BifurcationSample, slack: float = 1e-12) -> bool:
    """True when every retained iterate lies in the trapping interval,
    up to slack below the open lower endpoint."""
    trap = invariant_interval(MapParams(sample.a, sample.b))
    return all(trap.lo - slack < v <= trap.hi for v in sample.retained)
