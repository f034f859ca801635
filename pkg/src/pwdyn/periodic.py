"""Fixed points, periodic orbits and their stability, the four-block
structure of the trapping interval, and scan-based cycle detection.

The scan engine leans on two structural facts. First, every composition
f^q is continuous except at the bounded-depth preimages of the switching
point, and it is left-continuous there, so [0, t_1], (t_1, t_2], ...,
(t_k, 1] are exact continuity pieces. Second, away from degenerate
parameters (f^q)' > 1 wherever it exists, so g(x) = f^q(x) - x is
strictly increasing on each piece and has at most one root per piece.
A sign-change scan over the pieces followed by bisection is therefore
exhaustive at sufficient resolution, with no root polishing needed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateParameterError, PreconditionError, ResolutionWarning
from .map_core import MapParams, eval_f, eval_f_deriv, eval_f_vec, iterate_n, preimages_of

CYCLE_TOL = 1e-9
NEAR_ZERO = 1e-12
# a cell that grazes zero without a sign change is resolution loss for a
# monotone g; such cells get one 100x rescan
REFINE_BAND = 1e-8
FIXED_COLLAPSE = 1e-6
MAX_PERIOD = 12
MIN_FIND_GRID = 10_000
MIN_ORACLE_GRID = 1_000


class Stability(Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    INDIFFERENT = "indifferent"
    UNDEFINED_DERIVATIVE = "undefined-derivative"


@dataclass(frozen=True)
class CycleRecord:
    """A periodic orbit: points in forward order, starting at the smallest."""

    points: tuple[float, ...]
    prime_period: int
    multiplier: float | None
    classification: Stability


def classify_cycle(p: MapParams, c: CycleRecord) -> CycleRecord:
    """Recompute the multiplier (chain-rule product of branch derivatives
    along the cycle) and the stability class of a verified cycle.

    A cycle through the switching point has no derivative there and is
    classified UNDEFINED_DERIVATIVE with multiplier None.
    """
    mult = 1.0
    for x in c.points:
        d = eval_f_deriv(p, x)
        if d is None:
            return CycleRecord(c.points, c.prime_period, None, Stability.UNDEFINED_DERIVATIVE)
        mult *= d
    if abs(mult) > 1.0:
        cls = Stability.REPELLING
    elif abs(mult) < 1.0:
        cls = Stability.ATTRACTING
    else:
        cls = Stability.INDIFFERENT
    return CycleRecord(c.points, c.prime_period, mult, cls)


@dataclass(frozen=True)
class Interval:
    """An interval with explicit endpoint openness flags."""

    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = False

    def __contains__(self, x: float) -> bool:
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo!r}, {self.hi!r}{right}"


@dataclass(frozen=True)
class FixedPointSet:
    """Fixed points as isolated values plus interval continua."""

    points: tuple[float, ...]
    intervals: tuple[Interval, ...]


def fixed_points(p: MapParams) -> FixedPointSet:
    """The full fixed-point set, exact in every parameter regime.

    Both branches fix their endpoints only, except that a zero parameter
    turns its branch into the identity and contributes a whole interval.
    """
    if p.a == 0.0 and p.b == 0.0:
        return FixedPointSet((), (Interval(0.0, 1.0, lo_open=False, hi_open=False),))
    if p.a == 0.0:
        return FixedPointSet((1.0,), (Interval(0.0, 0.5, lo_open=False, hi_open=False),))
    if p.b == 0.0:
        return FixedPointSet((0.0,), (Interval(0.5, 1.0, lo_open=True, hi_open=False),))
    return FixedPointSet((0.0, 1.0), ())


def two_cycle_b_window(a: float, b: float) -> bool:
    """b-range that places the left period-2 point inside (0, 1/2]:
    a/(a+1) < b <= 4a/(4 - a^2), upper bound inclusive."""
    return a / (a + 1.0) < b <= 4.0 * a / (4.0 - a * a)


def two_cycle_a_window(a: float, b: float) -> bool:
    """a-range that places the right period-2 point inside (1/2, 1):
    b/(b+1) < a < 4b/(4 - b^2), both bounds strict."""
    return b / (b + 1.0) < a < 4.0 * b / (4.0 - b * b)


def two_cycle_ratio_test(a: float, b: float) -> bool:
    """Looser single-inequality existence variant, kept for side-by-side
    comparison with the window predicates: 0 < a < 1 and b < a/(1 - a)."""
    if not (0.0 < a < 1.0):
        return False
    return b < a / (1.0 - a)


def two_cycle_exists(a: float, b: float) -> bool:
    """Existence of a genuine period-2 orbit per the window predicates."""
    return two_cycle_b_window(a, b) and two_cycle_a_window(a, b)


def two_cycle_closed_form(p: MapParams) -> CycleRecord | None:
    """Closed-form period-2 orbit, or None outside the existence window.

    The left point is the root

        x = (ab + 2b - sqrt(ab(ab + 4))) / (2ab)

    of the cross-branch composition quadratic, its partner being
    1/2 + (sqrt(ab(ab + 4)) - 2a) / (2ab); the window predicates are
    exactly the statements that the two points land in (0, 1/2] and
    (1/2, 1) respectively.
    """
    a, b = p.a, p.b
    if not two_cycle_exists(a, b):
        return None
    s = math.sqrt(a * b * (a * b + 4.0))
    x_lo = (a * b + 2.0 * b - s) / (2.0 * a * b)
    x_hi = 0.5 + (s - 2.0 * a) / (2.0 * a * b)
    return classify_cycle(p, CycleRecord((x_lo, x_hi), 2, None, Stability.UNDEFINED_DERIVATIVE))


def _g_vec(p: MapParams, q: int, xs: np.ndarray) -> np.ndarray:
    cur = np.asarray(xs, dtype=float)
    for _ in range(q):
        cur = eval_f_vec(p, cur)
    return cur - xs


def _breakpoints(p: MapParams, depth: int) -> list[float]:
    """Preimages of the switching point up to the given depth (inclusive of
    the point itself at depth 0); f^(depth+1) is continuous off these."""
    frontier = [0.5]
    seen = {0.5}
    for _ in range(depth):
        nxt = []
        for y in frontier:
            for x in preimages_of(p, y):
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return sorted(seen)


def _continuity_pieces(p: MapParams, q: int) -> list[tuple[float, float, bool]]:
    cuts = [t for t in _breakpoints(p, q - 1) if 0.0 < t < 1.0]
    bounds = [0.0, *cuts, 1.0]
    pieces = []
    for i in range(len(bounds) - 1):
        lo, hi = bounds[i], bounds[i + 1]
        if hi > lo:
            # only the first piece owns its left endpoint; the rest are (lo, hi]
            pieces.append((lo, hi, i == 0))
    return pieces


def _scan_piece(p, q, lo, hi, count, closed_lo, roots, blo, bhi, refine):
    xs = np.linspace(lo, hi, count)
    if not closed_lo:
        start = np.nextafter(lo, hi)
        if start >= hi:
            return
        xs[0] = start
    gs = _g_vec(p, q, xs)
    near = np.abs(gs) <= NEAR_ZERO
    roots.extend(float(v) for v in xs[near])
    bracket = (gs[:-1] < -NEAR_ZERO) & (gs[1:] >= NEAR_ZERO)
    for j in np.nonzero(bracket)[0]:
        blo.append(float(xs[j]))
        bhi.append(float(xs[j + 1]))
    if refine:
        graze = (np.minimum(np.abs(gs[:-1]), np.abs(gs[1:])) < REFINE_BAND) & ~bracket
        graze &= ~near[:-1] & ~near[1:]
        for j in np.nonzero(graze)[0]:
            _scan_piece(p, q, float(xs[j]), float(xs[j + 1]), 101, False, roots, blo, bhi, refine=False)


def _bisect_batch(p: MapParams, q: int, lo: np.ndarray, hi: np.ndarray, iters: int = 80) -> np.ndarray:
    """Vector bisection on brackets with g(lo) < 0 <= g(hi); returns the
    upper ends, the first representable points with g >= 0."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        live = (mid > lo) & (mid < hi)
        if not live.any():
            break
        g = _g_vec(p, q, mid)
        lo = np.where(live & (g < 0.0), mid, lo)
        hi = np.where(live & (g >= 0.0), mid, hi)
    return hi


def _period_roots(p: MapParams, q: int, grid: int) -> list[float]:
    roots: list[float] = []
    blo: list[float] = []
    bhi: list[float] = []
    for lo, hi, closed_lo in _continuity_pieces(p, q):
        count = max(8, int(grid * (hi - lo)) + 2)
        _scan_piece(p, q, lo, hi, count, closed_lo, roots, blo, bhi, refine=True)
    if blo:
        refined = _bisect_batch(p, q, np.array(blo, dtype=float), np.array(bhi, dtype=float))
        roots.extend(float(r) for r in refined)
    return roots


def _cycle_points(p: MapParams, x: float, q: int) -> list[float]:
    pts = [float(x)]
    for _ in range(q - 1):
        pts.append(eval_f(p, pts[-1]))
    return pts


def _prime_period(p: MapParams, x: float, q: int) -> int:
    for d in range(1, q):
        if q % d == 0 and abs(iterate_n(p, x, d) - x) <= CYCLE_TOL:
            return d
    return q


def _scan_periods(p: MapParams, periods, grid: int) -> list[CycleRecord]:
    if p.is_degenerate:
        raise DegenerateParameterError("cycle scans need a*b != 0; one branch is the identity otherwise")
    records: list[CycleRecord] = []
    kept_minima: list[tuple[int, float]] = []
    for q in sorted({int(q) for q in periods}):
        if q < 1:
            raise PreconditionError(f"period must be >= 1, got {q}")
        roots = sorted(_period_roots(p, q, grid))
        warn_gap = 10.0 / grid
        for u, v in zip(roots, roots[1:]):
            if CYCLE_TOL < v - u < warn_gap:
                warnings.warn(
                    f"period-{q} roots {u!r} and {v!r} are closer than 10/grid, raise the grid",
                    ResolutionWarning,
                    stacklevel=3,
                )
        for x in roots:
            if abs(iterate_n(p, x, q) - x) > CYCLE_TOL:
                continue
            if _prime_period(p, x, q) != q:
                continue
            pts = _cycle_points(p, x, q)
            mn = min(pts)
            if any(kq == q and abs(km - mn) <= 100 * CYCLE_TOL for kq, km in kept_minima):
                continue
            kept_minima.append((q, mn))
            k = pts.index(mn)
            pts = pts[k:] + pts[:k]
            records.append(classify_cycle(p, CycleRecord(tuple(pts), q, None, Stability.UNDEFINED_DERIVATIVE)))
    records.sort(key=lambda r: (r.prime_period, r.points[0]))
    return records


def find_cycles(p: MapParams, max_period: int, grid: int = MIN_FIND_GRID) -> list[CycleRecord]:
    """All cycles of prime period <= max_period, by piecewise scan.

    Needs a*b != 0: with a degenerate parameter one branch is the identity,
    f^q - x vanishes on whole subintervals, and sign-change scanning is
    ill-posed (fixed_points reports those regimes exactly instead).
    """
    if not 1 <= int(max_period) <= MAX_PERIOD:
        raise PreconditionError(f"max_period must lie in 1..{MAX_PERIOD}, got {max_period}")
    if grid < MIN_FIND_GRID:
        raise PreconditionError(f"grid must be >= {MIN_FIND_GRID}, got {grid}")
    return _scan_periods(p, range(1, int(max_period) + 1), grid)


def two_cycle_region_oracle(p: MapParams, grid: int = 4096) -> bool:
    """Scan-based yes/no for a genuine period-2 orbit, independent of the
    closed form.

    Roots of f^2(x) - x are located per continuity piece; one counts only
    if it is not a fixed point in disguise (|f(x) - x| > 1e-6) and closes
    up under two steps to 1e-9.
    """
    if p.is_degenerate:
        raise DegenerateParameterError("the 2-cycle oracle needs a*b != 0")
    if grid < MIN_ORACLE_GRID:
        raise PreconditionError(f"grid must be >= {MIN_ORACLE_GRID}, got {grid}")
    for rec in _scan_periods(p, [2], grid):
        if rec.prime_period == 2 and abs(eval_f(p, rec.points[0]) - rec.points[0]) > FIXED_COLLAPSE:
            return True
    return False


def odd_period_scan(p: MapParams, max_odd: int = 7, grid: int = 100_000) -> list[CycleRecord]:
    """Cycles of odd prime period 3, 5, ..., max_odd.

    Inside the four-block regime the result must be empty (the blocks force
    even return parity); past it odd cycles can and do exist. Degenerate
    parameters short-circuit to []: with a = 0 or b = 0 one branch sits on
    the diagonal and the other stays on one side of it, so no orbit of
    prime period >= 2 exists at all.
    """
    if not 3 <= int(max_odd) <= MAX_PERIOD - 1:
        raise PreconditionError(f"max_odd must lie in 3..{MAX_PERIOD - 1}, got {max_odd}")
    if p.is_degenerate:
        return []
    odd_periods = range(3, int(max_odd) + 1, 2)
    return [c for c in _scan_periods(p, odd_periods, grid) if c.prime_period % 2 == 1]


def four_block_regime(a: float, b: float) -> bool:
    """True when 0 < a <= 1 and a <= b <= 4a/(4 - a^2), the regime where
    the four-block split of the trapping interval is defined."""
    if not 0.0 < a <= 1.0:
        return False
    return a <= b <= 4.0 * a / (4.0 - a * a)


@dataclass(frozen=True)
class BlockPartition:
    """Four sub-blocks of the trapping interval whose images cycle.

    Ordered left to right: outer_left hugs the open lower endpoint,
    inner_left ends at the switching point, inner_right starts just past
    it, outer_right ends at the closed upper endpoint. The map sends each
    outer block into the union of the inner ones, inner_left into
    outer_right, and inner_right into outer_left; that even-length
    circulation is what rules out odd periods.
    """

    outer_left: Interval
    inner_left: Interval
    inner_right: Interval
    outer_right: Interval

    @property
    def blocks(self) -> tuple[Interval, Interval, Interval, Interval]:
        return (self.outer_left, self.inner_left, self.inner_right, self.outer_right)

    @property
    def gap_left(self) -> Interval:
        """Slack between outer_left and inner_left, open-left closed-right."""
        return Interval(self.outer_left.hi, self.inner_left.lo)

    @property
    def gap_right(self) -> Interval:
        """Slack between inner_right and outer_right."""
        return Interval(self.inner_right.hi, self.outer_right.lo)


def block_partition(p: MapParams) -> BlockPartition:
    """Closed-form endpoints of the four blocks.

    The endpoints are one- and two-step images of the trapping interval's
    endpoints, written out as polynomials in (a, b). They order correctly
    on the regime interior; at the exact upper regime boundary the inner
    right block degenerates to a point and both outer formulas collapse
    with it, which the transition checks treat as vacuous rather than
    wrong.
    """
    if not four_block_regime(p.a, p.b):
        raise PreconditionError(
            f"block partition needs 0 < a <= 1 and a <= b <= 4a/(4-a^2), got a={p.a}, b={p.b}"
        )
    a, b = p.a, p.b
    lo = 0.5 - b / 4.0
    hi = 0.5 + a / 4.0
    inner_right_hi = hi * (1.0 - b / 2.0 + a * b / 4.0)
    outer_left_hi = inner_right_hi * (1.0 - b / 2.0 + b * ((a - b) / 4.0 + a * a * b / 16.0))
    inner_left_lo = lo * (1.0 + a / 2.0 + a * b / 4.0)
    outer_right_lo = inner_left_lo * (1.0 + a / 2.0 - a * ((a - b) / 4.0 - a * b * b / 16.0))
    return BlockPartition(
        outer_left=Interval(lo, outer_left_hi),
        inner_left=Interval(inner_left_lo, 0.5),
        inner_right=Interval(0.5, inner_right_hi),
        outer_right=Interval(outer_right_lo, hi),
    )


@dataclass(frozen=True)
class InclusionCheck:
    name: str
    samples: int
    violations: int
    counterexamples: tuple[tuple[float, float], ...]

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class TransitionReport:
    checks: tuple[InclusionCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


_MEMBER_TOL = 1e-12


def _sample_interval(iv: Interval, count: int) -> np.ndarray | None:
    if iv.hi - iv.lo <= 1e-15:
        return None
    xs = np.linspace(iv.lo, iv.hi, count)
    if iv.lo_open:
        xs[0] = np.nextafter(iv.lo, iv.hi)
    if iv.hi_open:
        xs[-1] = np.nextafter(iv.hi, iv.lo)
    return xs


def _in_union(ys: np.ndarray, targets: list[Interval], tol: float) -> np.ndarray:
    ok = np.zeros(ys.shape, dtype=bool)
    for iv in targets:
        ok |= (ys > iv.lo - tol) & (ys <= iv.hi + tol)
    return ok


def transition_check(p: MapParams, samples: int = 10_000) -> TransitionReport:
    """Sampled verification of the block circulation.

    Checks the endpoint ordering, the four image inclusions, and that the
    two gap regions never map straight back into themselves (images may
    visit the opposite gap before being absorbed into the blocks, so only
    the no-immediate-return half of the alternation is a sound sampled
    claim).
    """
    if samples < 10:
        raise PreconditionError(f"samples must be >= 10, got {samples}")
    part = block_partition(p)
    checks: list[InclusionCheck] = []

    seq = [
        part.outer_left.lo, part.outer_left.hi,
        part.inner_left.lo, part.inner_left.hi,
        part.inner_right.lo, part.inner_right.hi,
        part.outer_right.lo, part.outer_right.hi,
    ]
    disorder = sum(1 for u, v in zip(seq, seq[1:]) if v < u - _MEMBER_TOL)
    checks.append(InclusionCheck("block-ordering", len(seq) - 1, disorder, ()))

    image_cases = [
        ("outer-left-to-inner", part.outer_left, [part.inner_left, part.inner_right]),
        ("inner-left-to-outer-right", part.inner_left, [part.outer_right]),
        ("inner-right-to-outer-left", part.inner_right, [part.outer_left]),
        ("outer-right-to-inner", part.outer_right, [part.inner_left, part.inner_right]),
    ]
    for name, source, targets in image_cases:
        xs = _sample_interval(source, samples)
        if xs is None:
            checks.append(InclusionCheck(name, 0, 0, ()))
            continue
        ys = eval_f_vec(p, xs)
        ok = _in_union(ys, targets, _MEMBER_TOL)
        bad = np.nonzero(~ok)[0]
        ces = tuple((float(xs[j]), float(ys[j])) for j in bad[:5])
        checks.append(InclusionCheck(name, len(xs), int(bad.size), ces))

    for name, gap in (("gap-left-no-return", part.gap_left), ("gap-right-no-return", part.gap_right)):
        xs = _sample_interval(gap, samples)
        if xs is None:
            checks.append(InclusionCheck(name, 0, 0, ()))
            continue
        ys = eval_f_vec(p, xs)
        # shrink the gap by the tolerance so boundary grazing does not
        # count as a return
        back = (ys > gap.lo + _MEMBER_TOL) & (ys <= gap.hi - _MEMBER_TOL)
        bad = np.nonzero(back)[0]
        ces = tuple((float(xs[j]), float(ys[j])) for j in bad[:5])
        checks.append(InclusionCheck(name, len(xs), int(bad.size), ces))

    return TransitionReport(tuple(checks))


@dataclass(frozen=True)
class TwoCycleSurvey:
    """Grid comparison of period-2 existence criteria.

    window_vs_oracle lists (a, b) where the window predicates and the scan
    oracle disagree (must be empty for the predicates to be trusted);
    ratio_vs_window lists points where the looser ratio variant differs
    from the windows, recorded for the record rather than gated.
    """

    grid_side: int
    total_points: int
    window_vs_oracle: tuple[tuple[float, float], ...]
    ratio_vs_window: tuple[tuple[float, float], ...]

    @property
    def agreement_ok(self) -> bool:
        return not self.window_vs_oracle

    def summary(self) -> str:
        lines = [
            f"two-cycle criteria survey on a {self.grid_side}x{self.grid_side} parameter grid",
            f"window predicates vs scan oracle: {len(self.window_vs_oracle)} disagreements",
        ]
        for a, b in self.window_vs_oracle[:10]:
            lines.append(f"  disagreement at a={a!r}, b={b!r}")
        lines.append(
            f"ratio variant vs window predicates: {len(self.ratio_vs_window)} points differ"
        )
        for a, b in self.ratio_vs_window[:10]:
            lines.append(f"  differs at a={a!r}, b={b!r}")
        return "\n".join(lines)


def two_cycle_survey(side: int = 50, grid: int = 4096) -> TwoCycleSurvey:
    """Compare the closed-form window predicates against the scan oracle
    (and against the ratio variant) on a side x side grid over (0,1]^2."""
    if side < 2:
        raise PreconditionError(f"side must be >= 2, got {side}")
    vals = [(i + 1) / side for i in range(side)]
    window_vs_oracle: list[tuple[float, float]] = []
    ratio_vs_window: list[tuple[float, float]] = []
    for a in vals:
        for b in vals:
            window = two_cycle_exists(a, b)
            oracle = two_cycle_region_oracle(MapParams(a, b), grid=grid)
            if window != oracle:
                window_vs_oracle.append((a, b))
            if two_cycle_ratio_test(a, b) != window:
                ratio_vs_window.append((a, b))
    return TwoCycleSurvey(side, side * side, tuple(window_vs_oracle), tuple(ratio_vs_window))
