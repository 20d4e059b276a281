"""Staircase circle maps built by iterated interval removal.

The construction keeps, at step n, one plateau inside every gap left by the
previous steps.  Margins shrink along a schedule j_1 <= j_2 <= ... :

    margin(n) = 4^-n            for n <  n0,
    margin(n) = 2^-j_n          for n >= n0,

where n0 is the first index from which  j_{n+1} >= j_n + 2  and
j_n >= 2n  both hold (so margins stay nested and summable).  Two schedule
kinds are supported:

    power(s):       j_n = largest integer < 2^(n/s)
    double_exp(p):  j_n = largest integer < exp(2^(n(p-1)))

The limit function f is a devil-staircase: constant on every kept plateau
(value (2k-1)/2^n at step n) and rising by exactly 2^-n across every gap
left after step n.  The circle map uses the lift g = (f + id)/2, which is
strictly increasing with slope >= 1/2, hence a homeomorphism lift.

All endpoints are dyadic rationals, kept exactly as Fractions.  That makes
a fast path for dyadic-level increments possible: at level j pick the first
step m whose margin is <= 2^-j; every gap after step m is then contained in
a single dyadic cell (gap endpoints are multiples of the gap length, which
divides the cell width), and f rises by exactly 2^-m across each gap.  So
the lift increment of a cell is (count * 2^-m + 2^-j)/2 where count is the
number of gaps it contains -- no enumeration of the 2^j cells required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle_map import CircleMap
from .errors import (ConstructionError, DepthBudgetError, DomainError)

_HALF = Fraction(1, 2)
_FLOAT_MARGIN_BITS = 48   # float tables stop once margins drop below 2^-48


def strict_floor(x: float) -> int:
    """Largest integer strictly less than x (x assumed > 1).

    Values within 1e-9 relative of an integer are treated as that integer.
    """
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r) - 1
    return int(math.floor(x))


@dataclass(frozen=True)
class RemovalSchedule:
    """Margin schedule for the interval-removal construction."""

    kind: str                # "power" or "double_exp"
    parameter: float         # s for power, p for double_exp
    depth: int
    j: tuple                 # j_1 .. j_depth
    n0: int

    def margin_exponent(self, n: int) -> int:
        """margin(n) = 2^-margin_exponent(n)."""
        if not (1 <= n <= self.depth):
            raise DomainError(f"step {n} outside 1..{self.depth}")
        if n < self.n0:
            return 2 * n
        return self.j[n - 1]

    def margin(self, n: int) -> Fraction:
        return Fraction(1, 2 ** self.margin_exponent(n))


def build_schedule(kind: str, parameter: float, depth: int) -> RemovalSchedule:
    if depth < 2:
        raise DomainError("need depth >= 2")
    js = []
    for n in range(1, depth + 1):
        if kind == "power":
            s = parameter
            if s <= 0:
                raise DomainError("power schedule needs s > 0")
            js.append(strict_floor(2.0 ** (n / s)))
        elif kind == "double_exp":
            p = parameter
            if p <= 1:
                raise DomainError("double_exp schedule needs p > 1")
            expo = 2.0 ** (n * (p - 1))
            if expo > 700:
                raise DepthBudgetError(
                    f"double_exp step {n} overflows (exp(2^{n*(p-1):g}))")
            js.append(strict_floor(math.exp(expo)))
        else:
            raise DomainError(f"unknown schedule kind {kind!r}")

    n0 = None
    for cand in range(1, depth + 1):
        start = max(1, cand - 1)
        ok = all(js[n] - js[n - 1] >= 2 for n in range(start, depth)) and \
            all(js[n - 1] >= 2 * n for n in range(start, depth + 1))
        if ok:
            n0 = cand
            break
    if n0 is None:
        raise ConstructionError(
            f"no admissible n0 within depth {depth} for {kind}({parameter}); "
            "increase depth")
    return RemovalSchedule(kind=kind, parameter=float(parameter), depth=depth,
                           j=tuple(js), n0=n0)


# --------------------------------------------------------------- the tree

@dataclass
class StaircaseTree:
    """Exact interval bookkeeping of the removal construction.

    ``plateaus[n]`` lists (lo, hi, value) for the 2^(n-1) intervals kept at
    step n; ``gaps[n]`` lists (lo, hi, f_lo) for the 2^n gaps remaining
    after step n.  All numbers are Fractions with power-of-two denominators.
    """

    schedule: RemovalSchedule
    plateaus: list
    gaps: list


def build_tree(schedule: RemovalSchedule) -> StaircaseTree:
    gaps = [(Fraction(0), Fraction(1), Fraction(0))]
    all_plateaus = [[]]   # index 0 unused
    all_gaps = [list(gaps)]
    for n in range(1, schedule.depth + 1):
        m = schedule.margin(n)
        rise = Fraction(1, 2 ** n)
        new_plateaus = []
        new_gaps = []
        for lo, hi, flo in gaps:
            a, b = lo + m, hi - m
            if not (lo < a < b < hi):
                raise ConstructionError(
                    f"step {n}: margin {m} does not fit in gap ({lo}, {hi})")
            value = flo + rise
            new_plateaus.append((a, b, value))
            new_gaps.append((lo, a, flo))
            new_gaps.append((b, hi, value))
        gaps = new_gaps
        all_plateaus.append(new_plateaus)
        all_gaps.append(new_gaps)
    return StaircaseTree(schedule=schedule, plateaus=all_plateaus,
                         gaps=all_gaps)


def f_exact(tree: StaircaseTree, x: Fraction, max_step: int | None = None):
    """Value of the staircase at x, resolved through ``max_step`` steps.

    Returns (value, error_bound): exact (error 0) when x lands on a kept
    plateau, otherwise the midpoint of the final gap's range with error
    bound 2^-(max_step+1).
    """
    x = Fraction(x)
    if not (0 <= x <= 1):
        raise DomainError("argument outside [0,1]")
    # the endpoints are the only residual points never adjacent to a built
    # plateau; their limit values are pinned by construction
    if x == 0:
        return Fraction(0), Fraction(0)
    if x == 1:
        return Fraction(1), Fraction(0)
    if max_step is None:
        max_step = tree.schedule.depth
    if max_step > tree.schedule.depth:
        raise DepthBudgetError(
            f"tree built to depth {tree.schedule.depth}, need {max_step}")
    lo, hi, flo = Fraction(0), Fraction(1), Fraction(0)
    for n in range(1, max_step + 1):
        m = tree.schedule.margin(n)
        a, b = lo + m, hi - m
        if a <= x <= b:
            return flo + Fraction(1, 2 ** n), Fraction(0)
        if x < a:
            lo, hi = lo, a
        else:
            lo, hi, flo = b, hi, flo + Fraction(1, 2 ** n)
    half_range = Fraction(1, 2 ** (max_step + 1))
    return flo + half_range, half_range


def f_eval(tree: StaircaseTree, x, tol: float) -> float:
    """Staircase value within absolute tolerance tol (DepthBudgetError if
    the built depth cannot deliver it)."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    need = 0
    while 2.0 ** -(need + 1) > tol:
        need += 1
        if need > tree.schedule.depth:
            raise DepthBudgetError(
                f"tol {tol:g} needs depth > {tree.schedule.depth}")
    val, _ = f_exact(tree, Fraction(x), max_step=max(need, 1))
    return float(val)


# -------------------------------------------------------------- the lift

class StaircaseLift:
    """Lift g = (f + id)/2 of the staircase map, with fast dyadic sums.

    Float evaluation interpolates the plateau endpoints linearly (exact on
    plateaus, affine across unresolved gaps), which is the step-n
    approximant of the limit; the depth used for the float tables stops
    when margins leave float resolution.
    """

    def __init__(self, tree: StaircaseTree):
        self.tree = tree
        sched = tree.schedule
        self.float_depth = 0
        for n in range(1, sched.depth + 1):
            if sched.margin_exponent(n) > _FLOAT_MARGIN_BITS:
                break
            self.float_depth = n
        if self.float_depth < 1:
            raise ConstructionError("schedule too steep for float tables")
        pts = [(0.0, 0.0), (1.0, 1.0)]
        for n in range(1, self.float_depth + 1):
            for lo, hi, val in tree.plateaus[n]:
                v = float(val)
                pts.append((float(lo), v))
                pts.append((float(hi), v))
        pts.sort()
        self._xs = np.array([q[0] for q in pts])
        self._fs = np.array([q[1] for q in pts])

    @property
    def eval_error_bound(self) -> float:
        return 2.0 ** -(self.float_depth + 1)

    def staircase(self, t):
        """Float staircase values (vectorized)."""
        return np.interp(np.asarray(t, dtype=float), self._xs, self._fs)

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        return 0.5 * (self.staircase(arr) + arr)

    # structure-aware dyadic increments -------------------------------

    def level_increment_groups(self, j: int):
        """Exact lift increments of the active dyadic cells at level j.

        Returns (special_deltas, plateau_count).  Active cells are those
        containing at least one gap of the first step m whose margin is
        <= 2^-j; each contained gap raises f by exactly 2^-m.
        """
        sched = self.tree.schedule
        m = None
        for n in range(1, sched.depth + 1):
            if sched.margin_exponent(n) >= j:
                m = n
                break
        if m is None:
            raise DepthBudgetError(
                f"level {j} needs margins below 2^-{j}; built depth "
                f"{sched.depth} reaches 2^-{sched.margin_exponent(sched.depth)}")
        counts: dict = {}
        for lo, _hi, _flo in self.tree.gaps[m]:
            k = (lo.numerator << j) // lo.denominator
            counts[k] = counts.get(k, 0) + 1
        cell_width = math.ldexp(1.0, -j)       # 0.0 below the float range
        rise = math.ldexp(1.0, -m)
        deltas = np.array([0.5 * (c * rise + cell_width)
                           for c in sorted_counts_values(counts)])
        plateau_count = (1 << j) - len(counts)
        return deltas, plateau_count


def sorted_counts_values(counts: dict):
    return [counts[k] for k in sorted(counts)]


# ------------------------------------------------------------ public API

def make_staircase_map(kind: str, parameter: float, depth: int) -> CircleMap:
    """Circle map with staircase boundary lift, normalized so that the
    point at angle 1/2 turn is fixed (the plateau through 1/2 has value
    1/2, so the rotation offset vanishes identically)."""
    schedule = build_schedule(kind, parameter, depth)
    tree = build_tree(schedule)
    lift = StaircaseLift(tree)
    g_half = float(lift(np.array(0.5)))
    rho = 0.5 - g_half     # 0 by construction; kept for clarity
    name = "cantor_log" if kind == "power" else "cantor_loglog"
    key = "s" if kind == "power" else "p"
    return CircleMap(lift=lift, rotation=rho,
                     eval_tolerance=lift.eval_error_bound * 2,
                     description=f"{name}:{key}={parameter:g},depth={depth}")


# ------------------------------------------------- modulus certification

@dataclass
class ModulusReport:
    sup_product: float
    witness: tuple            # (x, y, |f(x)-f(y)|, separation)
    pairs_checked: int


def certify_modulus(tree: StaircaseTree, form: str, exponent: float,
                    n_samples: int = 400, rng_seed: int = 0) -> ModulusReport:
    """Empirical sup of |f(x)-f(y)| * omega(|x-y|)^exponent.

    form "log": omega(d) = log(1/d); form "loglog": omega(d) = log log(1/d).
    Pairs: random pairs at log-uniform separations, plus adversarial pairs
    straddling plateau endpoints at every margin scale of the schedule.
    """
    if form not in ("log", "loglog"):
        raise DomainError(f"unknown modulus form {form!r}")
    sched = tree.schedule
    rng = np.random.default_rng(rng_seed)
    pairs = []

    d_min = 2.0 ** -min(sched.margin_exponent(sched.depth), 900)
    for _ in range(n_samples):
        d = float(np.exp(rng.uniform(math.log(max(d_min, 1e-250)),
                                     math.log(0.05))))
        x = float(rng.uniform(0.0, 1.0 - min(d, 0.5)))
        pairs.append((Fraction(x), Fraction(x) + Fraction(d)))

    for n in range(1, sched.depth + 1):
        h = sched.margin(n) / 2
        for lo, hi, _v in tree.plateaus[n][:32]:
            for b in (lo, hi):
                a, c = b - h, b + h
                if 0 <= a and c <= 1:
                    pairs.append((a, c))

    # residual-interval spans: between consecutive plateaus of depth <= n
    # the function rises by a full dyadic step over the shortest possible
    # distance, so these pairs are the extremal candidates at every scale
    merged = []
    for n in range(1, sched.depth + 1):
        merged = sorted(merged + [(lo, hi) for lo, hi, _v
                                  in tree.plateaus[n]])
        cuts = [Fraction(0)] + [e for iv in merged for e in iv] \
            + [Fraction(1)]
        pairs.extend((a, b) for a, b in zip(cuts[::2], cuts[1::2]) if a < b)

    sup = -math.inf
    witness = None
    for a, b in pairs:
        sep = float(b - a)
        if sep <= 0 or sep >= 1:
            continue
        fa, _ = f_exact(tree, a)
        fb, _ = f_exact(tree, b)
        diff = abs(float(fb - fa))
        if form == "log":
            om = math.log(1.0 / sep)
        else:
            inner = math.log(1.0 / sep)
            if inner <= 1.0:
                continue
            om = math.log(inner)
        prod = diff * om ** exponent
        if prod > sup:
            sup = prod
            witness = (float(a), float(b), diff, sep)
    return ModulusReport(sup_product=sup, witness=witness,
                         pairs_checked=len(pairs))


def gap_rise_partial_sums(schedule: RemovalSchedule, first_block: int,
                          n_blocks: int) -> np.ndarray:
    """Partial sums of j_n * 2^-n over schedule blocks.

    This is the divergence surrogate for the boundary double integral of
    steep-schedule maps: each block past n0 contributes about j_n 2^-n, so
    unbounded partial sums certify divergence.
    """
    if first_block < 1 or first_block + n_blocks - 1 > schedule.depth:
        raise DomainError("blocks outside the built schedule")
    terms = [schedule.j[n - 1] * 2.0 ** -n
             for n in range(first_block, first_block + n_blocks)]
    return np.cumsum(terms)
