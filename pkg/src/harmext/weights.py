"""Radial Muckenhoupt-type weights concentrated on the unit circle.

The weights are

    w(x) = delta(x)^alpha * log^lambda(2 / delta(x)),   delta(x) = |1 - |x||,

for |x| <= 2, and the constant log^lambda(2) for |x| >= 2.  They are the
model weights whose A_p membership is governed by alpha in (-1, p-1) with a
logarithmic correction, and they factor as w = w1 * w2^(1-p) with w1, w2 in
A_1 (a Jones-type factorization).

``estimate_ap_constant`` samples random disks and evaluates

    (avg_B w) * (avg_B w^(1/(1-p)))^(p-1)

with a one-dimensional radial quadrature aligned with the level sets of
delta, geometrically refined toward the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureOverflowError

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class WeightSpec:
    """A single weight delta^alpha log^lambda(2/delta), with a role tag."""

    alpha: float
    lam: float
    role: str = "main"


def weight(spec: WeightSpec, x):
    """Evaluate the weight at points of the plane (complex array or radii).

    Accepts complex positions or nonnegative radii; only |x| matters.
    """
    arr = np.asarray(x)
    radii = np.abs(arr).astype(float)
    return weight_radial(spec, radii)


def weight_radial(spec: WeightSpec, radii):
    arr = np.asarray(radii, dtype=float)
    if np.any(arr < 0):
        raise DomainError("radii must be nonnegative")
    scalar = arr.shape == ()
    arr = np.atleast_1d(arr)
    delta = np.abs(1.0 - arr)
    out = np.empty_like(delta)
    far = arr >= 2.0
    out[far] = _LOG2 ** spec.lam
    near = ~far
    d = delta[near]
    vals = np.empty_like(d)
    zero = d == 0.0
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        vals[~zero] = d[~zero] ** spec.alpha * \
            np.log(2.0 / d[~zero]) ** spec.lam
    # limits on the circle itself
    if np.any(zero):
        if spec.alpha < 0:
            lim = np.inf
        elif spec.alpha > 0:
            lim = 0.0
        else:
            lim = np.inf if spec.lam > 0 else (0.0 if spec.lam < 0 else 1.0)
        vals[zero] = lim
    out[near] = vals
    out = np.where(np.isnan(out), np.inf, out)
    if scalar:
        return float(out[0])
    return out.reshape(np.shape(radii))


def weight_log_derivative(spec: WeightSpec, delta):
    """d/d(delta) log w as a function of delta in (0, 1).

    Equals alpha/delta - lam / (delta log(2/delta)); the sign tells whether
    the weight blows up or degenerates as delta -> 0 below the scale where
    alpha dominates the log correction.
    """
    d = np.asarray(delta, dtype=float)
    if np.any(d <= 0) or np.any(d >= 2):
        raise DomainError("delta must lie in (0, 2)")
    out = spec.alpha / d - spec.lam / (d * np.log(2.0 / d))
    return float(out) if np.asarray(delta).shape == () else out


# ---------------------------------------------------------- factorization

def jones_factors(p: float, alpha: float, lam: float):
    """Split w_{alpha,lam} as w1 * w2^(1-p) with w1, w2 of A_1 type.

    Writes alpha = a1 * (-1) + a2 * (p-1) with a1 + a2 = 1, i.e.
    a1 = (p-1-alpha)/p, a2 = (1+alpha)/p, and assigns

        lambda >= 0:  w1 = delta^{-a1} log^{p lam},  w2 = delta^{-a2} log^{lam}
        lambda <  0:  w1 = delta^{-a1} log^{-lam},
                      w2 = delta^{-a2} log^{2 lam/(1-p)}

    so that w1 * w2^(1-p) = w exactly.  The A_1 range requires
    alpha in (-1, p-1) (both a1, a2 in (0, 1)).
    """
    if p <= 1:
        raise DomainError(f"need p > 1, got {p}")
    a1 = (p - 1 - alpha) / p
    a2 = (1 + alpha) / p
    if lam >= 0:
        lam1, lam2 = p * lam, lam
    else:
        lam1, lam2 = -lam, 2 * lam / (1 - p)
    w1 = WeightSpec(alpha=-a1, lam=lam1, role="factor_numerator")
    w2 = WeightSpec(alpha=-a2, lam=lam2, role="factor_denominator")
    return w1, w2


# ------------------------------------------------------- A_p constant

_REFINE_START = 24
_MAX_REFINES = 9
_CONVERGE_RTOL = 0.01


def _disk_average(spec: WeightSpec, power: float, center: complex,
                  radius: float) -> float:
    """Average of w^power over the disk B(center, radius).

    Reduced to a radial integral: the weight depends only on rho = |x|, so

        avg = (1 / pi R^2) * int w(rho)^power * rho * ang(rho) d rho

    where ang(rho) is the angular measure of the circle of radius rho inside
    the disk.  The rho-grid is split at rho = 1 with geometric panels toward
    the circle (the only singular set), each panel integrated by midpoints,
    and refined by node doubling until the value settles within 1%.
    """
    c = abs(center)
    lo = max(0.0, c - radius)
    hi = c + radius

    def ang(rho):
        if c == 0.0:
            return np.full_like(rho, 2 * math.pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            cosv = (c * c + rho * rho - radius * radius) / (2 * c * rho)
        return 2 * np.arccos(np.clip(cosv, -1.0, 1.0))

    # panel edges: geometric refinement toward rho = 1 when the disk meets it
    edges = [lo, hi]
    if lo < 1.0 < hi:
        scale = max(hi - 1.0, 1.0 - lo)
        for m in range(1, 40):
            step = scale * 2.0 ** -m
            if 1.0 - step > lo:
                edges.append(1.0 - step)
            if 1.0 + step < hi:
                edges.append(1.0 + step)
            if step < 1e-13:
                break
        edges.append(1.0)
    edges = np.unique(np.asarray(edges, dtype=float))

    prev = None
    history = []
    n = _REFINE_START
    for _ in range(_MAX_REFINES + 1):
        total = 0.0
        measure = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            rho = a + (np.arange(n) + 0.5) * (b - a) / n
            vals = weight_radial(spec, rho)
            with np.errstate(over="ignore", invalid="ignore"):
                vals = vals ** power
            slab = rho * ang(rho) * (b - a) / n
            total += float(np.sum(vals * slab))
            measure += float(np.sum(slab))
        # normalizing by the quadrature's own measure of the disk cancels
        # the discretization of ang(rho), so constant weights average to 1
        # exactly at every refinement stage
        total /= measure
        history.append(total)
        if prev is not None and np.isfinite(total):
            denom = max(abs(total), 1e-300)
            if abs(total - prev) / denom < _CONVERGE_RTOL:
                return total
        prev = total
        n *= 2

    # not settled: decide between "slow" and "diverging"
    if not np.isfinite(history[-1]):
        raise QuadratureOverflowError(
            f"disk average of w^{power:g} is non-finite (alpha={spec.alpha}, "
            f"lam={spec.lam})")
    tail = history[-3:]
    if all(b > a * 1.02 for a, b in zip(tail[:-1], tail[1:])):
        raise QuadratureOverflowError(
            f"disk average of w^{power:g} keeps growing under refinement "
            f"(alpha={spec.alpha}, lam={spec.lam}): {tail}")
    return history[-1]


@dataclass
class ApEstimate:
    value: float          # max over sampled disks of the A_p ratio
    trials: int
    worst_center: complex
    worst_radius: float


def estimate_ap_constant(spec: WeightSpec, p: float, trials: int = 200,
                         rng_seed: int = 0) -> ApEstimate:
    """Randomized lower estimate of the A_p constant of the weight.

    Samples disks with centers uniform in [-4,4]^2 and log-uniform radii in
    [1e-4, 4]; raises QuadratureOverflowError when a sampled disk average
    fails to converge (weight outside the A_p range).
    """
    if p <= 1:
        raise DomainError(f"need p > 1, got {p}")
    rng = np.random.default_rng(rng_seed)
    best = -np.inf
    best_c, best_r = 0j, 0.0
    for _ in range(trials):
        cx, cy = rng.uniform(-4.0, 4.0, size=2)
        radius = float(np.exp(rng.uniform(math.log(1e-4), math.log(4.0))))
        center = complex(cx, cy)
        avg_w = _disk_average(spec, 1.0, center, radius)
        avg_dual = _disk_average(spec, 1.0 / (1.0 - p), center, radius)
        ratio = avg_w * avg_dual ** (p - 1.0)
        if ratio > best:
            best, best_c, best_r = ratio, center, radius
    return ApEstimate(value=float(best), trials=trials,
                      worst_center=best_c, worst_radius=best_r)
