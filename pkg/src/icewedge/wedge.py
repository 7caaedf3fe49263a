"""Angular confidence wedges on the ICE plane.

A wedge is a sector with apex at the ICE origin, centred on the ray through
the observed outcome. With the default symmetric rule its half-width is the
smallest angle that covers ``ceil(confidence * r)`` bootstrap replicates;
the two tails are whatever falls clockwise below / counter-clockwise above
it, so tail counts are generally unequal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapScatter
from .errors import BadConfidence, OriginObserved, OriginPoint, WedgeDegenerate
from .scale import IceOutcome

TAIL_RULES = ("symmetric", "equal")


def wrap_angle(theta):
    """Map angles into (-pi, pi]. Scalars stay scalars.

    Values already in range are returned unchanged, so tiny deviations keep
    full precision.
    """
    if np.ndim(theta) == 0:
        t = float(theta)
        if -math.pi < t <= math.pi:
            return t
        t = math.remainder(t, 2 * math.pi)
        return math.pi if t <= -math.pi else t
    t = np.array(theta, dtype=float)
    out = (t <= -np.pi) | (t > np.pi)
    if out.any():
        w = np.remainder(t[out] + np.pi, 2 * np.pi) - np.pi
        t[out] = np.where(w <= -np.pi, w + 2 * np.pi, w)
    return t


def ice_angle(outcome: IceOutcome) -> float:
    if outcome.x == 0 and outcome.y == 0:
        raise OriginPoint("the ICE origin has no angle")
    return math.atan2(outcome.y, outcome.x)


def required_count(confidence: float, r: int) -> int:
    # the 1e-9 keeps 0.95 * 25000 from rounding up to 23751
    return math.ceil(confidence * r - 1e-9)


@dataclass(frozen=True)
class ConfidenceWedge:
    center: float
    half_angle: float
    lower: float
    upper: float
    confidence: float
    count_below: int
    count_above: int
    count_inside: int
    count_origin: int
    r: int
    tails: str = "symmetric"
    # signed deviations of the two limits from the centre ray
    lower_dev: float = 0.0
    upper_dev: float = 0.0

    @property
    def tail_total(self) -> int:
        return self.count_below + self.count_above

    def contains_angle(self, theta: float) -> bool:
        d = wrap_angle(theta - self.center)
        return self.lower_dev <= d <= self.upper_dev


def _deviations(scatter: BootstrapScatter):
    obs = scatter.observed
    if obs.x == 0 and obs.y == 0:
        raise OriginObserved("observed outcome is at the ICE origin; no centre ray")
    center = math.atan2(obs.y, obs.x)
    origin = (scatter.xs == 0) & (scatter.ys == 0)
    theta = np.arctan2(scatter.ys[~origin], scatter.xs[~origin])
    return center, wrap_angle(theta - center), int(origin.sum())


def compute_wedge(scatter: BootstrapScatter, confidence: float = 0.95, tails: str = "symmetric") -> ConfidenceWedge:
    """Confidence wedge over ``scatter``.

    ``tails="symmetric"``: limits at centre -/+ h, h minimal. ``tails="equal"``:
    limits at order statistics of the signed deviations chosen so the
    clockwise and counter-clockwise tails differ by at most one replicate.
    Replicates exactly at the origin count as inside. Limits are inclusive.
    """
    if not (0.5 <= confidence < 1):
        raise BadConfidence(f"confidence must lie in [0.5, 1), got {confidence!r}")
    if tails not in TAIL_RULES:
        raise ValueError(f"tails must be one of {TAIL_RULES}, got {tails!r}")
    center, d, n_origin = _deviations(scatter)
    r = scatter.r
    need = required_count(confidence, r) - n_origin

    if tails == "symmetric":
        if need <= 0:
            h = 0.0
        else:
            h = float(np.partition(np.abs(d), need - 1)[need - 1])
        if h >= math.pi:
            raise WedgeDegenerate("replicates surround the origin; no wedge narrower than a half-plane")
        lo_dev, hi_dev = -h, h
    else:
        m = len(d)
        if need <= 0 or m == 0:
            lo_dev = hi_dev = 0.0
        else:
            excess = m - need
            n_below = excess // 2
            n_above = excess - n_below
            ordered = np.sort(d)
            lo_dev, hi_dev = float(ordered[n_below]), float(ordered[m - 1 - n_above])
        if max(abs(lo_dev), abs(hi_dev)) >= math.pi:
            raise WedgeDegenerate("replicates surround the origin; no wedge narrower than a half-plane")
        h = (hi_dev - lo_dev) / 2.0

    below = int(np.count_nonzero(d < lo_dev))
    above = int(np.count_nonzero(d > hi_dev))
    inside = len(d) - below - above
    return ConfidenceWedge(
        center=center,
        half_angle=h,
        lower=wrap_angle(center + lo_dev),
        upper=wrap_angle(center + hi_dev),
        confidence=confidence,
        count_below=below,
        count_above=above,
        count_inside=inside,
        count_origin=n_origin,
        r=r,
        tails=tails,
        lower_dev=lo_dev,
        upper_dev=hi_dev,
    )


@dataclass(frozen=True)
class QuadrantCounts:
    se: int  # more effective, less costly
    ne: int
    nw: int
    sw: int
    boundary: int  # on an axis but not the origin
    origin: int

    @property
    def total(self) -> int:
        return self.se + self.ne + self.nw + self.sw + self.boundary + self.origin

    def fractions(self) -> dict[str, float]:
        n = self.total or 1
        return {k: getattr(self, k) / n for k in ("se", "ne", "nw", "sw", "boundary", "origin")}


def quadrant_counts(scatter: BootstrapScatter) -> QuadrantCounts:
    x, y = scatter.xs, scatter.ys
    origin = (x == 0) & (y == 0)
    axis = ((x == 0) | (y == 0)) & ~origin
    return QuadrantCounts(
        se=int(np.count_nonzero((x > 0) & (y < 0))),
        ne=int(np.count_nonzero((x > 0) & (y > 0))),
        nw=int(np.count_nonzero((x < 0) & (y > 0))),
        sw=int(np.count_nonzero((x < 0) & (y < 0))),
        boundary=int(np.count_nonzero(axis)),
        origin=int(np.count_nonzero(origin)),
    )
