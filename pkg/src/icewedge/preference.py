"""Two-parameter ICE preference maps and executable coherence checks.

A map scores a standardized outcome (x, y) as

    P(x, y) = (x**2 + y**2) ** ((beta - gamma) / 2) * sign(x - y) * |x - y| ** gamma

with the proportionality constant fixed at 1 (preferences are ordinal).
``beta`` sets the returns to scale, ``gamma`` the nonlinearity. Monotonicity
holds iff gamma / beta lies in [1/OMEGA, OMEGA] with OMEGA = (1 + sqrt 2)**2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidMap
from .scale import ShadowPrice

REL_TOL = 1e-9


def omega_bounds() -> tuple[float, float]:
    omega = (1.0 + math.sqrt(2.0)) ** 2
    return 1.0 / omega, omega


OMEGA = omega_bounds()[1]


class ReturnsToScale(enum.Enum):
    DECREASING = "Decreasing"
    CONSTANT = "Constant"
    INCREASING = "Increasing"


def signed_power(z, c: float):
    """sign(z) * |z| ** c, real for every real z. Works on scalars and arrays."""
    if not c > 0:
        raise ValueError(f"signed power exponent must be positive, got {c!r}")
    if np.ndim(z) == 0:
        z = float(z)
        if z == 0.0:
            return 0.0
        return math.copysign(abs(z) ** c, z)
    z = np.asarray(z, dtype=float)
    return np.sign(z) * np.abs(z) ** c


@dataclass(frozen=True)
class PreferenceMap:
    beta: float = 1.0
    gamma: float = 1.0
    lam: Optional[ShadowPrice] = None

    def __post_init__(self):
        for name in ("beta", "gamma"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                raise InvalidMap(f"{name} must be a positive finite number, got {v!r}")
            object.__setattr__(self, name, float(v))

    @classmethod
    def net_benefit(cls, lam: Optional[ShadowPrice] = None) -> "PreferenceMap":
        return cls(1.0, 1.0, lam)

    @classmethod
    def ice_omega(cls, beta: float = 1.0, lam: Optional[ShadowPrice] = None) -> "PreferenceMap":
        """The most nonlinear map that is still monotone: gamma = OMEGA * beta."""
        return cls(beta, OMEGA * beta, lam)

    @property
    def ratio(self) -> float:
        return self.gamma / self.beta

    @property
    def monotone_valid(self) -> bool:
        lo, hi = omega_bounds()
        return lo <= self.ratio <= hi

    def __call__(self, x, y):
        return evaluate(self, x, y)


def evaluate(pmap: PreferenceMap, x, y):
    """Preference value(s) at (x, y); scalar in, float out, arrays broadcast.

    P(0, 0) is defined as 0. When beta < gamma the radius factor blows up
    near the origin, so points close to the origin along the x = -y
    direction can carry very large magnitudes. Values whose magnitude lies
    below the float range underflow to 0.
    """
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    out = _evaluate(pmap.beta, pmap.gamma, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(out) if scalar else out


def _evaluate(beta: float, gamma: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = x - y
    if beta == gamma:
        # radius exponent is exactly 0
        return np.sign(d) * np.abs(d) ** gamma
    # Evaluate on (x, y) / s with s = max(|x|, |y|) and rescale by s**beta,
    # which keeps x**2 + y**2 from under- or overflowing.
    s = np.maximum(np.abs(x), np.abs(y))
    safe = np.where(s > 0, s, 1.0)
    xn, yn = x / safe, y / safe
    dn = xn - yn
    r2 = xn * xn + yn * yn
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        log_mag = beta * np.log(safe) + (beta - gamma) / 2.0 * np.log(np.where(r2 > 0, r2, 1.0)) + gamma * np.log(np.abs(dn))
        out = np.sign(d) * np.exp(log_mag)
    return np.where((d == 0) | (s == 0), 0.0, out)


def returns_to_scale(pmap: PreferenceMap) -> ReturnsToScale:
    if pmap.beta < 1.0:
        return ReturnsToScale.DECREASING
    if pmap.beta > 1.0:
        return ReturnsToScale.INCREASING
    return ReturnsToScale.CONSTANT


@dataclass(frozen=True)
class Grid:
    """Rectangular lattice of evaluation points, origin excluded from monotonicity checks."""

    xs: np.ndarray
    ys: np.ndarray

    @classmethod
    def square(cls, n: int = 41, half_range: float = 2.0) -> "Grid":
        if n < 2:
            raise ValueError("grid needs at least 2 points per axis")
        axis = np.linspace(-half_range, half_range, n)
        return cls(axis, axis.copy())

    def points(self) -> np.ndarray:
        gx, gy = np.meshgrid(self.xs, self.ys, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass
class AxiomReport:
    direction: bool
    monotonicity: bool
    relabeling: bool
    symmetry: bool
    violations: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return self.direction and self.monotonicity and self.relabeling and self.symmetry

    def lines(self) -> list[str]:
        names = [
            ("1 indifference/direction", self.direction),
            ("2 monotonicity", self.monotonicity),
            ("3 re-labeling", self.relabeling),
            ("4 symmetry/anti-symmetry", self.symmetry),
        ]
        out = []
        for label, ok in names:
            line = f"axiom {label}: {'pass' if ok else 'FAIL'}"
            key = label.split()[0]
            if not ok and key in self.violations:
                line += f"  (e.g. {self.violations[key]})"
            out.append(line)
        return out


def _close(a: np.ndarray, b: np.ndarray, rel_tol: float) -> np.ndarray:
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.finfo(float).tiny)
    with np.errstate(invalid="ignore"):
        return (a == b) | (np.abs(a - b) <= rel_tol * scale)


def _first_bad(mask: np.ndarray, pts: np.ndarray):
    bad = np.flatnonzero(~mask)
    if bad.size == 0:
        return None
    x, y = pts[bad[0]]
    return (float(x), float(y))


def _monotone_lattice(pmap: PreferenceMap, grid: Grid, rel_tol: float):
    # P must be non-decreasing in x and non-increasing in y. On a lattice the
    # pairwise condition reduces to comparing each value with the running max
    # over the quadrant {x' <= x, y' >= y}.
    gx, gy = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    p = np.asarray(evaluate(pmap, gx, gy), dtype=float)
    origin = (gx == 0) & (gy == 0)
    p_cmp = np.where(origin, -np.inf, p)
    xs_order = np.argsort(grid.xs, kind="stable")
    ys_order = np.argsort(grid.ys, kind="stable")[::-1]
    q = p_cmp[np.ix_(xs_order, ys_order)]
    run = np.maximum.accumulate(np.maximum.accumulate(q, axis=0), axis=1)
    # compare each point with the best of its strict predecessors in the order
    prev = np.full_like(run, -np.inf)
    prev[1:, :] = np.maximum(prev[1:, :], run[:-1, :])
    prev[:, 1:] = np.maximum(prev[:, 1:], run[:, :-1])
    vals = q
    valid = np.isfinite(vals)
    slack = rel_tol * np.maximum(np.maximum(np.abs(vals), np.abs(prev)), np.finfo(float).tiny)
    with np.errstate(invalid="ignore"):
        bad = valid & np.isfinite(prev) & (prev - vals > slack)
    if not bad.any():
        return True, None
    i, j = np.argwhere(bad)[0]
    x = float(grid.xs[xs_order[i]])
    y = float(grid.ys[ys_order[j]])
    return False, (x, y)


def _monotone_points(pmap: PreferenceMap, pts: np.ndarray, rel_tol: float, chunk: int = 512):
    keep = ~((pts[:, 0] == 0) & (pts[:, 1] == 0))
    pts = pts[keep]
    p = np.asarray(evaluate(pmap, pts[:, 0], pts[:, 1]), dtype=float)
    for start in range(0, len(pts), chunk):
        sl = slice(start, start + chunk)
        # rows: (x, y) candidates; cols: (x0, y0) references
        ge_x = pts[sl, 0][:, None] >= pts[None, :, 0]
        le_y = pts[sl, 1][:, None] <= pts[None, :, 1]
        a = p[sl][:, None]
        b = p[None, :]
        slack = rel_tol * np.maximum(np.maximum(np.abs(a), np.abs(b)), np.finfo(float).tiny)
        with np.errstate(invalid="ignore"):
            bad = ge_x & le_y & (b - a > slack)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return False, (tuple(map(float, pts[start + i])), tuple(map(float, pts[j])))
    return True, None


def check_axioms(pmap: PreferenceMap, grid=None, rel_tol: float = REL_TOL) -> AxiomReport:
    """Check the four coherence axioms of ``pmap`` on ``grid``.

    ``grid`` is a :class:`Grid` (default 41 x 41 over [-2, 2]^2) or an
    (n, 2) array of points. Failures are recorded, never raised.
    """
    if grid is None:
        grid = Grid.square()
    if isinstance(grid, Grid):
        pts = grid.points()
    else:
        pts = np.asarray(grid, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    p = np.asarray(evaluate(pmap, x, y), dtype=float)
    violations = {}

    direction = np.sign(p) == np.sign(x - y)
    if not direction.all():
        violations["1"] = _first_bad(direction, pts)

    relabel = _close(p, -np.asarray(evaluate(pmap, -x, -y), dtype=float), rel_tol)
    if not relabel.all():
        violations["3"] = _first_bad(relabel, pts)

    mirror = np.asarray(evaluate(pmap, -y, -x), dtype=float)
    swap = -np.asarray(evaluate(pmap, y, x), dtype=float)
    symmetric = _close(p, mirror, rel_tol) & _close(p, swap, rel_tol)
    if not symmetric.all():
        violations["4"] = _first_bad(symmetric, pts)

    if isinstance(grid, Grid):
        mono, witness = _monotone_lattice(pmap, grid, rel_tol)
    else:
        mono, witness = _monotone_points(pmap, pts, rel_tol)
    if not mono:
        violations["2"] = witness

    return AxiomReport(
        direction=bool(direction.all()),
        monotonicity=mono,
        relabeling=bool(relabel.all()),
        symmetry=bool(symmetric.all()),
        violations=violations,
    )
