"""Seedable two-sample patient bootstrap producing a scatter of ICE outcomes.

Random streams
--------------
Replicate ``i`` of a run with master seed ``s`` draws from
``numpy.random.Generator(PCG64(SeedSequence(s, spawn_key=(i,))))``; this is
the same stream ``SeedSequence(s).spawn(...)[i]`` would give. Each replicate
draws ``n_std`` row indices uniform on [0, n_std) and then ``n_new`` row
indices uniform on [0, n_new) via ``Generator.integers``. Because streams are
keyed by replicate index, the scatter does not depend on how replicates are
spread over threads.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .data_model import ArmSample
from .errors import BadReplicationCount, IoError, NonNumericCell, MissingColumn, EmptyFile
from .scale import IceOutcome, Perspective, ShadowPrice, standardize

MIN_REPS = 100
BLOCK = 512


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def thread_count(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get("ICE_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


@dataclass(frozen=True)
class BootstrapScatter:
    observed: IceOutcome
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)
    seed: Optional[int] = None

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        ys = np.array(self.ys, dtype=float)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("replicate x and y must be 1-d arrays of equal length")
        xs.flags.writeable = False
        ys.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def r(self) -> int:
        return len(self.xs)

    @property
    def lam(self) -> ShadowPrice:
        return self.observed.lam

    @property
    def perspective(self) -> Perspective:
        return self.observed.perspective

    @property
    def replicates(self) -> list[IceOutcome]:
        lam, persp = self.lam, self.perspective
        return [IceOutcome(float(x), float(y), lam, persp) for x, y in zip(self.xs, self.ys)]

    def with_points(self, xs, ys, observed: Optional[IceOutcome] = None) -> "BootstrapScatter":
        return BootstrapScatter(observed or self.observed, xs, ys, self.seed)


def _block(std: ArmSample, new: ArmSample, seed: int, start: int, stop: int):
    n_s, n_n = std.n, new.n
    idx_s = np.empty((stop - start, n_s), dtype=np.int64)
    idx_n = np.empty((stop - start, n_n), dtype=np.int64)
    for row, i in enumerate(range(start, stop)):
        rng = replicate_rng(seed, i)
        idx_s[row] = rng.integers(0, n_s, size=n_s)
        idx_n[row] = rng.integers(0, n_n, size=n_n)
    de = new.effe[idx_n].mean(axis=1) - std.effe[idx_s].mean(axis=1)
    dc = new.cost[idx_n].mean(axis=1) - std.cost[idx_s].mean(axis=1)
    return de, dc


def mean_difference(std: ArmSample, new: ArmSample) -> tuple[float, float]:
    return float(new.effe.mean() - std.effe.mean()), float(new.cost.mean() - std.cost.mean())


def resample(
    std: ArmSample,
    new: ArmSample,
    r: int,
    seed: int,
    lam: ShadowPrice,
    perspective: Perspective = Perspective.ALIAS,
    threads: Optional[int] = None,
) -> BootstrapScatter:
    """Bootstrap ``r`` replicate (New - Std) mean differences, standardized.

    Patients (rows) are resampled with replacement within each arm, so the
    within-patient effectiveness/cost correlation is kept. ``threads``
    (default: ``ICE_THREADS`` or the CPU count) only changes speed.
    """
    if r < MIN_REPS:
        raise BadReplicationCount(f"need at least {MIN_REPS} replications, got {r}")
    perspective = Perspective.parse(perspective)
    de = np.empty(r)
    dc = np.empty(r)
    blocks = [(s, min(s + BLOCK, r)) for s in range(0, r, BLOCK)]

    def work(bounds):
        s, e = bounds
        de[s:e], dc[s:e] = _block(std, new, seed, s, e)

    n_threads = min(thread_count(threads), len(blocks))
    if n_threads == 1:
        for b in blocks:
            work(b)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(work, blocks))

    if perspective is Perspective.ALIAS:
        xs, ys = de, dc / lam.value
    else:
        xs, ys = de * lam.value, dc
    observed = standardize(*mean_difference(std, new), lam, perspective)
    return BootstrapScatter(observed, xs, ys, seed)


def icer(outcome: IceOutcome) -> Optional[float]:
    """Cost per unit effectiveness, y / x; ``None`` when x == 0.

    The ratio is unstable near x = 0 and cannot tell the SE quadrant from the
    NW one (``icer`` of (1, 2) and (-1, -2) agree), which is why inference
    here works with angles instead.
    """
    if outcome.x == 0:
        return None
    return outcome.y / outcome.x


def write_scatter_csv(scatter: BootstrapScatter, path: str | Path) -> None:
    """Write ``rep,x,y``; row ``rep=0`` holds the observed outcome, replicates are 1..r."""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("rep", "x", "y"))
            w.writerow((0, repr(scatter.observed.x), repr(scatter.observed.y)))
            for i, (x, y) in enumerate(zip(scatter.xs.tolist(), scatter.ys.tolist()), start=1):
                w.writerow((i, repr(x), repr(y)))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None


def read_scatter_csv(
    path: str | Path,
    lam: Optional[ShadowPrice] = None,
    perspective: Perspective = Perspective.ALIAS,
) -> BootstrapScatter:
    """Read a scatter written by :func:`write_scatter_csv`.

    The file does not record the shadow price or perspective; pass them if
    the caller needs them (angles and counts do not).
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from None
    if not rows:
        raise EmptyFile(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if header[:3] != ["rep", "x", "y"]:
        raise MissingColumn("scatter file must have header rep,x,y")
    observed = None
    xs, ys = [], []
    for rownum, row in enumerate(rows[1:], start=1):
        try:
            rep, x, y = int(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError):
            raise NonNumericCell(rownum) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonNumericCell(rownum)
        if rep == 0:
            observed = (x, y)
        else:
            xs.append(x)
            ys.append(y)
    if observed is None:
        raise MissingColumn("scatter file lacks the observed row (rep=0)")
    lam = lam or ShadowPrice(1.0)
    return BootstrapScatter(IceOutcome(observed[0], observed[1], lam, Perspective.parse(perspective)), xs, ys)
