"""Two-arm patient data: records, CSV ingestion, summaries and a demo generator.

The CSV layout is ``trtm,effe,cost`` with ``trtm`` 0 for the standard arm and
1 for the new arm.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArmTooSmall,
    EmptyFile,
    IoError,
    MissingColumn,
    NonNumericCell,
    UnknownArmCode,
)

COLUMNS = ("trtm", "effe", "cost")


class Arm(enum.IntEnum):
    STD = 0
    NEW = 1

    @property
    def label(self) -> str:
        return "Std" if self is Arm.STD else "New"


@dataclass(frozen=True)
class PatientRecord:
    arm: Arm
    effe: float
    cost: float

    def __post_init__(self):
        if not (math.isfinite(self.effe) and math.isfinite(self.cost)):
            raise ValueError(f"non-finite patient record: {self}")


@dataclass(frozen=True)
class ArmSample:
    arm: Arm
    records: tuple[PatientRecord, ...]
    effe: np.ndarray = field(init=False, repr=False, compare=False)
    cost: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        if len(records) < 2:
            raise ArmTooSmall(self.arm.label)
        if any(r.arm != self.arm for r in records):
            raise ValueError(f"record with wrong arm in {self.arm.label} sample")
        effe = np.array([r.effe for r in records], dtype=float)
        cost = np.array([r.cost for r in records], dtype=float)
        effe.flags.writeable = False
        cost.flags.writeable = False
        object.__setattr__(self, "effe", effe)
        object.__setattr__(self, "cost", cost)

    @property
    def n(self) -> int:
        return len(self.records)

    def values(self, variable: str) -> np.ndarray:
        if variable == "effe":
            return self.effe
        if variable == "cost":
            return self.cost
        raise ValueError(f"unknown variable {variable!r}; expected 'effe' or 'cost'")

    @classmethod
    def from_arrays(cls, arm: Arm, effe: Sequence[float], cost: Sequence[float]) -> "ArmSample":
        return cls(arm, tuple(PatientRecord(arm, float(e), float(c)) for e, c in zip(effe, cost)))


@dataclass(frozen=True)
class SummaryStats:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float
    sd: float

    def as_row(self) -> tuple[float, ...]:
        return (self.min, self.q1, self.median, self.mean, self.q3, self.max, self.sd)


def _quantile(sorted_values: np.ndarray, p: float) -> float:
    # 1-based position h = (n-1)p + 1, linear between neighbouring order statistics
    n = len(sorted_values)
    h = (n - 1) * p
    lo = math.floor(h)
    hi = min(lo + 1, n - 1)
    frac = h - lo
    a, b = float(sorted_values[lo]), float(sorted_values[hi])
    if frac == 0.0 or a == b:
        return a
    return a + frac * (b - a)


def summarize(sample: ArmSample, variable: str) -> SummaryStats:
    """Six-number summary plus sample standard deviation (divisor n - 1).

    Sums are exactly rounded (``math.fsum``) so the result does not depend on
    record order.
    """
    values = sample.values(variable)
    n = len(values)
    if n < 2:
        raise ArmTooSmall(sample.arm.label)
    ordered = np.sort(values)
    mean = math.fsum(values) / n
    # clamp guards the last-ulp case where rounding pushes the mean past an extreme
    mean = min(max(mean, float(ordered[0])), float(ordered[-1]))
    ss = math.fsum((float(v) - mean) ** 2 for v in values)
    return SummaryStats(
        min=float(ordered[0]),
        q1=_quantile(ordered, 0.25),
        median=_quantile(ordered, 0.5),
        mean=mean,
        q3=_quantile(ordered, 0.75),
        max=float(ordered[-1]),
        sd=math.sqrt(ss / (n - 1)),
    )


def _parse_float(text: str, row: int) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise NonNumericCell(row) from None
    if not math.isfinite(value):
        raise NonNumericCell(row)
    return value


def ingest_csv(path: str | Path) -> tuple[ArmSample, ArmSample]:
    """Read a ``trtm,effe,cost`` file into (Std, New) samples.

    Row numbers in errors count data rows from 1 (the header is row 0).
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from None

    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise EmptyFile(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise MissingColumn(f"missing column(s): {', '.join(missing)}")
    idx = {c: header.index(c) for c in COLUMNS}

    by_arm: dict[Arm, list[PatientRecord]] = {Arm.STD: [], Arm.NEW: []}
    for rownum, row in enumerate(rows[1:], start=1):
        if len(row) < len(header):
            raise NonNumericCell(rownum, f"row {rownum} has {len(row)} cells, expected {len(header)}")
        code_text = row[idx["trtm"]].strip()
        try:
            code = float(code_text)
        except ValueError:
            raise UnknownArmCode(rownum) from None
        if code not in (0.0, 1.0):
            raise UnknownArmCode(rownum)
        arm = Arm(int(code))
        effe = _parse_float(row[idx["effe"]].strip(), rownum)
        cost = _parse_float(row[idx["cost"]].strip(), rownum)
        by_arm[arm].append(PatientRecord(arm, effe, cost))

    for arm in (Arm.STD, Arm.NEW):
        if len(by_arm[arm]) < 2:
            raise ArmTooSmall(arm.label)
    return ArmSample(Arm.STD, tuple(by_arm[Arm.STD])), ArmSample(Arm.NEW, tuple(by_arm[Arm.NEW]))


def write_csv(records: Iterable[PatientRecord], path: str | Path) -> None:
    """Write records as ``trtm,effe,cost``; floats use shortest round-trip text."""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            for r in records:
                writer.writerow((int(r.arm), repr(float(r.effe)), repr(float(r.cost))))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None


def samples_to_records(std: ArmSample, new: ArmSample) -> list[PatientRecord]:
    return list(std.records) + list(new.records)


# Demo generator targets: (mean, sd) per arm and variable. Means follow the
# published summary table; SDs are read off its interquartile ranges
# (IQR / 1.35).
DEMO_SIZES = {Arm.STD: 99, Arm.NEW: 101}
DEMO_TARGETS = {
    Arm.STD: {"effe": (3.65, 1.62), "cost": (76.5, 33.0)},
    Arm.NEW: {"effe": (4.00, 1.39), "cost": (68.8, 31.4)},
}
DEMO_CORRELATION = 0.5


def _gamma_shape_scale(mean: float, sd: float) -> tuple[float, float]:
    return (mean / sd) ** 2, sd * sd / mean


def generate_demo_data(seed: int) -> list[PatientRecord]:
    """Simulate 99 Std and 101 New patients with right-skewed, positive outcomes.

    Each patient's effectiveness and cost are gamma variates sharing a common
    gamma component, which induces a positive within-patient correlation:

        effe = scale_e * (A + B_e),  cost = scale_c * (A + B_c)
        A ~ Gamma(a),  B_e ~ Gamma(k_e - a),  B_c ~ Gamma(k_c - a)
        a = rho * sqrt(k_e * k_c)

    so that effe ~ Gamma(k_e, scale_e), cost ~ Gamma(k_c, scale_c) and
    corr(effe, cost) = rho = ``DEMO_CORRELATION``. Shapes and scales are
    moment-matched to ``DEMO_TARGETS``.

    Draw order with ``numpy.random.Generator(PCG64(seed))``: the Std arm
    first, then New; within an arm the vectors A, B_e, B_c are drawn in that
    order. Records are returned Std first.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out: list[PatientRecord] = []
    for arm in (Arm.STD, Arm.NEW):
        n = DEMO_SIZES[arm]
        ke, se = _gamma_shape_scale(*DEMO_TARGETS[arm]["effe"])
        kc, sc = _gamma_shape_scale(*DEMO_TARGETS[arm]["cost"])
        a = DEMO_CORRELATION * math.sqrt(ke * kc)
        shared = rng.gamma(a, size=n)
        be = rng.gamma(ke - a, size=n)
        bc = rng.gamma(kc - a, size=n)
        effe = se * (shared + be)
        cost = sc * (shared + bc)
        out.extend(PatientRecord(arm, float(e), float(c)) for e, c in zip(effe, cost))
    return out


def split_arms(records: Iterable[PatientRecord]) -> tuple[ArmSample, ArmSample]:
    records = list(records)
    std = tuple(r for r in records if r.arm == Arm.STD)
    new = tuple(r for r in records if r.arm == Arm.NEW)
    return ArmSample(Arm.STD, std), ArmSample(Arm.NEW, new)
