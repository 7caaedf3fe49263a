"""Cost-effectiveness frontier: strict dominance, extended dominance, mixtures."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import DuplicateName, EmptyFile, IoError, MissingColumn, NonNumericCell, OutsideBracket


@dataclass(frozen=True)
class TreatmentOption:
    name: str
    effe: float
    cost: float

    def __post_init__(self):
        if not (math.isfinite(self.effe) and math.isfinite(self.cost)):
            raise ValueError(f"option {self.name!r} has non-finite coordinates")


@dataclass
class FrontierResult:
    frontier: list[TreatmentOption]
    dominated: list[tuple[TreatmentOption, str]] = field(default_factory=list)
    extendedly_dominated: list[tuple[TreatmentOption, tuple[str, str]]] = field(default_factory=list)

    @property
    def frontier_names(self) -> list[str]:
        return [o.name for o in self.frontier]

    def incremental_ratios(self) -> list[tuple[str, str, Optional[float]]]:
        """ICER between each adjacent pair of frontier options (None for equal effe)."""
        out = []
        for a, b in zip(self.frontier, self.frontier[1:]):
            de = b.effe - a.effe
            out.append((a.name, b.name, (b.cost - a.cost) / de if de else None))
        return out


def _check_names(options: list[TreatmentOption]) -> None:
    seen = set()
    for o in options:
        if o.name in seen:
            raise DuplicateName(f"option name {o.name!r} used twice")
        seen.add(o.name)


def _dominates(q: TreatmentOption, p: TreatmentOption) -> bool:
    return q.effe >= p.effe and q.cost <= p.cost and (q.effe > p.effe or q.cost < p.cost)


def strict_dominance(options: Iterable[TreatmentOption]):
    """Split options into (kept, dominated); dominated entries carry one dominator's name.

    The recorded dominator is the cheapest, then most effective, of those
    that dominate, so the witness does not depend on input order.
    """
    options = list(options)
    _check_names(options)
    kept, dominated = [], []
    for p in options:
        witnesses = [q for q in options if _dominates(q, p)]
        if witnesses:
            best = min(witnesses, key=lambda q: (q.cost, -q.effe, q.name))
            dominated.append((p, best.name))
        else:
            kept.append(p)
    return kept, dominated


def _cross(o: TreatmentOption, a: TreatmentOption, b: TreatmentOption) -> float:
    return (a.effe - o.effe) * (b.cost - o.cost) - (a.cost - o.cost) * (b.effe - o.effe)


def extended_dominance(kept: Iterable[TreatmentOption]) -> FrontierResult:
    """Lower convex boundary of strict-dominance survivors.

    Points strictly above a hull segment are extendedly dominated and are
    reported with the two frontier options that bracket them. Points exactly
    on a segment stay on the frontier.
    """
    pts = sorted(kept, key=lambda o: (o.effe, o.cost, o.name))
    # identical coordinates share one hull vertex; zero-length edges would hide turns
    groups: dict[tuple[float, float], list[TreatmentOption]] = {}
    for p in pts:
        groups.setdefault((p.effe, p.cost), []).append(p)
    chain: list[TreatmentOption] = []
    for members in groups.values():
        p = members[0]
        # pop the middle point only when it lies strictly above the chord
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) < 0:
            chain.pop()
        chain.append(p)
    hull = [m for v in chain for m in groups[(v.effe, v.cost)]]

    on_hull = {id(o) for o in hull}
    ext = []
    for p in pts:
        if id(p) in on_hull:
            continue
        left = max((h for h in hull if h.effe < p.effe), key=lambda h: h.effe)
        right = min((h for h in hull if h.effe > p.effe), key=lambda h: h.effe)
        ext.append((p, (left.name, right.name)))
    return FrontierResult(frontier=hull, extendedly_dominated=ext)


def compute_frontier(options: Iterable[TreatmentOption]) -> FrontierResult:
    kept, dominated = strict_dominance(options)
    result = extended_dominance(kept)
    result.dominated = dominated
    return result


def mixture_compare(target: TreatmentOption, left: TreatmentOption, right: TreatmentOption) -> tuple[float, float]:
    """Weight on ``left`` of the left/right mixture matching ``target``'s effectiveness,
    and the cost the mixture saves relative to ``target``."""
    if not (left.effe < target.effe < right.effe):
        raise OutsideBracket(
            f"{target.name} (effe {target.effe}) is not strictly between {left.name} and {right.name}"
        )
    w = (right.effe - target.effe) / (right.effe - left.effe)
    mix_cost = w * left.cost + (1.0 - w) * right.cost
    return w, target.cost - mix_cost


def read_options_csv(path: str | Path) -> list[TreatmentOption]:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            rows = [r for r in csv.reader(fh) if any(c.strip() for c in r)]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from None
    if not rows:
        raise EmptyFile(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    for col in ("name", "effe", "cost"):
        if col not in header:
            raise MissingColumn(f"missing column: {col}")
    i_n, i_e, i_c = header.index("name"), header.index("effe"), header.index("cost")
    out = []
    for rownum, row in enumerate(rows[1:], start=1):
        try:
            e, c = float(row[i_e]), float(row[i_c])
        except (ValueError, IndexError):
            raise NonNumericCell(rownum) from None
        if not (math.isfinite(e) and math.isfinite(c)):
            raise NonNumericCell(rownum)
        out.append(TreatmentOption(row[i_n].strip(), e, c))
    _check_names(out)
    return out
