"""Shadow price of health and alias/alibi standardization of ICE differences."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .data_model import ArmSample, summarize
from .errors import InvalidShadowPrice, ZeroEffeVariance


class PriceSource(enum.Enum):
    USER_SUPPLIED = "UserSupplied"
    STATISTICAL_RATIO = "StatisticalRatio"
    NEAREST_POWER_OF_10 = "NearestPowerOf10"


class Perspective(enum.Enum):
    ALIAS = "alias"  # effectiveness units: (dE, dC / lambda)
    ALIBI = "alibi"  # cost units: (lambda * dE, dC)

    @classmethod
    def parse(cls, text: "str | Perspective") -> "Perspective":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).lower())
        except ValueError:
            raise ValueError(f"perspective must be 'alias' or 'alibi', got {text!r}") from None


@dataclass(frozen=True)
class ShadowPrice:
    value: float
    source: PriceSource = PriceSource.USER_SUPPLIED

    def __post_init__(self):
        v = self.value
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
            raise InvalidShadowPrice(f"shadow price must be a positive finite number, got {v!r}")
        object.__setattr__(self, "value", float(v))


@dataclass(frozen=True)
class IceOutcome:
    x: float
    y: float
    lam: ShadowPrice
    perspective: Perspective

    def to(self, perspective: Perspective) -> "IceOutcome":
        if perspective is self.perspective:
            return self
        lam = self.lam.value
        if perspective is Perspective.ALIBI:
            return IceOutcome(self.x * lam, self.y * lam, self.lam, perspective)
        return IceOutcome(self.x / lam, self.y / lam, self.lam, perspective)

    @property
    def delta_e(self) -> float:
        return self.x if self.perspective is Perspective.ALIAS else self.x / self.lam.value

    @property
    def delta_c(self) -> float:
        return self.y * self.lam.value if self.perspective is Perspective.ALIAS else self.y


def nearest_power_of_10(ratio: float) -> ShadowPrice:
    """Integer power of 10 closest to ``ratio`` on the log scale (half-decade ties round up)."""
    if not math.isfinite(ratio) or ratio <= 0:
        raise InvalidShadowPrice(f"ratio must be positive and finite, got {ratio!r}")
    exponent = math.floor(math.log10(ratio) + 0.5)
    return ShadowPrice(10.0 ** exponent, PriceSource.NEAREST_POWER_OF_10)


def _spread(std: ArmSample, new: ArmSample, variable: str, rule: str) -> float:
    s_std = summarize(std, variable).sd
    s_new = summarize(new, variable).sd
    if rule == "se":
        return math.sqrt(s_std**2 / std.n + s_new**2 / new.n)
    if rule == "pooled":
        df = std.n + new.n - 2
        return math.sqrt(((std.n - 1) * s_std**2 + (new.n - 1) * s_new**2) / df)
    raise ValueError(f"scale rule must be 'se' or 'pooled', got {rule!r}")


def ice_scale(std: ArmSample, new: ArmSample, rule: str = "se") -> tuple[float, ShadowPrice]:
    """Statistical cost/effectiveness spread ratio and the recommended power-of-10 price.

    ``rule="se"`` uses the standard errors of the two between-arm mean
    differences; ``rule="pooled"`` uses pooled within-arm standard deviations.
    """
    s_effe = _spread(std, new, "effe", rule)
    if s_effe == 0:
        raise ZeroEffeVariance("effectiveness shows no variability in either arm")
    ratio = _spread(std, new, "cost", rule) / s_effe
    return ratio, nearest_power_of_10(ratio)


def standardize(delta_e: float, delta_c: float, lam: ShadowPrice, perspective: Perspective) -> IceOutcome:
    if perspective is Perspective.ALIAS:
        return IceOutcome(float(delta_e), float(delta_c) / lam.value, lam, perspective)
    return IceOutcome(float(delta_e) * lam.value, float(delta_c), lam, perspective)
