from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TestKind(str, Enum):
    __test__ = False

    INDEPENDENCE = "independence"
    GAUSSIANITY = "gaussianity"


@dataclass(frozen=True)
class TestDecision:
    """Outcome of one hypothesis test.

    ``phi`` follows the acceptance convention: 1 when the null is not
    rejected, 0 when it is.
    """

    __test__ = False

    kind: TestKind
    statistic: float
    p_value: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value {self.p_value} outside [0, 1]")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha {self.alpha} outside (0, 1)")

    @property
    def reject(self) -> bool:
        return self.p_value < self.alpha

    @property
    def accept(self) -> bool:
        return not self.reject

    @property
    def phi(self) -> int:
        return 0 if self.reject else 1

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "statistic": float(self.statistic),
            "p_value": float(self.p_value),
            "alpha": float(self.alpha),
            "reject": self.reject,
            "phi": self.phi,
        }
