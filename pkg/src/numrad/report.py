from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and complex numbers into JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            return float(value.real)
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality ``lhs <= rhs`` where lhs is a power of v(a).

    ``lhs`` is computed from enclosure uppers, so ``margin = rhs - lhs`` is a
    conservative figure.
    """

    bound_id: str
    power: int
    lhs: float
    rhs: float
    params: dict = field(default_factory=dict)
    components: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def tightness(self) -> float:
        if self.rhs > 0:
            return self.lhs / self.rhs
        return 1.0 if self.lhs <= 0 else float("inf")

    def holds(self, rel_slack: float = 1e-9) -> bool:
        return self.margin >= -rel_slack * max(1.0, self.rhs)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "bound_id": self.bound_id,
                "power": self.power,
                "params": self.params,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "margin": self.margin,
                "tightness": self.tightness,
                "components": self.components,
            }
        )


@dataclass(frozen=True)
class PredicateReport:
    """Outcome of a yes/no property check; ``holds`` is True when not applicable."""

    name: str
    applicable: bool
    holds: bool
    ratio: float = 1.0
    margin: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "name": self.name,
                "applicable": self.applicable,
                "holds": self.holds,
                "ratio": self.ratio,
                "margin": self.margin,
                "details": self.details,
            }
        )
