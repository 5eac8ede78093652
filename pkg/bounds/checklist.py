"""
Named hypothesis checks with numeric margins, shared by both bound pipelines
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List


class Target(str, Enum):
    MU0 = "mu0"
    MU1 = "mu1"


# relative slack within which a "<" check counts as the boundary case
LIMITING_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ChecklistItem:
    """lhs < rhs (or lhs <= rhs when not strict); margin = rhs - lhs"""

    name: str
    lhs: float
    rhs: float
    satisfied: bool
    margin: float
    strict: bool = True
    limiting: bool = False
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "margin": self.margin,
            "strict": self.strict,
            "limiting": self.limiting,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> ChecklistItem:
        return cls(
            name=data["name"],
            lhs=float(data["lhs"]),
            rhs=float(data["rhs"]),
            satisfied=bool(data["satisfied"]),
            margin=float(data["margin"]),
            strict=bool(data.get("strict", True)),
            limiting=bool(data.get("limiting", False)),
            note=data.get("note", ""),
        )


@dataclass
class HypothesisChecklist:
    items: List[ChecklistItem] = field(default_factory=list)

    def require_less(self, name: str, lhs: float, rhs: float, strict: bool = True,
                     allow_limiting: bool = False, note: str = "") -> ChecklistItem:
        """
        Record lhs < rhs (lhs <= rhs when strict is False).

        With allow_limiting, equality up to LIMITING_TOLERANCE passes and is marked
        as a limiting case. NaN on either side fails.
        """
        lhs = float(lhs)
        rhs = float(rhs)
        margin = rhs - lhs
        if math.isnan(margin):
            satisfied = False
            limiting = False
        else:
            limiting = allow_limiting and abs(margin) <= LIMITING_TOLERANCE * max(abs(lhs), abs(rhs), 1.0)
            satisfied = (margin > 0.0) if strict else (margin >= 0.0)
            satisfied = satisfied or limiting
        item = ChecklistItem(name=name, lhs=lhs, rhs=rhs, satisfied=satisfied, margin=margin,
                             strict=strict, limiting=limiting, note=note)
        self.items.append(item)
        return item

    @property
    def passed(self) -> bool:
        return all(item.satisfied for item in self.items)

    def failed(self) -> List[str]:
        return [item.name for item in self.items if not item.satisfied]

    def warnings(self) -> List[str]:
        return [f"{item.name}: limiting case (margin {item.margin:.3e})" for item in self.items if item.limiting]

    def get(self, name: str) -> ChecklistItem:
        for item in self.items:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "items": [item.to_dict() for item in self.items]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> HypothesisChecklist:
        return cls(items=[ChecklistItem.from_dict(item) for item in data.get("items", [])])
