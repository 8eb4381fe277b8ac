from __future__ import annotations

from enum import Enum
from typing import FrozenSet, Iterable, List


class Category(str, Enum):
    CONTROL_FLOW = "ControlFlow"
    DATA_ACCESS = "DataAccess"
    STRUCTURAL = "Structural"


class InvasivenessPattern(str, Enum):
    """The invasiveness taxonomy; declaration order is the report order."""

    AUGMENTATION = "Augmentation"
    REPLACEMENT = "Replacement"
    CONDITIONAL_REPLACEMENT = "ConditionalReplacement"
    MULTIPLE = "Multiple"
    CROSSING = "Crossing"
    READ = "Read"
    WRITE = "Write"
    ARGUMENT_PASSING = "ArgumentPassing"
    HIERARCHY = "Hierarchy"
    FIELD_ADDITION = "FieldAddition"
    OPERATION_ADDITION = "OperationAddition"

    @property
    def category(self) -> Category:
        if self in _CONTROL_FLOW:
            return Category.CONTROL_FLOW
        if self in _DATA_ACCESS:
            return Category.DATA_ACCESS
        return Category.STRUCTURAL

    @classmethod
    def parse(cls, name: str) -> "InvasivenessPattern":
        """Look a pattern up by its report name; raises ValueError for unknown names."""
        try:
            return cls(name.strip())
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown pattern '{name.strip()}' (expected one of: {valid})") from None


_CONTROL_FLOW = frozenset({"Augmentation", "Replacement", "ConditionalReplacement", "Multiple", "Crossing"})
_DATA_ACCESS = frozenset({"Read", "Write", "ArgumentPassing"})

# Exactly one of these per advice.
EXCLUSIVE_CONTROL_FLOW: FrozenSet[InvasivenessPattern] = frozenset({
    InvasivenessPattern.AUGMENTATION,
    InvasivenessPattern.REPLACEMENT,
    InvasivenessPattern.CONDITIONAL_REPLACEMENT,
})

STRUCTURAL_PATTERNS: FrozenSet[InvasivenessPattern] = frozenset({
    InvasivenessPattern.HIERARCHY,
    InvasivenessPattern.FIELD_ADDITION,
    InvasivenessPattern.OPERATION_ADDITION,
})

SPECTATIVE_PATTERNS: FrozenSet[InvasivenessPattern] = frozenset({
    InvasivenessPattern.AUGMENTATION,
    InvasivenessPattern.READ,
})


class ReplacementFlavor(str, Enum):
    FULL = "full"
    RESULT = "result"


class Katz(str, Enum):
    SPECTATIVE = "Spectative"
    REGULATORY = "Regulatory"
    INVASIVE = "Invasive"


class CliftonLeavens(str, Enum):
    SPECTATOR = "Spectator"
    ASSISTANT = "Assistant"


def taxonomy_order(patterns: Iterable[InvasivenessPattern]) -> List[InvasivenessPattern]:
    chosen = set(patterns)
    return [p for p in InvasivenessPattern if p in chosen]
