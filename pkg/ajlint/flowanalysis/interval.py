from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

# Upper bound meaning "more than any fixed count"; compares greater than every integer.
MANY = math.inf

Count = Union[int, float]


@dataclass(frozen=True)
class ProceedInterval:
    """Bounds on how many times one advice activation runs the intercepted body.

    The empty interval (``lower > upper``) stands for "no path reaches here".
    """

    min: int
    max: Count

    @classmethod
    def exactly(cls, count: int) -> "ProceedInterval":
        return cls(count, count)

    @classmethod
    def empty(cls) -> "ProceedInterval":
        return cls(1, 0)

    @classmethod
    def abstract(cls, counts: Iterable[int]) -> "ProceedInterval":
        counts = list(counts)
        if not counts:
            return cls.empty()
        return cls(min(counts), max(counts))

    @property
    def is_empty(self) -> bool:
        return self.min > self.max

    @property
    def is_many(self) -> bool:
        return self.max == MANY

    def __or__(self, other: "ProceedInterval") -> "ProceedInterval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return ProceedInterval(min(self.min, other.min), max(self.max, other.max))

    def __add__(self, other: "ProceedInterval") -> "ProceedInterval":
        # Saturating: inf + n stays inf.
        if self.is_empty or other.is_empty:
            return ProceedInterval.empty()
        return ProceedInterval(self.min + other.min, self.max + other.max)

    def __le__(self, other: "ProceedInterval") -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return other.min <= self.min and self.max <= other.max

    def __contains__(self, count: int) -> bool:
        return not self.is_empty and self.min <= count <= self.max

    def __str__(self) -> str:
        if self.is_empty:
            return "()"
        upper = "MANY" if self.is_many else str(self.max)
        return f"({self.min}, {upper})"

    def to_dict(self):
        return {"min": self.min, "max": "MANY" if self.is_many else self.max}


ZERO = ProceedInterval.exactly(0)
ONE = ProceedInterval.exactly(1)
UNBOUNDED = ProceedInterval(0, MANY)
