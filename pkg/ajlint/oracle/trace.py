"""Execution trace recorded by the interpreter."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Hashable, Iterator, List, Optional, Tuple

BASE = "base"


class EventKind(str, Enum):
    METHOD_BODY_ENTER = "MethodBodyEnter"
    METHOD_BODY_EXIT = "MethodBodyExit"
    FIELD_READ = "FieldRead"
    FIELD_WRITE = "FieldWrite"
    ADVICE_ENTER = "AdviceEnter"
    ADVICE_EXIT = "AdviceExit"
    PROCEED_INVOKED = "ProceedInvoked"
    CALL_INVOKED = "CallInvoked"


OPENING = {EventKind.METHOD_BODY_ENTER: EventKind.METHOD_BODY_EXIT, EventKind.ADVICE_ENTER: EventKind.ADVICE_EXIT}
BASE_KINDS = frozenset({
    EventKind.METHOD_BODY_ENTER, EventKind.METHOD_BODY_EXIT, EventKind.FIELD_READ, EventKind.FIELD_WRITE,
})


@dataclass(frozen=True)
class TraceEvent:
    """
    One interpreter event.

    ``activation_id`` is the id of the frame that produced the event; Enter/Exit pairs
    carry the id of the frame they open and close. Values are stored frozen (see
    ``values.freeze``) so later heap mutation cannot change them.
    """

    kind: EventKind
    subject: str
    activation_id: int
    origin: str = BASE
    args: Tuple[Hashable, ...] = ()
    value: Optional[Hashable] = None
    reference: Optional[Hashable] = None
    declared_by: Optional[str] = None
    aspect_state: bool = False
    shadow: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["kind"] = self.kind.value
        return {k: v for k, v in data.items() if v not in (None, (), False) or k == "activation_id"}


@dataclass
class ExecutionTrace:
    events: List[TraceEvent] = field(default_factory=list)
    output: List[str] = field(default_factory=list)

    def record(self, event: TraceEvent) -> None:
        self.events.append(event)

    def __iter__(self) -> Iterator[TraceEvent]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def of_kind(self, kind: EventKind) -> List[TraceEvent]:
        return [e for e in self.events if e.kind is kind]

    def summary(self) -> Dict[str, Any]:
        counts: Dict[str, int] = {}
        for event in self.events:
            counts[event.kind.value] = counts.get(event.kind.value, 0) + 1
        return {"events": len(self.events), "by_kind": counts, "output_lines": len(self.output)}


def base_events(trace: ExecutionTrace) -> List[Tuple[str, str]]:
    """Base-program method and field events, in order."""
    return [
        (event.kind.value, event.subject)
        for event in trace
        if event.kind in BASE_KINDS and event.origin == BASE
    ]
