from ajlint.oracle.interpreter import DEFAULT_FUEL, Interpreter, interpret
from ajlint.oracle.observe import Observation, Violation, check_containment, observe
from ajlint.oracle.trace import EventKind, ExecutionTrace, TraceEvent, base_events

__all__ = [
    "DEFAULT_FUEL", "EventKind", "ExecutionTrace", "Interpreter", "Observation", "TraceEvent",
    "Violation", "base_events", "check_containment", "interpret", "observe",
]
