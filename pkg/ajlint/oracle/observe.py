"""Per-activation observations derived from a trace, and their containment in the static facts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional

from ajlint.errors import MalformedTrace
from ajlint.flowanalysis.facts import AdviceFacts
from ajlint.model.program import AdviceDecl
from ajlint.oracle.trace import OPENING, EventKind, ExecutionTrace, TraceEvent

logger = logging.getLogger(__name__)

ROOT_ACTIVATION = 0


@dataclass
class Observation:
    advice_ref: str
    activation_id: int
    kind: str
    proceed_count: int = 0
    args_modified: bool = False
    result_modified: bool = False
    fields_read: FrozenSet[str] = frozenset()
    fields_written: FrozenSet[str] = frozenset()
    calls: FrozenSet[str] = frozenset()
    shadow: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    advice_ref: str
    activation_id: int
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.advice_ref} (activation {self.activation_id}): {self.rule}: {self.message}"


@dataclass
class _Open:
    enter: TraceEvent
    observation: Optional[Observation] = None
    reads: set = field(default_factory=set)
    writes: set = field(default_factory=set)
    calls: set = field(default_factory=set)


def observe(trace: ExecutionTrace, advices: Iterable[AdviceDecl]) -> List[Observation]:
    """
    One observation per advice activation found in ``trace``.

    Field accesses and calls count only when made by the advice body itself; accesses to
    aspect state and calls to the aspect's own members are left out. Before and after
    advices never hold the body back, so their proceed count is 1.

    Raises:
        MalformedTrace: when Enter/Exit events are not properly nested or an event is
            attributed to an activation that is not the innermost open one
    """
    by_ref: Dict[str, AdviceDecl] = {advice.ref: advice for advice in advices}
    stack: List[_Open] = []
    observations: List[Observation] = []

    for event in trace:
        current = stack[-1].enter.activation_id if stack else ROOT_ACTIVATION
        if event.kind in OPENING:
            stack.append(_Open(event, _start(event, by_ref)))
            continue
        if event.kind in (EventKind.METHOD_BODY_EXIT, EventKind.ADVICE_EXIT):
            if not stack:
                raise MalformedTrace(f"{event.kind.value} without a matching enter", event)
            top = stack.pop()
            if OPENING[top.enter.kind] is not event.kind or top.enter.activation_id != event.activation_id:
                raise MalformedTrace(
                    f"{event.kind.value} of activation {event.activation_id} closes "
                    f"{top.enter.kind.value} of activation {top.enter.activation_id}",
                    event,
                )
            if top.observation is not None:
                _finish(top, event, observations)
            continue
        if event.activation_id != current:
            raise MalformedTrace(
                f"{event.kind.value} attributed to activation {event.activation_id} inside activation {current}",
                event,
            )
        if stack and stack[-1].observation is not None:
            _record(stack[-1], event)

    if stack:
        raise MalformedTrace(f"{len(stack)} activation(s) never closed", stack[-1].enter)
    return observations


def _start(event: TraceEvent, by_ref: Mapping[str, AdviceDecl]) -> Optional[Observation]:
    if event.kind is not EventKind.ADVICE_ENTER:
        return None
    advice = by_ref.get(event.subject)
    if advice is None:
        raise MalformedTrace(f"unknown advice '{event.subject}'", event)
    count = 1 if advice.kind != "around" else 0
    return Observation(event.subject, event.activation_id, advice.kind, proceed_count=count, shadow=event.shadow)


def _record(frame: _Open, event: TraceEvent) -> None:
    observation = frame.observation
    aspect = frame.enter.declared_by
    if event.kind is EventKind.PROCEED_INVOKED:
        observation.proceed_count += 1
        if event.args != frame.enter.args:
            observation.args_modified = True
    elif event.kind is EventKind.FIELD_READ and not event.aspect_state:
        frame.reads.add(event.subject)
    elif event.kind is EventKind.FIELD_WRITE and not event.aspect_state:
        frame.writes.add(event.subject)
    elif event.kind is EventKind.CALL_INVOKED and event.declared_by != aspect:
        frame.calls.add(event.subject)


def _finish(frame: _Open, exit_event: TraceEvent, observations: List[Observation]) -> None:
    observation = frame.observation
    observation.fields_read = frozenset(frame.reads)
    observation.fields_written = frozenset(frame.writes)
    observation.calls = frozenset(frame.calls)
    # A failed reference execution leaves nothing to compare against.
    if observation.kind == "around" and exit_event.reference is not None:
        observation.result_modified = exit_event.value != exit_event.reference
    observations.append(observation)


def check_containment(
    observations: Iterable[Observation],
    facts_by_ref: Mapping[str, AdviceFacts],
) -> List[Violation]:
    """
    Every way an observed activation escapes the static facts of its advice.

    Args:
        observations: Output of ``observe``
        facts_by_ref: Static facts keyed by advice reference ("Aspect.kind#n")

    Returns:
        The violations; empty when the static analyses predicted everything observed
    """
    violations: List[Violation] = []
    for obs in observations:
        facts = facts_by_ref.get(obs.advice_ref)
        if facts is None:
            violations.append(Violation(obs.advice_ref, obs.activation_id, "facts", "no static facts for advice"))
            continue

        def report(rule: str, message: str) -> None:
            violations.append(Violation(obs.advice_ref, obs.activation_id, rule, message))

        if obs.proceed_count not in facts.interval:
            report("interval", f"proceed executed {obs.proceed_count} time(s), outside {facts.interval}")
        if obs.shadow is not None and obs.shadow not in facts.shadows.keys():
            report("shadow", f"activated at {obs.shadow}, which is not a static shadow")

        static_reads = {f"{owner}.{name}" for owner, name in facts.fields_read}
        static_writes = {f"{owner}.{name}" for owner, name in facts.fields_written}
        for subject in sorted(obs.fields_read - static_reads):
            report("read", f"field {subject} read but not predicted")
        for subject in sorted(obs.fields_written - static_writes):
            report("write", f"field {subject} written but not predicted")

        crossing = {name for name in obs.calls if name not in facts.shadows.executions}
        for name in sorted(crossing - facts.external_calls):
            report("crossing", f"call of {name} not predicted")

        if obs.args_modified and not facts.modifies_proceed_args:
            report("arguments", "proceed received modified arguments")
        if obs.result_modified and not (
            facts.replaces_result or facts.interval.min == 0 or facts.interval.is_many or facts.interval.max >= 2
        ):
            report("result", "result differs from the unadvised execution")

    for violation in violations:
        logger.warning(f"Containment violation: {violation}")
    return violations
