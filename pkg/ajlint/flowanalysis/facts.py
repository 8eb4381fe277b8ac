"""Per-advice facts consumed by the classifier."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Tuple

from ajlint.flowanalysis.access import FieldRef, crossing_sites, field_access_sites
from ajlint.flowanalysis.interval import ONE, ProceedInterval
from ajlint.flowanalysis.proceed import (
    argument_passing_sites,
    proceed_interval,
    proceed_sites,
    result_replacement_sites,
)
from ajlint.model.program import AdviceDecl, ProgramModel
from ajlint.pointcuts.shadows import ShadowSet, shadows_of
from ajlint.syntax.tokens import Span

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdviceFacts:
    interval: ProceedInterval
    replaces_result: bool
    modifies_proceed_args: bool
    fields_read: FrozenSet[FieldRef]
    fields_written: FrozenSet[FieldRef]
    external_calls: FrozenSet[str]
    shadows: ShadowSet
    # Evidence spans keyed by "proceed", "result", "arguments", "read", "write", "crossing".
    evidence: Mapping[str, Tuple[Span, ...]] = field(default_factory=dict)


def analyze_advice(advice: AdviceDecl, model: ProgramModel) -> AdviceFacts:
    """
    Run every flow analysis over one advice.

    Args:
        advice: The advice to analyze
        model: The resolved program the advice belongs to

    Returns:
        The advice's facts with evidence spans
    """
    shadows = shadows_of(advice, model)
    body = advice.body
    evidence: Dict[str, Tuple[Span, ...]] = {}

    if advice.kind == "around":
        interval = proceed_interval(body)
        returns = result_replacement_sites(body, advice.bound_params, advice.return_type not in (None, "void"))
        replaces = interval.min >= 1 and bool(returns)
        passing = argument_passing_sites(body, advice.bound_params)
        evidence["proceed"] = proceed_sites(body)
        if replaces:
            evidence["result"] = returns
        if passing:
            evidence["arguments"] = passing
    else:
        interval, replaces, passing = ONE, False, ()

    reads, writes = set(), set()
    read_spans, write_spans = [], []
    for mode, decl, span in field_access_sites(body, model):
        if mode == "write":
            writes.add((decl.owner, decl.name))
            write_spans.append(span)
        else:
            reads.add((decl.owner, decl.name))
            read_spans.append(span)
    if read_spans:
        evidence["read"] = tuple(read_spans)
    if write_spans:
        evidence["write"] = tuple(write_spans)

    calls = crossing_sites(body, shadows, model, advice.aspect)
    if calls:
        evidence["crossing"] = tuple(span for spans in calls.values() for span in spans)

    facts = AdviceFacts(
        interval=interval,
        replaces_result=replaces,
        modifies_proceed_args=bool(passing),
        fields_read=frozenset(reads),
        fields_written=frozenset(writes),
        external_calls=frozenset(calls),
        shadows=shadows,
        evidence=evidence,
    )
    logger.debug(f"{advice.ref}: interval {interval}, shadows {sorted(shadows.executions)}")
    return facts
