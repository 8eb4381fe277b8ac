"""Maps advice facts and aspect structure onto invasiveness patterns."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from ajlint.classifier.patterns import (
    EXCLUSIVE_CONTROL_FLOW,
    SPECTATIVE_PATTERNS,
    CliftonLeavens,
    InvasivenessPattern as P,
    Katz,
    ReplacementFlavor,
)
from ajlint.errors import InternalInconsistency
from ajlint.flowanalysis.facts import AdviceFacts
from ajlint.model.program import AspectDecl
from ajlint.syntax.tokens import Span

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdviceClassification:
    advice_ref: str
    patterns: FrozenSet[P]
    evidence: Dict[P, Tuple[Span, ...]]
    katz: Katz
    clifton_leavens: CliftonLeavens
    flavor: Optional[ReplacementFlavor] = None

    @property
    def control_flow(self) -> P:
        return next(iter(self.patterns & EXCLUSIVE_CONTROL_FLOW))


@dataclass(frozen=True)
class StructuralFinding:
    aspect: str
    pattern: P
    subject: str
    span: Span


def coarse_mapping(patterns: FrozenSet[P]) -> Tuple[Katz, CliftonLeavens]:
    """
    Heuristic mapping onto the coarse taxonomies.

    Spectative only for Augmentation/Read advices; Regulatory when nothing is written and
    no argument is changed; Invasive otherwise. Spectator coincides with Spectative.
    """
    if patterns <= SPECTATIVE_PATTERNS:
        return Katz.SPECTATIVE, CliftonLeavens.SPECTATOR
    if P.WRITE not in patterns and P.ARGUMENT_PASSING not in patterns:
        return Katz.REGULATORY, CliftonLeavens.ASSISTANT
    return Katz.INVASIVE, CliftonLeavens.ASSISTANT


def classify_advice(facts: AdviceFacts, kind: str, span: Span, advice_ref: str = "") -> AdviceClassification:
    """
    Classify one advice from its facts.

    Args:
        facts: Output of ``analyze_advice``
        kind: "before", "after" or "around"
        span: The advice declaration, used as evidence where no finer site exists
        advice_ref: Identifier carried into the result

    Returns:
        The advice's patterns, evidence and coarse mapping

    Raises:
        InternalInconsistency: if the result would break the one-control-flow-pattern rule
    """
    interval = facts.interval
    proceeds = tuple(facts.evidence.get("proceed", ())) or (span,)
    evidence: Dict[P, Tuple[Span, ...]] = {}
    flavor: Optional[ReplacementFlavor] = None

    if kind != "around":
        evidence[P.AUGMENTATION] = (span,)
    elif interval.max == 0:
        evidence[P.REPLACEMENT] = (span,)
        flavor = ReplacementFlavor.FULL
    elif interval.min >= 1 and facts.replaces_result:
        evidence[P.REPLACEMENT] = tuple(facts.evidence.get("result", ())) or (span,)
        flavor = ReplacementFlavor.RESULT
    elif interval.min >= 1:
        evidence[P.AUGMENTATION] = proceeds
    else:
        evidence[P.CONDITIONAL_REPLACEMENT] = proceeds

    if kind == "around" and interval.max >= 2:
        evidence[P.MULTIPLE] = proceeds
    if facts.external_calls:
        evidence[P.CROSSING] = tuple(facts.evidence.get("crossing", ())) or (span,)
    if facts.fields_read:
        evidence[P.READ] = tuple(facts.evidence.get("read", ())) or (span,)
    if facts.fields_written:
        evidence[P.WRITE] = tuple(facts.evidence.get("write", ())) or (span,)
    # Argument passing needs the body to run with the changed arguments on every activation.
    if kind == "around" and facts.modifies_proceed_args and interval.min >= 1:
        evidence[P.ARGUMENT_PASSING] = tuple(facts.evidence.get("arguments", ())) or (span,)

    patterns = frozenset(evidence)
    exclusive = patterns & EXCLUSIVE_CONTROL_FLOW
    if len(exclusive) != 1:
        raise InternalInconsistency(
            f"{advice_ref or kind} received control-flow patterns {sorted(p.value for p in exclusive)}", span
        )
    katz, clifton_leavens = coarse_mapping(patterns)
    logger.debug(f"{advice_ref}: {sorted(p.value for p in patterns)} -> {katz.value}")
    return AdviceClassification(advice_ref, patterns, evidence, katz, clifton_leavens, flavor)


def classify_structural(aspect: AspectDecl) -> List[StructuralFinding]:
    """One finding per declare-parents, inter-type field and inter-type method, in source order."""
    findings: List[StructuralFinding] = []
    for parent in aspect.parent_decls:
        findings.append(StructuralFinding(
            aspect.name, P.HIERARCHY, f"{parent.target} implements {parent.interface}", parent.span
        ))
    for decl in aspect.inter_type_fields:
        findings.append(StructuralFinding(aspect.name, P.FIELD_ADDITION, decl.qualified_name, decl.span))
    for decl in aspect.inter_type_methods:
        findings.append(StructuralFinding(aspect.name, P.OPERATION_ADDITION, decl.qualified_name, decl.span))
    return sorted(findings, key=lambda f: f.span)
