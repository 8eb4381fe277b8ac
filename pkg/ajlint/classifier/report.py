"""Report assembly and its stable JSON schema."""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

from ajlint import REPORT_SCHEMA_VERSION
from ajlint.classifier.invasiveness import AdviceClassification, StructuralFinding, classify_advice, classify_structural
from ajlint.classifier.patterns import InvasivenessPattern, taxonomy_order
from ajlint.flowanalysis.facts import AdviceFacts
from ajlint.model.program import AdviceDecl, ProgramModel
from ajlint.syntax.tokens import Span


class _Model(BaseModel):
    model_config = ConfigDict(populate_by_name=True, frozen=True)


class SpanModel(_Model):
    line: int
    column: int
    end_line: int = Field(alias="endLine")
    end_column: int = Field(alias="endColumn")

    @classmethod
    def of(cls, span: Span) -> "SpanModel":
        return cls(line=span.line, column=span.column, end_line=span.end_line, end_column=span.end_column)


class AdviceInfo(_Model):
    name: str
    kind: str
    span: SpanModel


class EvidenceEntry(_Model):
    pattern: str
    span: SpanModel


class CoarseMapping(_Model):
    katz: str
    clifton_leavens: str = Field(alias="cliftonLeavens")
    heuristic: bool = True


class AdviceFinding(_Model):
    file: str
    aspect: str
    advice: AdviceInfo
    patterns: List[str]
    flavor: Optional[str] = None
    evidence: List[EvidenceEntry]
    coarse: Optional[CoarseMapping] = None


class StructuralEntry(_Model):
    file: str
    aspect: str
    pattern: str
    subject: str
    span: SpanModel


class Summary(_Model):
    counts: Dict[str, int]


class ClassificationReport(_Model):
    version: int = REPORT_SCHEMA_VERSION
    findings: List[AdviceFinding] = Field(default_factory=list)
    structural: List[StructuralEntry] = Field(default_factory=list)
    summary: Summary = Field(default_factory=lambda: Summary(counts=zero_counts()))

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        return cls.model_validate_json(text)

    def patterns_found(self) -> List[str]:
        return [name for name, count in self.summary.counts.items() if count]


def zero_counts() -> Dict[str, int]:
    return {p.value: 0 for p in InvasivenessPattern}


def advice_finding(advice: AdviceDecl, result: AdviceClassification, map_taxonomies: bool = True) -> AdviceFinding:
    ordered = taxonomy_order(result.patterns)
    evidence = [
        EvidenceEntry(pattern=pattern.value, span=SpanModel.of(span))
        for pattern in ordered
        for span in sorted(set(result.evidence[pattern]))
    ]
    coarse = None
    if map_taxonomies:
        coarse = CoarseMapping(katz=result.katz.value, clifton_leavens=result.clifton_leavens.value)
    return AdviceFinding(
        file=advice.file,
        aspect=advice.aspect,
        advice=AdviceInfo(name=advice.ref, kind=advice.kind, span=SpanModel.of(advice.span)),
        patterns=[p.value for p in ordered],
        flavor=result.flavor.value if result.flavor else None,
        evidence=evidence,
        coarse=coarse,
    )


def structural_entry(finding: StructuralFinding) -> StructuralEntry:
    return StructuralEntry(
        file=finding.span.file,
        aspect=finding.aspect,
        pattern=finding.pattern.value,
        subject=finding.subject,
        span=SpanModel.of(finding.span),
    )


def build_report(
    model: ProgramModel,
    facts: Mapping[AdviceDecl, AdviceFacts],
    map_taxonomies: bool = True,
) -> ClassificationReport:
    """
    Assemble the classification report of a whole program.

    Findings are ordered by file and source position; summary counts are sums over the
    entries, each pattern counted once per advice or structural finding.
    """
    counts = zero_counts()
    findings: List[AdviceFinding] = []
    for advice in sorted(model.advices(), key=lambda a: a.span):
        result = classify_advice(facts[advice], advice.kind, advice.span, advice.ref)
        finding = advice_finding(advice, result, map_taxonomies)
        for name in finding.patterns:
            counts[name] += 1
        findings.append(finding)

    structural: List[StructuralEntry] = []
    for aspect in model.aspects_in_order():
        for item in classify_structural(aspect):
            counts[item.pattern.value] += 1
            structural.append(structural_entry(item))
    structural.sort(key=lambda e: (e.file, e.span.line, e.span.column))

    return ClassificationReport(findings=findings, structural=structural, summary=Summary(counts=counts))
