"""Text and JSON renderings of a classification report."""

from typing import List

from ajlint.classifier.patterns import InvasivenessPattern
from ajlint.classifier.report import AdviceFinding, ClassificationReport

FORMATS = ("text", "json")


def _pattern_label(finding: AdviceFinding, name: str) -> str:
    if name == InvasivenessPattern.REPLACEMENT.value and finding.flavor:
        return f"{name}({finding.flavor})"
    return name


def render_text(report: ClassificationReport) -> str:
    lines: List[str] = []
    for finding in report.findings:
        patterns = ",".join(_pattern_label(finding, name) for name in finding.patterns)
        lines.append(f"{finding.file}:{finding.advice.span.line}: {finding.advice.name} -> {patterns}")
    for entry in report.structural:
        lines.append(f"{entry.file}:{entry.span.line}: {entry.aspect} -> {entry.pattern} {entry.subject}")
    found = ", ".join(f"{name}={count}" for name, count in report.summary.counts.items() if count)
    lines.append(f"{len(report.findings)} advice(s), {len(report.structural)} structural finding(s)"
                 + (f": {found}" if found else ""))
    return "\n".join(lines) + "\n"


def render_report(report: ClassificationReport, output_format: str = "text") -> str:
    """
    Render ``report`` as ``text`` (one finding per line) or ``json`` (stable schema).

    Both renderings are deterministic: the same report always gives the same bytes.
    """
    if output_format == "json":
        return report.to_json()
    if output_format == "text":
        return render_text(report)
    raise ValueError(f"unknown format '{output_format}'")
