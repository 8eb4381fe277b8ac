from ajlint.classifier.invasiveness import (
    AdviceClassification,
    StructuralFinding,
    classify_advice,
    classify_structural,
    coarse_mapping,
)
from ajlint.classifier.patterns import CliftonLeavens, InvasivenessPattern, Katz, ReplacementFlavor
from ajlint.classifier.report import ClassificationReport, build_report

__all__ = [
    "AdviceClassification", "ClassificationReport", "CliftonLeavens", "InvasivenessPattern",
    "Katz", "ReplacementFlavor", "StructuralFinding", "build_report", "classify_advice",
    "classify_structural", "coarse_mapping",
]
