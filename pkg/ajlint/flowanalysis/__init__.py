from ajlint.flowanalysis.access import detect_crossing, detect_field_access
from ajlint.flowanalysis.facts import AdviceFacts, analyze_advice
from ajlint.flowanalysis.interval import MANY, ProceedInterval
from ajlint.flowanalysis.paths import enumerate_proceed_counts
from ajlint.flowanalysis.proceed import detect_argument_passing, detect_result_replacement, proceed_interval

__all__ = [
    "MANY", "AdviceFacts", "ProceedInterval", "analyze_advice", "detect_argument_passing",
    "detect_crossing", "detect_field_access", "detect_result_replacement",
    "enumerate_proceed_counts", "proceed_interval",
]
