import json

from ajlint.pipeline import AnalysisPipeline
from tests.conftest import GOLDEN_DIR


def analyze(sources):
    return AnalysisPipeline().analyze_sources(sources)


def test_example_report_matches_golden(example_sources):
    result = analyze(example_sources)
    assert result.exit_status == 0
    expected = json.loads((GOLDEN_DIR / "example_report.json").read_text(encoding="utf-8"))
    assert json.loads(result.report.to_json()) == expected


def test_report_bytes_are_stable(example_sources):
    assert analyze(example_sources).report.to_json() == analyze(list(reversed(example_sources))).report.to_json()
