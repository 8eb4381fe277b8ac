import logging
from typing import Any, Dict, Iterable, List, Optional, Tuple

from ajlint.classifier.patterns import InvasivenessPattern
from ajlint.classifier.report import ClassificationReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL_ON = 1
EXIT_INPUT_ERROR = 2
EXIT_VERIFICATION = 3


class PolicyRouter:
    """
    Policy Router that turns an analysis outcome into the process exit status.
    Precedence: input/syntax/model errors (2) over verification failures (3) over
    fail-on findings (1) over a clean run (0).
    """

    def __init__(self, run_store=None):
        self.run_store = run_store

    def route(
        self,
        run_id: Optional[str],
        report: Optional[ClassificationReport],
        fail_on: Iterable[InvasivenessPattern] = (),
        errors: int = 0,
        verification_failed: bool = False,
    ) -> int:
        """
        Decide the exit status of a run

        Args:
            run_id: Run to record the decision under (None to skip recording)
            report: The classification report, absent when analysis stopped early
            fail_on: Patterns that fail the run when found
            errors: Number of lex/parse/model/input errors
            verification_failed: Whether the dynamic check found violations or faulted

        Returns:
            The exit status
        """
        triggered = self.triggered_patterns(report, fail_on)
        exit_status, reason = self._decide(errors, verification_failed, triggered)

        if self.run_store is not None and run_id is not None:
            self.run_store.add_trace(run_id, "policy_router", "exit_status_decided", {
                "exit_status": exit_status,
                "reason": reason,
                "triggered": triggered,
            })
        logger.info(f"Exit status {exit_status}: {reason}")
        return exit_status

    @staticmethod
    def triggered_patterns(
        report: Optional[ClassificationReport],
        fail_on: Iterable[InvasivenessPattern],
    ) -> List[str]:
        if report is None:
            return []
        counts = report.summary.counts
        return [p.value for p in fail_on if counts.get(p.value, 0) > 0]

    @staticmethod
    def _decide(errors: int, verification_failed: bool, triggered: List[str]) -> Tuple[int, str]:
        if errors:
            return EXIT_INPUT_ERROR, f"{errors} error(s) before classification"
        if verification_failed:
            return EXIT_VERIFICATION, "dynamic verification failed"
        if triggered:
            return EXIT_FAIL_ON, f"fail-on pattern(s) found: {', '.join(triggered)}"
        return EXIT_OK, "no fail-on pattern found"

    def describe(self, exit_status: int) -> Dict[str, Any]:
        labels = {
            EXIT_OK: "clean",
            EXIT_FAIL_ON: "fail-on pattern found",
            EXIT_INPUT_ERROR: "input, syntax or model error",
            EXIT_VERIFICATION: "verification violation",
        }
        return {"exit_status": exit_status, "meaning": labels.get(exit_status, "unknown")}
