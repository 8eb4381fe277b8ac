"""
Analysis pipeline shared by the CLI and the HTTP service:
sources -> syntax trees -> program model -> advice facts -> report -> (optional) verification.
"""

import logging
import uuid
import warnings
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ajlint.classifier.patterns import InvasivenessPattern
from ajlint.classifier.report import ClassificationReport, build_report
from ajlint.errors import AjlintError, EmptyShadowWarning, InputError, InterpreterError, ModelError
from ajlint.flowanalysis.facts import AdviceFacts, analyze_advice
from ajlint.memory.run_store import RunStore
from ajlint.model.builder import build_model
from ajlint.model.program import AdviceDecl, Diagnostic, ProgramModel
from ajlint.oracle.interpreter import DEFAULT_FUEL, interpret
from ajlint.oracle.observe import Violation, check_containment, observe
from ajlint.router.policy_router import PolicyRouter
from ajlint.syntax.parser import parse_source
from ajlint.utils.file_utils import read_sources

logger = logging.getLogger(__name__)


@dataclass
class Verification:
    entry: str
    activations: int = 0
    violations: List[Violation] = field(default_factory=list)
    fault: Optional[str] = None
    output: List[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.violations) or self.fault is not None

    def to_dict(self) -> Dict:
        return {
            "entry": self.entry,
            "activations": self.activations,
            "violations": [str(v) for v in self.violations],
            "fault": self.fault,
        }


@dataclass
class PipelineResult:
    run_id: str
    exit_status: int
    report: Optional[ClassificationReport] = None
    errors: List[str] = field(default_factory=list)
    warnings: List[Diagnostic] = field(default_factory=list)
    verification: Optional[Verification] = None
    model: Optional[ProgramModel] = None


def compute_facts(model: ProgramModel) -> Tuple[Dict[AdviceDecl, AdviceFacts], List[Diagnostic]]:
    """Facts of every advice; empty-shadow warnings come back as warning diagnostics."""
    facts: Dict[AdviceDecl, AdviceFacts] = {}
    diagnostics: List[Diagnostic] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EmptyShadowWarning)
        for advice in model.advices():
            facts[advice] = analyze_advice(advice, model)
    for item in caught:
        if isinstance(item.message, EmptyShadowWarning):
            diagnostic = Diagnostic("warning", str(item.message), item.message.span)
            logger.warning(str(diagnostic))
            diagnostics.append(diagnostic)
    return facts, diagnostics


def verify(model: ProgramModel, facts: Dict[AdviceDecl, AdviceFacts], entry: str, fuel: int) -> Verification:
    """Run ``entry`` woven and check every observed activation against the static facts."""
    result = Verification(entry)
    try:
        trace = interpret(model, entry, fuel)
    except InterpreterError as e:
        logger.warning(f"Verification run of '{entry}' failed: {e}")
        result.fault = str(e)
        return result
    observations = observe(trace, model.advices())
    result.activations = len(observations)
    result.output = list(trace.output)
    result.violations = check_containment(observations, {advice.ref: f for advice, f in facts.items()})
    return result


class AnalysisPipeline:
    """
    Runs one analysis end to end and records every stage in the run store.
    """

    def __init__(self, run_store: Optional[RunStore] = None, policy_router: Optional[PolicyRouter] = None):
        self.run_store = run_store or RunStore()
        self.policy_router = policy_router or PolicyRouter(self.run_store)

    def analyze_paths(self, paths: Sequence[str], **options) -> PipelineResult:
        run_id = self._start()
        try:
            sources = read_sources(paths)
        except InputError as e:
            return self._fail(run_id, [str(e)])
        logger.info(f"Gathered {len(sources)} source file(s)")
        return self._analyze(run_id, sources, **options)

    def analyze_sources(self, sources: Iterable[Tuple[str, str]], **options) -> PipelineResult:
        """
        Analyze in-memory sources

        Args:
            sources: (file name, text) pairs; sorted by name before analysis
            fail_on: Patterns that make the run exit with status 1
            verify_entry: Entry method for the dynamic check, or None to skip it
            map_taxonomies: Attach the coarse taxonomy mapping to findings
            fuel: Step budget of the verification run

        Returns:
            The run outcome including the exit status
        """
        run_id = self._start()
        return self._analyze(run_id, sorted(dict(sources).items()), **options)

    def _start(self) -> str:
        run_id = str(uuid.uuid4())
        self.run_store.initialize_run(run_id, datetime.now().isoformat())
        return run_id

    def _fail(self, run_id: str, errors: List[str], model: Optional[ProgramModel] = None) -> PipelineResult:
        for message in errors:
            logger.error(message)
        exit_status = self.policy_router.route(run_id, None, errors=len(errors))
        self.run_store.store_error(run_id, "\n".join(errors), exit_status)
        return PipelineResult(run_id, exit_status, errors=errors, model=model)

    def _analyze(
        self,
        run_id: str,
        sources: List[Tuple[str, str]],
        fail_on: Iterable[InvasivenessPattern] = (),
        verify_entry: Optional[str] = None,
        map_taxonomies: bool = True,
        fuel: int = DEFAULT_FUEL,
    ) -> PipelineResult:
        self.run_store.store_inputs(run_id, [name for name, _ in sources])

        try:
            trees = [parse_source(text, name) for name, text in sources]
        except AjlintError as e:
            return self._fail(run_id, [str(e)])
        logger.info(f"Parsed {len(trees)} file(s)")
        self.run_store.add_trace(run_id, "syntax", "parse_completed", {"files": len(trees)})

        try:
            model = build_model(trees)
        except ModelError as e:
            return self._fail(run_id, [str(d) for d in e.diagnostics if d.is_error], e.model)
        self.run_store.add_trace(run_id, "model", "model_built", {
            "classes": len(model.classes),
            "aspects": len(model.aspects),
        })

        facts, shadow_warnings = compute_facts(model)
        logger.info(f"Computed facts for {len(facts)} advice(s)")
        self.run_store.add_trace(run_id, "flowanalysis", "facts_computed", {
            "advices": len(facts),
            "warnings": [str(w) for w in shadow_warnings],
        })

        report = build_report(model, facts, map_taxonomies)
        logger.info(f"Report built: {len(report.findings)} finding(s), {len(report.structural)} structural")

        verification = None
        if verify_entry is not None:
            verification = verify(model, facts, verify_entry, fuel)
            logger.info(
                f"Verification done: {verification.activations} activation(s), "
                f"{len(verification.violations)} violation(s)"
            )
            self.run_store.store_verification(run_id, verification.to_dict())

        exit_status = self.policy_router.route(
            run_id,
            report,
            fail_on,
            verification_failed=verification is not None and verification.failed,
        )
        self.run_store.store_report(run_id, report.model_dump(by_alias=True, exclude_none=True), exit_status)
        return PipelineResult(
            run_id,
            exit_status,
            report=report,
            warnings=shadow_warnings,
            verification=verification,
            model=model,
        )
