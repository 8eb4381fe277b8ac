"""Command-line entry point: ``ajlint analyze`` and ``ajlint serve``."""

import argparse
import logging
import sys
from typing import List, Literal, Optional, Sequence, TextIO

from pydantic import BaseModel, Field, ValidationError, field_validator

from ajlint import __version__
from ajlint.classifier.patterns import InvasivenessPattern
from ajlint.config import Settings, load_settings
from ajlint.memory.run_store import RunStore
from ajlint.pipeline import AnalysisPipeline
from ajlint.render import render_report
from ajlint.router.policy_router import EXIT_INPUT_ERROR

logger = logging.getLogger(__name__)


class CliConfig(BaseModel):
    input_paths: List[str] = Field(min_length=1)
    format: Literal["text", "json"] = "text"
    fail_on: List[InvasivenessPattern] = Field(default_factory=list)
    verify: Optional[str] = None
    map_taxonomies: bool = True
    fuel: int = Field(default=100_000, gt=0)
    history_db: Optional[str] = None

    @field_validator("fail_on", mode="before")
    @classmethod
    def _split_names(cls, value):
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        return [InvasivenessPattern.parse(v) if isinstance(v, str) else v for v in value]


def run(config: CliConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Analyze the configured inputs and print the report

    Args:
        config: Validated command-line configuration
        stdout: Stream for the report (defaults to sys.stdout)
        stderr: Stream for diagnostics, warnings and violations (defaults to sys.stderr)

    Returns:
        The exit status: 0 clean, 1 fail-on pattern found, 2 input/syntax/model error,
        3 verification failure
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    pipeline = AnalysisPipeline(RunStore(config.history_db))
    result = pipeline.analyze_paths(
        config.input_paths,
        fail_on=config.fail_on,
        verify_entry=config.verify,
        map_taxonomies=config.map_taxonomies,
        fuel=config.fuel,
    )

    for message in result.errors:
        print(message, file=stderr)
    for warning in result.warnings:
        print(str(warning), file=stderr)
    if result.report is not None:
        stdout.write(render_report(result.report, config.format))
    if result.verification is not None:
        verification = result.verification
        if verification.fault:
            print(f"verification of '{verification.entry}' failed: {verification.fault}", file=stderr)
        for violation in verification.violations:
            print(f"violation: {violation}", file=stderr)
    return result.exit_status


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ajlint",
        description="Classify the advices and aspects of AJML programs by invasiveness pattern.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s analyze samples/example
  %(prog)s analyze samples/ --format json --fail-on Write,Replacement
  %(prog)s analyze samples/example --verify main
  %(prog)s serve --port 8000
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Analyze .ajml files or directories")
    analyze.add_argument("paths", nargs="+", help="Files or directories (searched recursively for *.ajml)")
    analyze.add_argument("--format", choices=["text", "json"], default="text", help="Report format")
    analyze.add_argument("--fail-on", default="", help="Comma-separated patterns that make the run exit with 1")
    analyze.add_argument("--verify", metavar="ENTRY", help="Run ENTRY woven and check the static facts")
    analyze.add_argument("--no-map", action="store_true", help="Omit the coarse taxonomy mapping")
    analyze.add_argument("--fuel", type=int, default=settings.fuel, help="Step budget of --verify")
    analyze.add_argument("--log-level", default=settings.log_level, help="Logging level (stderr)")
    analyze.add_argument("--history-db", default=settings.history_db, help="SQLite file keeping run history")

    serve = commands.add_parser("serve", help="Start the HTTP service")
    serve.add_argument("--host", default=settings.host)
    serve.add_argument("--port", type=int, default=settings.port)
    serve.add_argument("--log-level", default=settings.log_level)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = load_settings()
    except ValidationError as e:
        print(f"ajlint: error: invalid environment configuration: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    args = build_parser(settings).parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING), stream=sys.stderr)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("ajlint.main:app", host=args.host, port=args.port)
        return 0

    try:
        config = CliConfig(
            input_paths=args.paths,
            format=args.format,
            fail_on=args.fail_on,
            verify=args.verify,
            map_taxonomies=not args.no_map,
            fuel=args.fuel,
            history_db=args.history_db,
        )
    except ValidationError as e:
        for error in e.errors():
            print(f"ajlint: error: {error['msg']}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
