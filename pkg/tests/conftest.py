import warnings
from pathlib import Path
from typing import Dict, List, Tuple

import pytest

from ajlint.errors import EmptyShadowWarning
from ajlint.flowanalysis.facts import analyze_advice
from ajlint.model.builder import build_model
from ajlint.syntax.parser import parse_source

ROOT = Path(__file__).resolve().parent.parent
EXAMPLE_DIR = ROOT / "samples" / "example"
PROGRAMS_DIR = ROOT / "samples" / "programs"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

PROGRAM_FILES = sorted(PROGRAMS_DIR.glob("*.ajml"))


def relative_name(path: Path) -> str:
    return path.relative_to(ROOT).as_posix()


def read_tree(directory: Path) -> List[Tuple[str, str]]:
    """(repository-relative name, text) of every source file in ``directory``."""
    return [(relative_name(p), p.read_text(encoding="utf-8")) for p in sorted(directory.glob("*.ajml"))]


def build(*sources, name: str = "test.ajml"):
    """Model of one or more source texts; bare strings get numbered file names."""
    trees = []
    for index, source in enumerate(sources):
        if isinstance(source, tuple):
            file_name, text = source
        else:
            file_name, text = (name if len(sources) == 1 else f"{index}_{name}"), source
        trees.append(parse_source(text, file_name))
    return build_model(trees)


def facts_of(model) -> Dict[str, object]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyShadowWarning)
        return {advice.ref: analyze_advice(advice, model) for advice in model.advices()}


def corpus_sources() -> List[List[Tuple[str, str]]]:
    """The example program plus every single-file program, one source list per program."""
    programs = [read_tree(EXAMPLE_DIR)]
    programs += [[(relative_name(p), p.read_text(encoding="utf-8"))] for p in PROGRAM_FILES]
    return programs


@pytest.fixture(scope="session")
def example_sources():
    return read_tree(EXAMPLE_DIR)


@pytest.fixture(scope="session")
def example_model(example_sources):
    return build(*example_sources)


@pytest.fixture(scope="session")
def example_facts(example_model):
    return facts_of(example_model)


@pytest.fixture(scope="session")
def corpus_models():
    return [build(*sources) for sources in corpus_sources()]
