import pytest
from pydantic import ValidationError

from ajlint.config import load_settings
from ajlint.errors import InputError
from ajlint.oracle.interpreter import DEFAULT_FUEL
from ajlint.render import render_report
from ajlint.utils.file_utils import collect_sources
from tests.conftest import EXAMPLE_DIR


def test_defaults(monkeypatch):
    for name in ("AJLINT_FUEL", "AJLINT_LOG_LEVEL", "AJLINT_HISTORY_DB", "AJLINT_HOST", "AJLINT_PORT"):
        monkeypatch.delenv(name, raising=False)
    settings = load_settings()
    assert settings.fuel == DEFAULT_FUEL
    assert settings.log_level == "WARNING"
    assert settings.history_db is None


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("AJLINT_FUEL", "500")
    monkeypatch.setenv("AJLINT_LOG_LEVEL", "debug")
    monkeypatch.setenv("AJLINT_PORT", "9000")
    settings = load_settings()
    assert (settings.fuel, settings.log_level, settings.port) == (500, "DEBUG", 9000)


@pytest.mark.parametrize("name,value", [
    ("AJLINT_FUEL", "0"),
    ("AJLINT_LOG_LEVEL", "chatty"),
    ("AJLINT_PORT", "70000"),
])
def test_invalid_environment(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        load_settings()


def test_collect_sources_is_sorted_and_deduplicated(tmp_path):
    (tmp_path / "nested").mkdir()
    for name in ("b.ajml", "a.ajml", "nested/c.ajml", "notes.txt"):
        (tmp_path / name).write_text("class X { }", encoding="utf-8")
    found = collect_sources([str(tmp_path / "b.ajml"), str(tmp_path)])
    assert [p[len(str(tmp_path)) + 1:] for p in found] == ["a.ajml", "b.ajml", "nested/c.ajml"]


def test_collect_sources_rejects_missing_paths(tmp_path):
    with pytest.raises(InputError) as caught:
        collect_sources([str(EXAMPLE_DIR), str(tmp_path / "gone.ajml")])
    assert str(caught.value) == f"{tmp_path / 'gone.ajml'}: error: no such file or directory"


def test_unknown_render_format():
    with pytest.raises(ValueError):
        render_report(None, "yaml")
