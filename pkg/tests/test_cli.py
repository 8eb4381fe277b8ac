import io
import json
import shutil

import pytest

from ajlint import cli
from ajlint.cli import CliConfig
from tests.conftest import EXAMPLE_DIR, PROGRAMS_DIR


def run(paths, **options):
    stdout, stderr = io.StringIO(), io.StringIO()
    status = cli.run(CliConfig(input_paths=[str(p) for p in paths], **options), stdout, stderr)
    return status, stdout.getvalue(), stderr.getvalue()


@pytest.fixture
def example_copy(tmp_path):
    target = tmp_path / "example"
    shutil.copytree(EXAMPLE_DIR, target)
    return target


def test_clean_run_exits_zero():
    status, out, err = run([PROGRAMS_DIR / "01_audit_before_after.ajml"])
    assert status == 0
    assert "Audit.before#1 -> Augmentation" in out
    assert out.endswith("2 advice(s), 0 structural finding(s): Augmentation=2\n")
    assert err == ""


def test_fail_on_found_pattern_exits_one():
    status, _, _ = run([EXAMPLE_DIR], fail_on="Write,Replacement")
    assert status == 1


def test_fail_on_absent_pattern_exits_zero(example_copy):
    aspect = example_copy / "MyAspect.ajml"
    lines = aspect.read_text(encoding="utf-8").splitlines(keepends=True)
    aspect.write_text("".join(line for line in lines if "declare parents" not in line), encoding="utf-8")
    assert run([example_copy], fail_on="Hierarchy")[0] == 0
    assert run([example_copy], fail_on="FieldAddition")[0] == 1


def test_syntax_error_exits_two(tmp_path):
    broken = tmp_path / "broken.ajml"
    broken.write_text("class A { void m() { int x = 1 } }\n", encoding="utf-8")
    status, out, err = run([broken])
    assert status == 2
    assert out == ""
    assert f"{broken}:1:32: error:" in err


def test_deeply_nested_input_exits_two(tmp_path):
    deep = tmp_path / "deep.ajml"
    deep.write_text("class A { int m() { return " + "(" * 1000 + "1" + ")" * 1000 + "; } }\n", encoding="utf-8")
    status, out, err = run([deep])
    assert status == 2
    assert out == ""
    assert "expression nested too deeply" in err


def test_model_error_lists_every_diagnostic(tmp_path):
    source = tmp_path / "bad.ajml"
    source.write_text("class A { void m() { x = 1; y = 2; } }\n", encoding="utf-8")
    status, _, err = run([source])
    assert status == 2
    assert "unresolved name 'x'" in err and "unresolved name 'y'" in err


def test_missing_path_exits_two(tmp_path):
    status, _, err = run([tmp_path / "nowhere"])
    assert status == 2
    assert "no such file or directory" in err


def test_verification_of_example_passes():
    status, _, err = run([EXAMPLE_DIR], verify="main")
    assert status == 0
    assert "violation" not in err


def test_verification_fault_exits_three(tmp_path):
    source = tmp_path / "fault.ajml"
    source.write_text("class Main { public void main() { print(1 / 0); } }\n", encoding="utf-8")
    status, _, err = run([source], verify="main")
    assert status == 3
    assert "verification of 'main' failed" in err and "division by zero" in err


def test_json_output_is_deterministic(example_copy):
    first = run([example_copy], format="json")[1]
    second = run([example_copy], format="json")[1]
    assert first == second
    report = json.loads(first)
    assert report["version"] == 1
    assert len(report["findings"]) == 9


def test_empty_shadow_warning_goes_to_stderr(tmp_path):
    source = tmp_path / "idle.ajml"
    source.write_text(
        "class A { void m() { } }\naspect X { before(): execution(void B.*()) { } }\n", encoding="utf-8"
    )
    status, out, err = run([source])
    assert status == 0
    assert "X.before#1 -> Augmentation" in out
    assert "matches no join point shadow" in err


def test_no_map_omits_coarse_mapping():
    out = run([EXAMPLE_DIR], format="json", map_taxonomies=False)[1]
    assert '"coarse"' not in out


def test_history_db_records_runs(tmp_path):
    db = tmp_path / "history.db"
    run([PROGRAMS_DIR / "03_square_replacement.ajml"], history_db=str(db))
    assert db.exists()


def test_main_parses_arguments(capsys):
    status = cli.main(["analyze", str(PROGRAMS_DIR / "05_double_send.ajml"), "--fail-on", "Multiple"])
    assert status == 1
    assert "Redundancy.around#1 -> Augmentation,Multiple" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["analyze", str(EXAMPLE_DIR), "--fail-on", "Sideways"],
    ["analyze", str(EXAMPLE_DIR), "--fuel", "0"],
])
def test_main_rejects_bad_options(argv, capsys):
    assert cli.main(argv) == 2
    assert "ajlint: error:" in capsys.readouterr().err


def test_main_requires_a_subcommand():
    with pytest.raises(SystemExit):
        cli.main([])
