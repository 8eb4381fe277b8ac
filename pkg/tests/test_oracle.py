import dataclasses

import pytest

from ajlint.errors import FuelExhausted, MalformedTrace, RuntimeFault
from ajlint.flowanalysis.interval import ProceedInterval
from ajlint.oracle.interpreter import interpret
from ajlint.oracle.observe import check_containment, observe
from ajlint.oracle.trace import EventKind, ExecutionTrace, TraceEvent, base_events
from tests.conftest import PROGRAMS_DIR, build, facts_of

SPECTATIVE_PROGRAMS = [
    "01_audit_before_after",
    "02_counter_monitor",
    "10_call_site_trace",
    "11_named_pointcut",
    "12_shape_wildcards",
    "18_factorial_trace",
    "19_tank_levels",
    "22_reset_wildcard",
    "23_call_counter_state",
    "24_call_around_store",
]


def program(stem: str):
    path = PROGRAMS_DIR / f"{stem}.ajml"
    return build((path.name, path.read_text(encoding="utf-8")))


@pytest.fixture(scope="module")
def example_trace(example_model):
    return interpret(example_model, "main")


@pytest.fixture(scope="module")
def example_observations(example_model, example_trace):
    return observe(example_trace, example_model.advices())


def counts_of(observations, ref):
    return sorted(o.proceed_count for o in observations if o.advice_ref == ref)


def test_example_output(example_trace):
    assert example_trace.output == ["add", "adding", "added"] * 3 + ["size: 4", "4", "<x>", "<z>", "2"]


def test_null_guard_skips_the_body(example_observations):
    assert counts_of(example_observations, "MyAspect.around#4") == [0, 1, 1]


def test_batch_advice_proceeds_once_per_element(example_observations):
    assert counts_of(example_observations, "MyAspect.around#5") == [3]


def test_before_and_after_count_one_proceed(example_observations):
    assert set(counts_of(example_observations, "MyAspect.before#1")) == {1}
    assert counts_of(example_observations, "MyAspect.after#8") == [1]


def test_observed_shadows_and_data(example_observations):
    by_ref = {o.advice_ref: o for o in example_observations}
    assert by_ref["MyAspect.around#2"].shadow == "execution(MyArrayList.add)"
    assert by_ref["MyAspect.before#1"].calls == frozenset({"Logger.record"})
    assert by_ref["MyAspect.after#8"].fields_written == frozenset({"MyArrayList.currentSize"})
    # Accesses made inside aspect helpers belong to the helper's own activation.
    assert by_ref["MyAspect.around#5"].fields_read == frozenset()
    assert by_ref["MyAspect.around#9"].result_modified


def test_example_containment_is_clean(example_observations, example_facts):
    assert check_containment(example_observations, example_facts) == []


def test_seeded_interval_fault_is_caught(example_observations, example_facts):
    facts = dict(example_facts)
    facts["MyAspect.around#4"] = dataclasses.replace(facts["MyAspect.around#4"], interval=ProceedInterval(2, 2))
    violations = check_containment(example_observations, facts)
    assert {(v.advice_ref, v.rule) for v in violations} == {("MyAspect.around#4", "interval")}
    assert len(violations) == 3


def test_seeded_read_fault_is_caught(example_observations, example_facts):
    facts = dict(example_facts)
    facts["MyAspect.before#7"] = dataclasses.replace(facts["MyAspect.before#7"], fields_read=frozenset())
    violations = check_containment(example_observations, facts)
    assert [(v.advice_ref, v.rule) for v in violations] == [("MyAspect.before#7", "read")]
    assert "MyArrayList.currentSize" in str(violations[0])


def test_seeded_argument_fault_is_caught(example_observations, example_facts):
    facts = dict(example_facts)
    facts["MyAspect.around#5"] = dataclasses.replace(facts["MyAspect.around#5"], modifies_proceed_args=False)
    rules = {v.rule for v in check_containment(example_observations, facts) if v.advice_ref == "MyAspect.around#5"}
    assert rules == {"arguments"}


def test_missing_facts_are_reported(example_observations):
    violations = check_containment(example_observations, {})
    assert violations and all(v.rule == "facts" for v in violations)


@pytest.mark.parametrize("stem", SPECTATIVE_PROGRAMS)
def test_spectative_aspects_leave_the_base_unchanged(stem):
    model = program(stem)
    woven = interpret(model, "main")
    plain = interpret(model.without_aspects(), "main")
    assert base_events(woven) == base_events(plain)
    assert check_containment(observe(woven, model.advices()), facts_of(model)) == []


def test_invasive_aspects_change_the_base(example_model, example_trace):
    plain = interpret(example_model.without_aspects(), "main")
    assert base_events(example_trace) != base_events(plain)


@pytest.mark.parametrize("stem", [
    "03_square_replacement", "04_registry_guard", "05_double_send", "06_thermostat_clamp",
    "07_greeter_result", "08_buffer_flush_write", "09_notifier_crossing", "13_gate_short_circuit",
    "14_level_filter", "15_vector_introductions", "16_two_aspects", "17_bell_loop",
    "20_directory_prefix", "21_auth_bypass",
])
def test_corpus_containment(stem):
    model = program(stem)
    observations = observe(interpret(model, "main"), model.advices())
    assert observations
    assert check_containment(observations, facts_of(model)) == []


def test_value_advice_falling_off_its_end_is_predicted():
    model = build("""
        class Cell { public int v = 4; public int get() { return v; } }
        class Main { public void main() { Cell cell = new Cell(); print(cell.get()); } }
        aspect Drop { int around(): execution(int Cell.get()) { proceed(); } }
    """)
    trace = interpret(model, "main")
    assert trace.output == ["null"]
    facts = facts_of(model)
    assert facts["Drop.around#1"].replaces_result
    assert check_containment(observe(trace, model.advices()), facts) == []


def test_call_advice_activates_at_call_shadow():
    model = program("10_call_site_trace")
    observations = observe(interpret(model, "main"), model.advices())
    assert {o.shadow for o in observations} == {"call(Main.main->Printer.show)"}


def test_interpretation_is_deterministic(example_model, example_trace):
    again = interpret(example_model, "main")
    assert again.events == example_trace.events
    assert again.output == example_trace.output


def test_fuel_exhaustion_keeps_the_trace_prefix(example_model):
    with pytest.raises(FuelExhausted) as caught:
        interpret(example_model, "main", fuel=5)
    assert caught.value.trace is not None
    assert 0 < len(caught.value.trace) < 20


@pytest.mark.parametrize("fuel", [0, -3])
def test_fuel_must_be_positive(example_model, fuel):
    with pytest.raises(ValueError):
        interpret(example_model, "main", fuel=fuel)


def test_runtime_faults():
    model = build("class Main { public void main() { int x = 1 / 0; print(x); } }")
    with pytest.raises(RuntimeFault, match="division by zero"):
        interpret(model, "main")
    with pytest.raises(RuntimeFault, match="zero-parameter method"):
        interpret(model, "missing")


def test_qualified_entry_point():
    model = build("class Tool { public void run() { print(7 % 3); print(-7 / 2); } }")
    assert interpret(model, "Tool.run").output == ["1", "-3"]


def enter(activation, subject="MyAspect.before#1"):
    return TraceEvent(EventKind.ADVICE_ENTER, subject, activation, "MyAspect", declared_by="MyAspect")


def leave(activation, subject="MyAspect.before#1"):
    return TraceEvent(EventKind.ADVICE_EXIT, subject, activation, "MyAspect", declared_by="MyAspect")


@pytest.mark.parametrize("events", [
    [enter(1), leave(2)],
    [enter(1)],
    [leave(1)],
    [enter(1), TraceEvent(EventKind.FIELD_READ, "MyArrayList.currentSize", 5), leave(1)],
    [enter(1, "MyAspect.before#99"), leave(1, "MyAspect.before#99")],
])
def test_malformed_traces_are_rejected(example_model, events):
    with pytest.raises(MalformedTrace):
        observe(ExecutionTrace(events), example_model.advices())
