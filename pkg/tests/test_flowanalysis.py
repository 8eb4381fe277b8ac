import pytest

from ajlint.classifier.invasiveness import classify_advice
from ajlint.classifier.patterns import ReplacementFlavor
from ajlint.flowanalysis.access import detect_crossing, detect_field_access
from ajlint.flowanalysis.facts import analyze_advice
from ajlint.flowanalysis.interval import MANY, ProceedInterval
from ajlint.flowanalysis.paths import enumerate_proceed_counts
from ajlint.flowanalysis.proceed import (
    detect_argument_passing,
    detect_result_replacement,
    proceed_interval,
    result_replacement_sites,
)
from ajlint.model.program import IntrinsicSymbol
from ajlint.pointcuts.shadows import shadows_of
from ajlint.syntax import nodes as n
from tests.conftest import build

BASE = "class C { public int hits; Object m(Object o) { return o; } void helper() { } }"


def around(body: str):
    """The single around advice of a one-aspect program wrapping ``body``."""
    model = build(BASE + """
        aspect A {
            Object around(Object o): execution(Object C.m(Object)) && args(o) {
                %s
            }
        }
    """ % body)
    return next(model.advices()), model


def has_loop(body: n.Block) -> bool:
    return any(isinstance(node, n.While) for node in n.walk(body))


def test_interval_algebra():
    assert ProceedInterval.exactly(1) + ProceedInterval(0, 1) == ProceedInterval(1, 2)
    assert ProceedInterval(0, MANY) + ProceedInterval.exactly(2) == ProceedInterval(2, MANY)
    assert ProceedInterval.exactly(0) | ProceedInterval.exactly(2) == ProceedInterval(0, 2)
    assert ProceedInterval.empty() | ProceedInterval.exactly(3) == ProceedInterval.exactly(3)
    assert ProceedInterval.empty().is_empty
    assert ProceedInterval.abstract([]) == ProceedInterval.empty()
    assert ProceedInterval.abstract([2, 0, 1]) == ProceedInterval(0, 2)
    assert 5 in ProceedInterval(1, MANY) and 0 not in ProceedInterval(1, MANY)
    assert ProceedInterval(1, 1) <= ProceedInterval(0, 2)
    assert str(ProceedInterval(0, MANY)) == "(0, MANY)"
    assert ProceedInterval(0, MANY).to_dict() == {"min": 0, "max": "MANY"}


@pytest.mark.parametrize("body,expected", [
    ("return proceed(o);", ProceedInterval(1, 1)),
    ("return null;", ProceedInterval(0, 0)),
    ("if (o == null) { return null; } return proceed(o);", ProceedInterval(0, 1)),
    ("if (o == null) { proceed(o); } else { proceed(o); proceed(o); } return null;", ProceedInterval(1, 2)),
    ("proceed(o); proceed(o); return proceed(o);", ProceedInterval(3, 3)),
    ("if (o == null) { return proceed(o); } proceed(o); return proceed(o);", ProceedInterval(1, 2)),
    ("if (o == null && proceed(o) == null) { return null; } return o;", ProceedInterval(0, 1)),
    ("if (o == null) { return null; } else if (o == o) { return proceed(o); } return proceed(proceed(o));",
     ProceedInterval(0, 2)),
    ("while (o != null) { proceed(o); o = null; } return null;", ProceedInterval(0, MANY)),
    ("proceed(o); while (o != null) { o = null; } return null;", ProceedInterval(1, 1)),
])
def test_proceed_interval(body, expected):
    advice, _ = around(body)
    assert proceed_interval(advice.body) == expected


@pytest.mark.parametrize("body,expected", [
    ("return proceed(o);", {1}),
    ("if (o == null) { proceed(o); } else { proceed(o); proceed(o); } return null;", {1, 2}),
    ("if (o == null && proceed(o) == null) { return null; } return o;", {0, 1}),
    ("while (o != null) { proceed(o); } return null;", {0, 1, 2, 3}),
])
def test_enumerate_proceed_counts(body, expected):
    advice, _ = around(body)
    assert enumerate_proceed_counts(advice.body) == frozenset(expected)


def test_enumeration_unroll_depth_bounds_loop_iterations():
    advice, _ = around("while (o != null) { proceed(o); } return null;")
    assert enumerate_proceed_counts(advice.body, unroll_depth=0) == frozenset({0})
    assert enumerate_proceed_counts(advice.body, unroll_depth=1) == frozenset({0, 1})


def test_interval_matches_enumeration_on_corpus(corpus_models):
    checked = 0
    for model in corpus_models:
        for advice in model.advices():
            if advice.kind != "around":
                continue
            interval = proceed_interval(advice.body)
            if has_loop(advice.body):
                for depth in range(4):
                    counts = enumerate_proceed_counts(advice.body, depth)
                    assert all(c in interval for c in counts), advice.ref
            else:
                assert ProceedInterval.abstract(enumerate_proceed_counts(advice.body)) == interval, advice.ref
            checked += 1
    assert checked >= 15


@pytest.mark.parametrize("body,expected", [
    ('Object r = proceed(o); r = "x"; return r;', True),
    ("Object r = proceed(o); return r;", False),
    ("return proceed(o);", False),
    ("proceed(o); return o;", True),
    ('Object r = proceed(o); if (r == null) { r = "empty"; } return r;', True),
    ("if (o == null) { return null; } return proceed(o);", False),
])
def test_result_replacement(body, expected):
    advice, _ = around(body)
    interval = proceed_interval(advice.body)
    assert detect_result_replacement(advice.body, interval, advice.bound_params) is expected


@pytest.mark.parametrize("body,expected", [
    ("proceed(o);", True),
    ("if (o == null) { return proceed(o); } proceed(o);", True),
    ("Object r = proceed(o); if (r == null) { return null; } else { return r; }", True),
    ("Object r = proceed(o); if (r == null) { return r; } else { return r; }", False),
    ("proceed(o); return;", True),
])
def test_value_advice_exits_without_a_value(body, expected):
    advice, _ = around(body)
    interval = proceed_interval(advice.body)
    assert detect_result_replacement(advice.body, interval, advice.bound_params, returns_value=True) is expected


def test_fall_through_is_evidence_for_result_replacement():
    advice, model = around("proceed(o);")
    facts = analyze_advice(advice, model)
    assert facts.replaces_result
    assert facts.evidence["result"] == (advice.body.span,)
    assert classify_advice(facts, advice.kind, advice.span).flavor == ReplacementFlavor.RESULT


def test_void_advice_may_fall_through():
    advice = next(a for a in build(BASE + """
        aspect A { void around(): execution(void C.helper()) { proceed(); } }
    """).advices())
    assert result_replacement_sites(advice.body, returns_value=False) == ()


def test_result_replacement_needs_a_guaranteed_proceed():
    advice, _ = around("if (o == null) { return null; } return proceed(o);")
    # The early return is a replacement site, but the body may skip proceed entirely.
    assert len(result_replacement_sites(advice.body, advice.bound_params)) == 1
    assert not detect_result_replacement(advice.body, proceed_interval(advice.body), advice.bound_params)


@pytest.mark.parametrize("body,expected", [
    ("o = null; return proceed(o);", True),
    ("return proceed(o);", False),
    ('return proceed("" + o);', True),
    ("Object p = o; return proceed(p);", True),
    ('if (o == null) { o = "none"; } return proceed(o);', True),
    ("if (o == null) { return null; } return proceed(o);", False),
])
def test_argument_passing(body, expected):
    advice, _ = around(body)
    assert detect_argument_passing(advice.body, advice.bound_params) is expected


def test_field_access_ignores_aspect_state():
    model = build("""
        class Counter { public int value; public void tick() { value = value + 1; } }
        aspect Watch {
            private int seen;
            before(): execution(void Counter.tick()) {
                seen = seen + 1;
                Counter.value = Counter.value - 1;
            }
            after(): execution(void Counter.tick()) {
                print(Counter.value);
            }
        }
    """)
    before, after = model.advices()
    assert detect_field_access(before.body, model) == (
        frozenset({("Counter", "value")}), frozenset({("Counter", "value")})
    )
    assert detect_field_access(after.body, model) == (frozenset({("Counter", "value")}), frozenset())


def test_crossing_excludes_intercepted_methods_and_helpers():
    model = build(BASE + """
        aspect A {
            private void note() { }
            before(): execution(* C.*(..)) { C.helper(); note(); print("x"); }
            after(): execution(Object C.m(Object)) { C.helper(); note(); }
        }
    """)
    before, after = model.advices()
    assert detect_crossing(before.body, shadows_of(before, model), model, before.aspect) == frozenset()
    assert detect_crossing(after.body, shadows_of(after, model), model, after.aspect) == frozenset({"C.helper"})


def test_example_facts(example_facts):
    facts = example_facts
    assert facts["MyAspect.before#1"].external_calls == frozenset({"Logger.record"})
    assert facts["MyAspect.before#1"].interval == ProceedInterval(1, 1)
    assert facts["MyAspect.around#2"].interval == ProceedInterval(1, 1)
    assert not facts["MyAspect.around#2"].replaces_result
    assert facts["MyAspect.around#3"].interval == ProceedInterval(0, 0)
    assert facts["MyAspect.around#3"].external_calls == frozenset({"MyArrayList.last"})
    assert facts["MyAspect.around#4"].interval == ProceedInterval(0, 1)
    assert not facts["MyAspect.around#4"].modifies_proceed_args
    assert facts["MyAspect.around#5"].interval == ProceedInterval(0, MANY)
    assert facts["MyAspect.around#5"].modifies_proceed_args
    assert facts["MyAspect.around#5"].external_calls == frozenset()
    assert facts["MyAspect.around#6"].interval == ProceedInterval(1, 1)
    assert facts["MyAspect.around#6"].modifies_proceed_args
    assert facts["MyAspect.before#7"].fields_read == frozenset({("MyArrayList", "currentSize")})
    assert facts["MyAspect.after#8"].fields_read == frozenset({("MyArrayList", "currentSize")})
    assert facts["MyAspect.after#8"].fields_written == frozenset({("MyArrayList", "currentSize")})
    assert facts["MyAspect.around#9"].replaces_result
    assert not facts["MyAspect.around#9"].modifies_proceed_args


def test_evidence_points_at_source(example_facts):
    evidence = example_facts["MyAspect.around#9"].evidence
    assert set(evidence) == {"proceed", "result"}
    assert evidence["proceed"][0].file.endswith("MyAspect.ajml")
    assert set(example_facts["MyAspect.after#8"].evidence) == {"read", "write"}


def test_declared_log_method_shadows_the_intrinsic():
    model = build("""
        class Logger {
            public int lines;
            public void log(String text) { lines = lines + 1; }
            public void flush() { log("flush"); }
        }
        aspect Audit {
            before(): execution(void Logger.flush()) { Logger.log("audit"); log("plain"); }
        }
    """)
    declared = model.method("Logger.log")
    flush_call = next(node for node in n.walk(model.method("Logger.flush").body) if isinstance(node, n.Call))
    assert model.resolve(flush_call) is declared

    advice = next(model.advices())
    qualified, plain = [node for node in n.walk(advice.body) if isinstance(node, n.Call)]
    assert model.resolve(qualified) is declared
    # Unqualified names in advice bodies look up aspect helpers, then intrinsics.
    assert model.resolve(plain) == IntrinsicSymbol("log")

    facts = analyze_advice(advice, model)
    assert facts.external_calls == frozenset({"Logger.log"})
