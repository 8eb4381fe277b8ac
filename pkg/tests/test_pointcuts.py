import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ajlint.errors import EmptyShadowWarning
from ajlint.oracle.values import accepts
from ajlint.pointcuts.matcher import JoinPoint, evaluate, evaluate_at, match_signature
from ajlint.pointcuts.shadows import ShadowSet, select, shadows_of, universe
from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span
from tests.conftest import build

GEN = Span("generated", 1, 1, 1, 1)


def sig(return_type, declaring, name, params=(), open_tail=False):
    return n.SignaturePattern(GEN, return_type, declaring, name, tuple(params), open_tail)


def execution(*args, **kwargs):
    return n.ExecutionPointcut(GEN, sig(*args, **kwargs))


def call(*args, **kwargs):
    return n.CallPointcut(GEN, sig(*args, **kwargs))


def test_match_signature_segments(example_model):
    add = example_model.method("MyArrayList.add")
    assert match_signature(sig("void", "MyArrayList", "add", ["Object"]), add)
    assert match_signature(sig("*", "*", "*", [], open_tail=True), add)
    assert match_signature(sig("void", "*", "add", ["*"]), add)
    assert not match_signature(sig("int", "MyArrayList", "add", ["Object"]), add)
    assert not match_signature(sig("void", "MyArrayList", "add", []), add)
    assert not match_signature(sig("void", "MyArrayList", "add", ["Object", "Object"], open_tail=True), add)


def test_open_tail_matches_longer_parameter_lists():
    model = build("class A { void m(int a, String b, Object c) { } }")
    method = model.method("A.m")
    assert match_signature(sig("void", "A", "m", ["int"], open_tail=True), method)
    assert match_signature(sig("void", "A", "m", [], open_tail=True), method)
    assert not match_signature(sig("void", "A", "m", ["String"], open_tail=True), method)


def test_universe_lists_executions_and_call_sites(example_model):
    shadows = universe(example_model)
    assert "MyArrayList.compareTo" in shadows.executions
    assert "Main.main" in shadows.executions
    assert ("Main.main", "MyArrayList.add") in shadows.calls
    assert ("MyArrayList.first", "MyArrayList.get") in shadows.calls
    # Aspect helpers are not join point shadows.
    assert not any(name.startswith("MyAspect.") for name in shadows.executions)


def test_example_advice_shadows(example_model):
    by_ref = {a.ref: shadows_of(a, example_model) for a in example_model.advices()}
    assert by_ref["MyAspect.before#1"] == ShadowSet(frozenset({"MyArrayList.add"}))
    assert by_ref["MyAspect.around#5"].executions == frozenset({"MyArrayList.add"})
    assert by_ref["MyAspect.around#9"].executions == frozenset({"MyArrayList.get"})
    assert by_ref["MyAspect.after#8"].keys() == frozenset({"execution(MyArrayList.remove)"})


def test_call_pointcut_selects_call_sites_only(example_model):
    selected = select(call("*", "MyArrayList", "get", ["int"]), example_model)
    assert selected.executions == frozenset()
    assert selected.calls == frozenset({
        ("Main.main", "MyArrayList.get"),
        ("MyArrayList.first", "MyArrayList.get"),
        ("MyArrayList.last", "MyArrayList.get"),
    })
    assert "call(Main.main->MyArrayList.get)" in selected.keys()


def test_args_filters_by_static_type():
    model = build("class A { void f(int x) { } void g(String s) { } void h(Object o) { } }")
    string_args = n.ArgsPointcut(GEN, ("s",))
    selected = select(string_args, model, {"s": "String"})
    assert selected.executions == frozenset({"A.g", "A.h"})


def test_empty_shadow_set_warns():
    model = build("""
        class A { int get(int i) { return i; } }
        aspect X { before(String s): execution(* *.get(int)) && args(s) { } }
    """)
    advice = next(model.advices())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        shadows = shadows_of(advice, model)
    assert shadows.is_empty
    assert [type(w.message) for w in caught] == [EmptyShadowWarning]
    assert caught[0].message.advice_ref == "X.before#1"


def test_bound_object_fits_primitive_parameters():
    model = build(
        "class C { void m(int n) { } void k(String s) { } }"
        " aspect X { before(Object o): execution(* C.*(..)) && args(o) { } }"
        " aspect Y { before(int n): execution(* C.*(..)) && args(n) { } }"
    )
    by_aspect = {a.aspect: shadows_of(a, model) for a in model.advices()}
    assert by_aspect["X"].executions == frozenset({"C.m", "C.k"})
    assert by_aspect["Y"].executions == frozenset({"C.m"})


NEGATED_EXECUTIONS = "aspect Negation { before(): !execution(* *.*(..)) { } }"


def test_negated_executions_are_empty_without_call_sites():
    model = build("class C { void m() { } void n() { print(1); } }", NEGATED_EXECUTIONS)
    advice = next(model.advices())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        shadows = shadows_of(advice, model)
    assert shadows == ShadowSet()
    assert [type(w.message) for w in caught] == [EmptyShadowWarning]


def test_negated_executions_keep_every_call_shadow(example_sources):
    model = build(*example_sources, ("zz_negation.ajml", NEGATED_EXECUTIONS))
    advice = next(a for a in model.advices() if a.aspect == "Negation")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        shadows = shadows_of(advice, model)
    assert shadows.executions == frozenset()
    assert shadows.calls == universe(model).calls
    assert shadows.calls
    assert caught == []


def test_negating_both_kinds_selects_nothing(example_sources):
    model = build(*example_sources, (
        "zz_negation.ajml",
        "aspect Negation { before(): !execution(* *.*(..)) && !call(* *.*(..)) { } }",
    ))
    advice = next(a for a in model.advices() if a.aspect == "Negation")
    assert select(advice.pointcut, model).is_empty


def test_evaluate_returns_argument_positions(example_model):
    advice = next(a for a in example_model.advices() if a.ref == "MyAspect.around#9")
    jp = JoinPoint("execution", example_model.method("MyArrayList.get"))
    assert evaluate(advice.pointcut, jp, advice.binding_types) == {"i": 0}
    other = JoinPoint("execution", example_model.method("MyArrayList.size"))
    assert evaluate(advice.pointcut, other, advice.binding_types) is None


def test_evaluate_checks_runtime_values_with_the_residue(example_model):
    advice = next(a for a in example_model.advices() if a.ref == "MyAspect.around#5")
    jp = JoinPoint("execution", example_model.method("MyArrayList.add"))
    accepts_batch = lambda bound_type, value: value == "batch"
    assert evaluate(advice.pointcut, jp, advice.binding_types, accepts_batch, ["batch"]) == {"b": 0}
    assert evaluate(advice.pointcut, jp, advice.binding_types, accepts_batch, ["x"]) is None


def test_evaluate_at_narrows_object_parameters_by_runtime_kind():
    model = build(
        "class A { void m(Object o) { } }"
        " aspect X { before(int v): execution(void A.m(Object)) && args(v) { } }"
    )
    advice = next(model.advices())
    jp = JoinPoint("execution", model.method("A.m"))
    assert evaluate_at(advice.pointcut, jp, advice.binding_types, [3], accepts) == {"v": 0}
    assert evaluate_at(advice.pointcut, jp, advice.binding_types, ["three"], accepts) is None
    assert evaluate_at(advice.pointcut, jp, advice.binding_types, [None], accepts) is None


# ---------------------------------------------------------------------------
# Set algebra over generated pointcuts
# ---------------------------------------------------------------------------

PRIMITIVES = [
    execution("*", "MyArrayList", "*", open_tail=True),
    execution("void", "MyArrayList", "add", ["Object"]),
    execution("Object", "*", "get", ["int"]),
    execution("int", "*", "*"),
    execution("*", "Batch", "*", open_tail=True),
    call("*", "MyArrayList", "*", open_tail=True),
    call("void", "*", "add", open_tail=True),
    call("*", "*", "get", ["*"]),
    n.ArgsPointcut(GEN, ("o",)),
    n.ArgsPointcut(GEN, ()),
]

pointcuts = st.recursive(
    st.sampled_from(PRIMITIVES),
    lambda inner: st.one_of(
        inner.map(lambda e: n.NotPointcut(GEN, e)),
        st.tuples(inner, inner).map(lambda p: n.AndPointcut(GEN, *p)),
        st.tuples(inner, inner).map(lambda p: n.OrPointcut(GEN, *p)),
    ),
    max_leaves=6,
)


@pytest.fixture(scope="module")
def model(example_model):
    return example_model


@settings(max_examples=150, deadline=None)
@given(a=pointcuts, b=pointcuts)
def test_union_and_intersection_are_monotone(model, a, b):
    left, right = select(a, model), select(b, model)
    both = select(n.AndPointcut(GEN, a, b), model)
    either = select(n.OrPointcut(GEN, a, b), model)
    assert both == left & right
    assert either == left | right
    assert both <= left <= either


@settings(max_examples=150, deadline=None)
@given(a=pointcuts, b=pointcuts)
def test_de_morgan(model, a, b):
    everything = universe(model)
    not_and = select(n.NotPointcut(GEN, n.AndPointcut(GEN, a, b)), model)
    or_not = select(n.OrPointcut(GEN, n.NotPointcut(GEN, a), n.NotPointcut(GEN, b)), model)
    assert not_and == or_not
    assert select(n.NotPointcut(GEN, a), model) == everything - select(a, model)
    assert select(n.NotPointcut(GEN, n.NotPointcut(GEN, a)), model) == select(a, model)
