import pytest

from ajlint.errors import ModelError
from ajlint.model.program import ClassSymbol, FieldDecl, IntrinsicSymbol, LocalSymbol, MethodDecl
from ajlint.syntax import nodes as n
from tests.conftest import build

BASE = """
class Account {
    private int balance;
    public int limit = 10;

    public void deposit(int amount) {
        balance = balance + amount;
        print(balance);
    }

    public int current() {
        return balance;
    }
}
"""


def errors_of(*sources):
    with pytest.raises(ModelError) as excinfo:
        build(*sources)
    return [d.message for d in excinfo.value.diagnostics if d.is_error]


def test_classes_fields_and_methods_are_indexed(example_model):
    lst = example_model.classes["MyArrayList"]
    assert {f.name for f in lst.declared_fields} == {"elements", "currentSize"}
    assert lst.method("add").param_types == ("Object",)
    assert example_model.method("MyArrayList.size").return_type == "int"
    assert example_model.method("MyAspect.next").owner_is_aspect


def test_introductions_join_the_target_class(example_model):
    lst = example_model.classes["MyArrayList"]
    assert lst.field("maxSize").introduced_by == "MyAspect"
    assert lst.method("compareTo").introduced_by == "MyAspect"
    assert lst.method("compareTo").declaring_aspect == "MyAspect"
    assert [(p.interface, p.introduced_by) for p in lst.declared_parents] == [("Comparable", "MyAspect")]


def test_advice_refs_count_advices_per_aspect(example_model):
    refs = [a.ref for a in example_model.advices()]
    assert refs == [
        "MyAspect.before#1", "MyAspect.around#2", "MyAspect.around#3", "MyAspect.around#4",
        "MyAspect.around#5", "MyAspect.around#6", "MyAspect.before#7", "MyAspect.after#8",
        "MyAspect.around#9",
    ]


def test_names_resolve_to_locals_fields_classes_and_intrinsics():
    model = build(BASE)
    method = model.classes["Account"].method("deposit")
    nodes = list(n.walk(method.body))
    names = [node for node in nodes if isinstance(node, n.Name)]
    resolved = {type(model.resolve(node)) for node in names}
    assert resolved == {FieldDecl, LocalSymbol}
    call = next(node for node in nodes if isinstance(node, n.Call))
    assert model.resolve(call) == IntrinsicSymbol("print")


def test_class_qualified_access_resolves_the_class_then_the_member():
    model = build(BASE, """
        privileged aspect Peek {
            before(): execution(void Account.deposit(int)) {
                print(Account.balance);
                Account.limit = 20;
            }
        }
    """)
    advice = next(model.advices())
    accesses = [node for node in n.walk(advice.body) if isinstance(node, n.FieldAccess)]
    assert [model.resolve(a).qualified_name for a in accesses] == ["Account.balance", "Account.limit"]
    assert all(isinstance(model.resolve(a.receiver), ClassSymbol) for a in accesses)


def test_duplicate_member_names():
    assert "duplicate member 'balance' in class 'Account'" in errors_of(
        BASE.replace("public int limit = 10;", "public int limit = 10;\n    public int balance;")
    )


def test_private_member_needs_a_privileged_aspect():
    messages = errors_of(BASE, """
        aspect Peek {
            before(): execution(void Account.deposit(int)) {
                print(Account.balance);
            }
        }
    """)
    assert messages == ["private field access requires privileged aspect"]


def test_private_member_is_hidden_from_other_classes():
    messages = errors_of(BASE, """
        class Main {
            public void main() {
                Account a = new Account();
                print(a.balance);
            }
        }
    """)
    assert messages == ["private field 'Account.balance' is not accessible from 'Main'"]


@pytest.mark.parametrize(
    "aspect, message",
    [
        ("aspect X { before(): execution(void Account.deposit(int)) { proceed(); } }",
         "proceed only legal in around advice"),
        ("aspect X { void around(int a): execution(void Account.deposit(int)) && args(a) { proceed(); } }",
         "proceed expects 1 argument(s)"),
        ("aspect X { before(int a): execution(void Account.deposit(int)) { } }",
         "bound parameter 'a' is not bound by the pointcut"),
        ("aspect X { before(): execution(void Account.deposit(int)) && args(a) { } }",
         "args identifier 'a' is not a bound parameter"),
        ("aspect X { before(): missing() { } }",
         "unknown pointcut 'missing'"),
        ("aspect X { pointcut p(): q(); pointcut q(): p(); before(): p() { } }",
         "cyclic pointcut reference 'p'"),
        ("aspect X { pointcut p(int v): args(v); before(): p() { } }",
         "pointcut 'p' expects 1 argument(s)"),
        ("aspect X { declare parents: Nope implements I; }",
         "unknown class 'Nope' in declare parents"),
        ("aspect X { public int Nope.f; }",
         "unknown class 'Nope' in inter-type declaration"),
        ("aspect X { public int Account.limit; }",
         "duplicate member 'limit' introduced into 'Account'"),
        ("aspect X { before(): execution(void Account.deposit(int)) { Account.withdraw(1); } }",
         "unresolved method 'withdraw' on type 'Account'"),
        ("aspect X { before(): execution(void Account.deposit(int)) { print(missing); } }",
         "unresolved name 'missing'"),
        ("aspect X { before(): execution(void Account.deposit(int)) { Widget w = new Widget(); } }",
         "unknown class 'Widget'"),
    ],
)
def test_semantic_errors(aspect, message):
    assert message in errors_of(BASE, aspect)


def test_duplicate_type_names_across_files():
    messages = errors_of(("a.ajml", "class A { }"), ("b.ajml", "aspect A { }"))
    assert messages == ["duplicate type name 'A'"]


def test_model_error_reports_every_error_in_source_order():
    with pytest.raises(ModelError) as excinfo:
        build("class A { void m() { print(x); print(y); } }")
    text = str(excinfo.value)
    assert text.splitlines() == [
        "test.ajml:1:28: error: unresolved name 'x'",
        "test.ajml:1:38: error: unresolved name 'y'",
    ]
    assert excinfo.value.model is not None


def test_named_pointcuts_are_inlined_with_renamed_args():
    model = build(BASE, """
        aspect X {
            pointcut deposits(int amount): execution(void Account.deposit(int)) && args(amount);
            before(int value): deposits(value) { print(value); }
        }
    """)
    advice = next(model.advices())
    args = [node for node in n.walk(advice.pointcut) if isinstance(node, n.ArgsPointcut)]
    assert [a.names for a in args] == [("value",)]
    assert not any(isinstance(node, n.PointcutRef) for node in n.walk(advice.pointcut))


def test_aspects_are_ordered_by_file_then_position():
    model = build(
        ("b.ajml", "aspect First { }\naspect Second { }"),
        ("a.ajml", "aspect Zeroth { }"),
    )
    assert [a.name for a in model.aspects_in_order()] == ["Zeroth", "First", "Second"]


def test_without_aspects_drops_introductions(example_model):
    base = example_model.without_aspects()
    assert base.aspects == {}
    lst = base.classes["MyArrayList"]
    assert lst.field("maxSize") is None
    assert lst.method("compareTo") is None
    assert lst.declared_parents == ()
    assert isinstance(lst.method("add"), MethodDecl)
