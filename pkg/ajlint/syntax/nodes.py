"""
Abstract syntax tree for AJML.

Nodes are immutable and compare by identity, so they can key the model's resolution
tables. Structural comparison (spans ignored) is available through ``shape``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass
from typing import Any, Iterator, Optional, Tuple, Union

from ajlint.syntax.tokens import Span


@dataclass(frozen=True, eq=False)
class Node:
    span: Span


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Name(Node):
    identifier: str


@dataclass(frozen=True, eq=False)
class This(Node):
    pass


@dataclass(frozen=True, eq=False)
class IntLiteral(Node):
    value: int


@dataclass(frozen=True, eq=False)
class StringLiteral(Node):
    value: str


@dataclass(frozen=True, eq=False)
class BoolLiteral(Node):
    value: bool


@dataclass(frozen=True, eq=False)
class NullLiteral(Node):
    pass


@dataclass(frozen=True, eq=False)
class FieldAccess(Node):
    receiver: "Expr"
    name: str


@dataclass(frozen=True, eq=False)
class Call(Node):
    """Method call; ``receiver`` is None for unqualified calls such as ``print(x)``."""

    receiver: Optional["Expr"]
    name: str
    args: Tuple["Expr", ...]


@dataclass(frozen=True, eq=False)
class Proceed(Node):
    args: Tuple["Expr", ...]


@dataclass(frozen=True, eq=False)
class New(Node):
    class_name: str
    args: Tuple["Expr", ...]


@dataclass(frozen=True, eq=False)
class Binary(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, eq=False)
class Unary(Node):
    op: str
    operand: "Expr"


Expr = Union[Name, This, IntLiteral, StringLiteral, BoolLiteral, NullLiteral,
             FieldAccess, Call, Proceed, New, Binary, Unary]


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Block(Node):
    statements: Tuple["Stmt", ...]


@dataclass(frozen=True, eq=False)
class LocalDecl(Node):
    type_name: str
    name: str
    initializer: Optional[Expr]


@dataclass(frozen=True, eq=False)
class Assign(Node):
    target: Expr
    value: Expr


@dataclass(frozen=True, eq=False)
class If(Node):
    condition: Expr
    then_block: Block
    else_branch: Optional[Union[Block, "If"]]


@dataclass(frozen=True, eq=False)
class While(Node):
    condition: Expr
    body: Block


@dataclass(frozen=True, eq=False)
class Return(Node):
    value: Optional[Expr]


@dataclass(frozen=True, eq=False)
class ExprStmt(Node):
    expr: Expr


Stmt = Union[LocalDecl, Assign, If, While, Return, ExprStmt]


# ---------------------------------------------------------------------------
# Pointcuts
# ---------------------------------------------------------------------------

WILDCARD = "*"


@dataclass(frozen=True, eq=False)
class SignaturePattern(Node):
    """``ReturnType Declaring.name(P1, P2, ..)``; any segment may be ``*``."""

    return_type: str
    declaring_type: str
    name: str
    param_types: Tuple[str, ...]
    open_tail: bool


@dataclass(frozen=True, eq=False)
class ExecutionPointcut(Node):
    pattern: SignaturePattern


@dataclass(frozen=True, eq=False)
class CallPointcut(Node):
    pattern: SignaturePattern


@dataclass(frozen=True, eq=False)
class ArgsPointcut(Node):
    names: Tuple[str, ...]


@dataclass(frozen=True, eq=False)
class NotPointcut(Node):
    operand: "PointcutExpr"


@dataclass(frozen=True, eq=False)
class AndPointcut(Node):
    left: "PointcutExpr"
    right: "PointcutExpr"


@dataclass(frozen=True, eq=False)
class OrPointcut(Node):
    left: "PointcutExpr"
    right: "PointcutExpr"


@dataclass(frozen=True, eq=False)
class PointcutRef(Node):
    name: str
    args: Tuple[str, ...]


PointcutExpr = Union[ExecutionPointcut, CallPointcut, ArgsPointcut, NotPointcut,
                     AndPointcut, OrPointcut, PointcutRef]


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Param(Node):
    type_name: str
    name: str


@dataclass(frozen=True, eq=False)
class FieldNode(Node):
    visibility: str
    type_name: str
    name: str
    initializer: Optional[Expr]


@dataclass(frozen=True, eq=False)
class MethodNode(Node):
    visibility: str
    return_type: str
    name: str
    params: Tuple[Param, ...]
    body: Block


@dataclass(frozen=True, eq=False)
class ClassNode(Node):
    name: str
    parents: Tuple[str, ...]
    members: Tuple[Union[FieldNode, MethodNode], ...]


@dataclass(frozen=True, eq=False)
class PointcutDeclNode(Node):
    name: str
    params: Tuple[Param, ...]
    expr: PointcutExpr


@dataclass(frozen=True, eq=False)
class AdviceNode(Node):
    kind: str
    return_type: Optional[str]
    params: Tuple[Param, ...]
    pointcut: PointcutExpr
    body: Block


@dataclass(frozen=True, eq=False)
class InterTypeFieldNode(Node):
    visibility: str
    type_name: str
    target: str
    name: str
    initializer: Optional[Expr]


@dataclass(frozen=True, eq=False)
class InterTypeMethodNode(Node):
    visibility: str
    return_type: str
    target: str
    name: str
    params: Tuple[Param, ...]
    body: Block


@dataclass(frozen=True, eq=False)
class DeclareParentsNode(Node):
    target: str
    interface: str


AspectMember = Union[PointcutDeclNode, AdviceNode, InterTypeFieldNode, InterTypeMethodNode,
                     DeclareParentsNode, FieldNode, MethodNode]


@dataclass(frozen=True, eq=False)
class AspectNode(Node):
    name: str
    privileged: bool
    members: Tuple[AspectMember, ...]


@dataclass(frozen=True, eq=False)
class SyntaxTree(Node):
    declarations: Tuple[Union[ClassNode, AspectNode], ...]


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def children(node: Node) -> Iterator[Node]:
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal of ``node`` and all of its descendants."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(children(current))))


def shape(value: Any) -> Any:
    """Span-free nested representation used to compare trees structurally."""
    if isinstance(value, Node) and is_dataclass(value):
        return (type(value).__name__,) + tuple(
            (f.name, shape(getattr(value, f.name))) for f in fields(value) if f.name != "span"
        )
    if isinstance(value, tuple):
        return tuple(shape(v) for v in value)
    return value
