"""
Turns syntax trees into a resolved ``ProgramModel``.

Resolution runs in two passes. The first indexes every class and aspect and applies
inter-type members to their target classes, so that the second pass (body resolution)
can see introduced fields and methods from any code.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ajlint.errors import ModelError
from ajlint.model.program import (
    BUILTIN_TYPES,
    INTRINSICS,
    MEMBER_INTRINSICS,
    AdviceDecl,
    AspectDecl,
    ClassDecl,
    ClassSymbol,
    Diagnostic,
    FieldDecl,
    IntrinsicSymbol,
    LocalSymbol,
    MethodDecl,
    NamedPointcut,
    ParentDecl,
    ProgramModel,
    Symbol,
)
from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span

logger = logging.getLogger(__name__)

# Static type of expressions the checker cannot narrow further.
ANY = "Object"
NULL = "null"


def build_model(trees: Union[n.SyntaxTree, Sequence[n.SyntaxTree]]) -> ProgramModel:
    """
    Resolve one or more syntax trees into a single program model.

    Args:
        trees: A syntax tree, or the trees of every file of one invocation

    Returns:
        The resolved model (diagnostics may still hold warnings)

    Raises:
        ModelError: when any semantic error was found; the model travels with it
    """
    if isinstance(trees, n.SyntaxTree):
        trees = [trees]
    model = ModelBuilder(trees).build()
    if model.errors:
        raise ModelError(model.diagnostics, model)
    return model


@dataclass
class _ClassTable:
    node: n.ClassNode
    fields: Dict[str, FieldDecl] = field(default_factory=dict)
    methods: Dict[str, MethodDecl] = field(default_factory=dict)
    parents: List[ParentDecl] = field(default_factory=list)


@dataclass
class _AspectTable:
    node: n.AspectNode
    advices: List[AdviceDecl] = field(default_factory=list)
    advice_nodes: List[n.AdviceNode] = field(default_factory=list)
    itd_fields: List[FieldDecl] = field(default_factory=list)
    itd_methods: List[MethodDecl] = field(default_factory=list)
    parents: List[ParentDecl] = field(default_factory=list)
    fields: Dict[str, FieldDecl] = field(default_factory=dict)
    methods: Dict[str, MethodDecl] = field(default_factory=dict)
    pointcuts: Dict[str, NamedPointcut] = field(default_factory=dict)


@dataclass
class _Context:
    """Where a body lives: decides name lookup, privileged checks and proceed legality."""

    this_type: str
    aspect: Optional[str] = None
    advice: Optional[AdviceDecl] = None

    @property
    def in_aspect_code(self) -> bool:
        return self.aspect is not None


class ModelBuilder:
    def __init__(self, trees: Sequence[n.SyntaxTree]):
        self.trees = tuple(trees)
        self.diagnostics: List[Diagnostic] = []
        self.classes: Dict[str, _ClassTable] = {}
        self.aspects: Dict[str, _AspectTable] = {}
        self.resolutions: Dict[n.Node, Symbol] = {}

    def error(self, message: str, span: Optional[Span]) -> None:
        self.diagnostics.append(Diagnostic("error", message, span))

    def build(self) -> ProgramModel:
        self._index_declarations()
        for table in self.classes.values():
            self._index_class(table)
        for table in self.aspects.values():
            self._index_aspect(table)
        for table in self.aspects.values():
            self._index_advices(table)

        for table in self.classes.values():
            self._resolve_class(table)
        for table in self.aspects.values():
            self._resolve_aspect(table)

        model = ProgramModel(
            classes={name: self._freeze_class(t) for name, t in sorted(self.classes.items())},
            aspects={name: self._freeze_aspect(t) for name, t in sorted(self.aspects.items())},
            diagnostics=tuple(sorted(self.diagnostics, key=_diagnostic_key)),
            resolutions=self.resolutions,
            trees=self.trees,
        )
        logger.info(
            f"Model built: {len(model.classes)} classes, {len(model.aspects)} aspects, "
            f"{len(model.errors)} errors"
        )
        return model

    # ------------------------------------------------------------------
    # Indexing
    # ------------------------------------------------------------------

    def _index_declarations(self) -> None:
        for tree in self.trees:
            for decl in tree.declarations:
                if decl.name in self.classes or decl.name in self.aspects:
                    self.error(f"duplicate type name '{decl.name}'", decl.span)
                    continue
                if isinstance(decl, n.ClassNode):
                    self.classes[decl.name] = _ClassTable(decl)
                else:
                    self.aspects[decl.name] = _AspectTable(decl)

    def _index_class(self, table: _ClassTable) -> None:
        node = table.node
        for iface in node.parents:
            table.parents.append(ParentDecl(node.name, iface, node.span))
        for member in node.members:
            if member.name in table.fields or member.name in table.methods:
                self.error(f"duplicate member '{member.name}' in class '{node.name}'", member.span)
                continue
            if isinstance(member, n.FieldNode):
                self._check_type(member.type_name, member.span)
                table.fields[member.name] = FieldDecl(
                    node.name, member.name, member.type_name, member.visibility,
                    member.initializer, member.span,
                )
            else:
                self._check_signature(member.return_type, member.params, member.span)
                table.methods[member.name] = MethodDecl(
                    node.name, member.name, member.return_type, member.params, member.body,
                    member.visibility, member.span,
                )

    def _index_aspect(self, table: _AspectTable) -> None:
        aspect = table.node
        for member in aspect.members:
            if isinstance(member, n.PointcutDeclNode):
                if member.name in table.pointcuts:
                    self.error(f"duplicate pointcut '{member.name}'", member.span)
                    continue
                table.pointcuts[member.name] = NamedPointcut(member.name, member.params, member.expr, member.span)
            elif isinstance(member, n.DeclareParentsNode):
                target = self.classes.get(member.target)
                if target is None:
                    self.error(f"unknown class '{member.target}' in declare parents", member.span)
                    continue
                parent = ParentDecl(member.target, member.interface, member.span, aspect.name)
                table.parents.append(parent)
                target.parents.append(parent)
            elif isinstance(member, n.InterTypeFieldNode):
                target = self._introduction_target(member.target, member.span)
                if target is None:
                    continue
                self._check_type(member.type_name, member.span)
                if member.name in target.fields or member.name in target.methods:
                    self.error(f"duplicate member '{member.name}' introduced into '{member.target}'", member.span)
                    continue
                decl = FieldDecl(
                    member.target, member.name, member.type_name, member.visibility,
                    member.initializer, member.span, introduced_by=aspect.name,
                )
                target.fields[member.name] = decl
                table.itd_fields.append(decl)
            elif isinstance(member, n.InterTypeMethodNode):
                target = self._introduction_target(member.target, member.span)
                if target is None:
                    continue
                self._check_signature(member.return_type, member.params, member.span)
                if member.name in target.fields or member.name in target.methods:
                    self.error(f"duplicate member '{member.name}' introduced into '{member.target}'", member.span)
                    continue
                decl = MethodDecl(
                    member.target, member.name, member.return_type, member.params, member.body,
                    member.visibility, member.span, introduced_by=aspect.name,
                )
                target.methods[member.name] = decl
                table.itd_methods.append(decl)
            elif isinstance(member, n.FieldNode):
                if member.name in table.fields or member.name in table.methods:
                    self.error(f"duplicate member '{member.name}' in aspect '{aspect.name}'", member.span)
                    continue
                self._check_type(member.type_name, member.span)
                table.fields[member.name] = FieldDecl(
                    aspect.name, member.name, member.type_name, member.visibility,
                    member.initializer, member.span, owner_is_aspect=True,
                )
            elif isinstance(member, n.MethodNode):
                if member.name in table.fields or member.name in table.methods:
                    self.error(f"duplicate member '{member.name}' in aspect '{aspect.name}'", member.span)
                    continue
                self._check_signature(member.return_type, member.params, member.span)
                table.methods[member.name] = MethodDecl(
                    aspect.name, member.name, member.return_type, member.params, member.body,
                    member.visibility, member.span, owner_is_aspect=True,
                )

    def _introduction_target(self, name: str, span: Span) -> Optional[_ClassTable]:
        target = self.classes.get(name)
        if target is None:
            self.error(f"unknown class '{name}' in inter-type declaration", span)
        return target

    def _index_advices(self, table: _AspectTable) -> None:
        ordinal = 0
        for member in table.node.members:
            if not isinstance(member, n.AdviceNode):
                continue
            ordinal += 1
            if member.return_type is not None:
                self._check_type(member.return_type, member.span, allow_void=True)
            seen = set()
            for param in member.params:
                self._check_type(param.type_name, param.span)
                if param.name in seen:
                    self.error(f"duplicate parameter '{param.name}'", param.span)
                seen.add(param.name)

            bound = {p.name for p in member.params}
            pointcut = self._inline(table, member.pointcut, {name: name for name in bound}, bound, [])
            self._check_bindings(member, pointcut)
            table.advices.append(AdviceDecl(
                aspect=table.node.name,
                ordinal=ordinal,
                kind=member.kind,
                return_type=member.return_type,
                bound_params=member.params,
                pointcut=pointcut,
                body=member.body,
                span=member.span,
            ))
            table.advice_nodes.append(member)

    # ------------------------------------------------------------------
    # Pointcut inlining
    # ------------------------------------------------------------------

    def _inline(
        self,
        table: _AspectTable,
        expr: n.PointcutExpr,
        renaming: Mapping[str, str],
        visible: set,
        stack: List[str],
    ) -> n.PointcutExpr:
        """Replace named references by their definitions, renaming ``args`` identifiers."""
        if isinstance(expr, (n.ExecutionPointcut, n.CallPointcut)):
            return expr
        if isinstance(expr, n.ArgsPointcut):
            for name in expr.names:
                if name not in visible:
                    self.error(f"args identifier '{name}' is not a bound parameter", expr.span)
            if all(renaming.get(name, name) == name for name in expr.names):
                return expr
            return n.ArgsPointcut(expr.span, tuple(renaming.get(name, name) for name in expr.names))
        if isinstance(expr, n.NotPointcut):
            return n.NotPointcut(expr.span, self._inline(table, expr.operand, renaming, visible, stack))
        if isinstance(expr, (n.AndPointcut, n.OrPointcut)):
            left = self._inline(table, expr.left, renaming, visible, stack)
            right = self._inline(table, expr.right, renaming, visible, stack)
            return type(expr)(expr.span, left, right)

        named = table.pointcuts.get(expr.name)
        if named is None:
            self.error(f"unknown pointcut '{expr.name}'", expr.span)
            return expr
        if expr.name in stack:
            self.error(f"cyclic pointcut reference '{expr.name}'", expr.span)
            return expr
        if len(expr.args) != len(named.params):
            self.error(f"pointcut '{expr.name}' expects {len(named.params)} argument(s)", expr.span)
            return expr
        for arg in expr.args:
            if arg not in visible:
                self.error(f"args identifier '{arg}' is not a bound parameter", expr.span)
        inner = {p.name: renaming.get(arg, arg) for p, arg in zip(named.params, expr.args)}
        return self._inline(table, named.expr, inner, {p.name for p in named.params}, stack + [expr.name])

    def _check_bindings(self, advice: n.AdviceNode, pointcut: n.PointcutExpr) -> None:
        bound_by_args = {
            name for node in n.walk(pointcut) if isinstance(node, n.ArgsPointcut) for name in node.names
        }
        for param in advice.params:
            if param.name not in bound_by_args:
                self.error(f"bound parameter '{param.name}' is not bound by the pointcut", param.span)

    # ------------------------------------------------------------------
    # Body resolution
    # ------------------------------------------------------------------

    def _resolve_class(self, table: _ClassTable) -> None:
        ctx = _Context(this_type=table.node.name)
        for decl in table.fields.values():
            if decl.introduced_by is None and decl.initializer is not None:
                _BodyResolver(self, ctx).expression(decl.initializer, [{}])
        for decl in table.methods.values():
            if decl.introduced_by is None:
                _BodyResolver(self, ctx).method(decl)

    def _resolve_aspect(self, table: _AspectTable) -> None:
        name = table.node.name
        for decl in table.itd_fields:
            if decl.initializer is not None:
                _BodyResolver(self, _Context(decl.owner, aspect=name)).expression(decl.initializer, [{}])
        for decl in table.itd_methods:
            _BodyResolver(self, _Context(decl.owner, aspect=name)).method(decl)
        for decl in table.fields.values():
            if decl.initializer is not None:
                _BodyResolver(self, _Context(name, aspect=name)).expression(decl.initializer, [{}])
        for decl in table.methods.values():
            _BodyResolver(self, _Context(name, aspect=name)).method(decl)
        for advice in table.advices:
            scope = {p.name: LocalSymbol(p.name, p.type_name) for p in advice.bound_params}
            resolver = _BodyResolver(self, _Context(name, aspect=name, advice=advice))
            resolver.block(advice.body, [scope])

    # ------------------------------------------------------------------
    # Helpers shared with the body resolver
    # ------------------------------------------------------------------

    def is_type(self, name: str) -> bool:
        return name in BUILTIN_TYPES or name in self.classes

    def _check_type(self, name: str, span: Span, allow_void: bool = False) -> None:
        if allow_void and name == "void":
            return
        if not self.is_type(name):
            self.error(f"unknown type '{name}'", span)

    def _check_signature(self, return_type: str, params: Tuple[n.Param, ...], span: Span) -> None:
        self._check_type(return_type, span, allow_void=True)
        seen = set()
        for param in params:
            self._check_type(param.type_name, param.span)
            if param.name in seen:
                self.error(f"duplicate parameter '{param.name}'", param.span)
            seen.add(param.name)

    def _freeze_class(self, table: _ClassTable) -> ClassDecl:
        return ClassDecl(
            table.node.name,
            tuple(table.fields.values()),
            tuple(table.methods.values()),
            tuple(table.parents),
            table.node.span,
        )

    def _freeze_aspect(self, table: _AspectTable) -> AspectDecl:
        return AspectDecl(
            name=table.node.name,
            privileged=table.node.privileged,
            advices=tuple(table.advices),
            inter_type_fields=tuple(table.itd_fields),
            inter_type_methods=tuple(table.itd_methods),
            parent_decls=tuple(table.parents),
            fields=tuple(table.fields.values()),
            methods=tuple(table.methods.values()),
            pointcuts=tuple(table.pointcuts.values()),
            span=table.node.span,
        )


Scopes = List[Dict[str, LocalSymbol]]


class _BodyResolver:
    """Resolves every name of one body and records it in the builder's resolution table."""

    def __init__(self, builder: ModelBuilder, ctx: _Context):
        self.builder = builder
        self.ctx = ctx

    def method(self, decl: MethodDecl) -> None:
        scope = {p.name: LocalSymbol(p.name, p.type_name) for p in decl.params}
        self.block(decl.body, [scope])

    # Statements --------------------------------------------------------

    def block(self, block: n.Block, scopes: Scopes) -> None:
        inner = scopes + [{}]
        for stmt in block.statements:
            self.statement(stmt, inner)

    def statement(self, stmt: n.Stmt, scopes: Scopes) -> None:
        if isinstance(stmt, n.LocalDecl):
            if stmt.initializer is not None:
                self.expression(stmt.initializer, scopes)
            self.builder._check_type(stmt.type_name, stmt.span)
            if stmt.name in scopes[-1]:
                self.builder.error(f"duplicate local '{stmt.name}'", stmt.span)
            scopes[-1][stmt.name] = LocalSymbol(stmt.name, stmt.type_name)
        elif isinstance(stmt, n.Assign):
            self.expression(stmt.target, scopes)
            self.expression(stmt.value, scopes)
        elif isinstance(stmt, n.If):
            self.expression(stmt.condition, scopes)
            self.block(stmt.then_block, scopes)
            if isinstance(stmt.else_branch, n.If):
                self.statement(stmt.else_branch, scopes)
            elif stmt.else_branch is not None:
                self.block(stmt.else_branch, scopes)
        elif isinstance(stmt, n.While):
            self.expression(stmt.condition, scopes)
            self.block(stmt.body, scopes)
        elif isinstance(stmt, n.Return):
            if stmt.value is not None:
                self.expression(stmt.value, scopes)
        elif isinstance(stmt, n.ExprStmt):
            self.expression(stmt.expr, scopes)

    # Expressions -------------------------------------------------------

    def expression(self, expr: n.Expr, scopes: Scopes) -> str:
        """Resolve ``expr`` and return its static type name."""
        if isinstance(expr, n.IntLiteral):
            return "int"
        if isinstance(expr, n.BoolLiteral):
            return "boolean"
        if isinstance(expr, n.StringLiteral):
            return "String"
        if isinstance(expr, n.NullLiteral):
            return NULL
        if isinstance(expr, n.This):
            return self.ctx.this_type
        if isinstance(expr, n.Name):
            symbol = self.name(expr, scopes)
            if isinstance(symbol, ClassSymbol):
                self.builder.error(f"class name '{symbol.name}' used as a value", expr.span)
                return ANY
            return _symbol_type(symbol)
        if isinstance(expr, n.FieldAccess):
            return self.field_access(expr, scopes)
        if isinstance(expr, n.Call):
            return self.call(expr, scopes)
        if isinstance(expr, n.Proceed):
            return self.proceed(expr, scopes)
        if isinstance(expr, n.New):
            for arg in expr.args:
                self.expression(arg, scopes)
            if expr.class_name not in self.builder.classes:
                self.builder.error(f"unknown class '{expr.class_name}'", expr.span)
                return ANY
            if expr.args:
                self.builder.error(f"class '{expr.class_name}' has no constructor taking arguments", expr.span)
            return expr.class_name
        if isinstance(expr, n.Unary):
            self.expression(expr.operand, scopes)
            return "boolean" if expr.op == "!" else "int"
        if isinstance(expr, n.Binary):
            left = self.expression(expr.left, scopes)
            right = self.expression(expr.right, scopes)
            if expr.op in ("==", "!=", "<", "<=", ">", ">=", "&&", "||"):
                return "boolean"
            if expr.op == "+" and "String" in (left, right):
                return "String"
            return "int"
        raise TypeError(f"unexpected expression node {expr!r}")

    def name(self, expr: n.Name, scopes: Scopes) -> Optional[Symbol]:
        """Locals, then fields of the current type, then class names."""
        ident = expr.identifier
        for scope in reversed(scopes):
            if ident in scope:
                self.builder.resolutions[expr] = scope[ident]
                return scope[ident]
        member = self._own_field(ident)
        if member is not None:
            self._check_access(member, expr.span)
            self.builder.resolutions[expr] = member
            return member
        if ident in self.builder.classes:
            symbol = ClassSymbol(ident)
            self.builder.resolutions[expr] = symbol
            return symbol
        self.builder.error(f"unresolved name '{ident}'", expr.span)
        return None

    def _own_field(self, ident: str) -> Optional[FieldDecl]:
        this_type = self.ctx.this_type
        if this_type in self.builder.classes:
            return self.builder.classes[this_type].fields.get(ident)
        return self.builder.aspects[this_type].fields.get(ident)

    def receiver(self, expr: n.Expr, scopes: Scopes) -> Tuple[str, bool]:
        """Type of a member receiver; the flag is true for a class-qualified ``C.x``."""
        if isinstance(expr, n.Name):
            symbol = self.name(expr, scopes)
            if isinstance(symbol, ClassSymbol):
                return symbol.name, True
            return _symbol_type(symbol), False
        return self.expression(expr, scopes), False

    def field_access(self, expr: n.FieldAccess, scopes: Scopes) -> str:
        owner, _ = self.receiver(expr.receiver, scopes)
        decl = self._member_field(owner, expr.name)
        if decl is None:
            if owner != ANY:
                self.builder.error(f"unresolved field '{expr.name}' on type '{owner}'", expr.span)
            else:
                self.builder.error(f"unresolved field '{expr.name}'", expr.span)
            return ANY
        self._check_access(decl, expr.span)
        self.builder.resolutions[expr] = decl
        return decl.type_name

    def _member_field(self, owner: str, name: str) -> Optional[FieldDecl]:
        if owner in self.builder.classes:
            return self.builder.classes[owner].fields.get(name)
        if owner in self.builder.aspects:
            return self.builder.aspects[owner].fields.get(name)
        return None

    def call(self, expr: n.Call, scopes: Scopes) -> str:
        for arg in expr.args:
            self.expression(arg, scopes)

        if expr.receiver is None:
            decl = self._own_method(expr.name)
            if decl is not None:
                return self._bind_method(expr, decl)
            if expr.name in INTRINSICS:
                if len(expr.args) != 1:
                    self.builder.error(f"'{expr.name}' expects 1 argument(s)", expr.span)
                self.builder.resolutions[expr] = IntrinsicSymbol(expr.name)
                return "void"
            self.builder.error(f"unresolved method '{expr.name}'", expr.span)
            return ANY

        owner, _ = self.receiver(expr.receiver, scopes)
        decl = None
        if owner in self.builder.classes:
            decl = self.builder.classes[owner].methods.get(expr.name)
        elif owner in self.builder.aspects:
            decl = self.builder.aspects[owner].methods.get(expr.name)
        if decl is not None:
            return self._bind_method(expr, decl)
        if expr.name in MEMBER_INTRINSICS:
            expected = MEMBER_INTRINSICS[expr.name]
            if len(expr.args) != expected:
                self.builder.error(f"'{expr.name}' expects {expected} argument(s)", expr.span)
            self.builder.resolutions[expr] = IntrinsicSymbol(expr.name, member=True)
            return "String" if expr.name == "toString" else "boolean"
        self.builder.error(f"unresolved method '{expr.name}' on type '{owner}'", expr.span)
        return ANY

    def _own_method(self, name: str) -> Optional[MethodDecl]:
        this_type = self.ctx.this_type
        if self.ctx.in_aspect_code and self.ctx.aspect == this_type:
            return self.builder.aspects[this_type].methods.get(name)
        if this_type in self.builder.classes:
            return self.builder.classes[this_type].methods.get(name)
        return None

    def _bind_method(self, expr: n.Call, decl: MethodDecl) -> str:
        if len(expr.args) != decl.arity:
            self.builder.error(
                f"method '{decl.qualified_name}' expects {decl.arity} argument(s)", expr.span
            )
        self._check_access(decl, expr.span)
        self.builder.resolutions[expr] = decl
        return decl.return_type

    def proceed(self, expr: n.Proceed, scopes: Scopes) -> str:
        for arg in expr.args:
            self.expression(arg, scopes)
        advice = self.ctx.advice
        if advice is None or advice.kind != "around":
            self.builder.error("proceed only legal in around advice", expr.span)
            return ANY
        expected = len(advice.bound_params)
        if len(expr.args) != expected:
            self.builder.error(f"proceed expects {expected} argument(s)", expr.span)
        return advice.return_type or ANY

    def _check_access(self, member: Union[FieldDecl, MethodDecl], span: Span) -> None:
        if member.visibility != "private":
            return
        what = "field" if isinstance(member, FieldDecl) else "method"
        ctx = self.ctx
        if ctx.in_aspect_code:
            if member.introduced_by == ctx.aspect:
                return
            if member.owner_is_aspect and member.owner == ctx.aspect:
                return
            if not self.builder.aspects[ctx.aspect].node.privileged:
                self.builder.error(f"private {what} access requires privileged aspect", span)
            return
        if member.introduced_by is not None or member.owner != ctx.this_type:
            self.builder.error(
                f"private {what} '{member.qualified_name}' is not accessible from '{ctx.this_type}'", span
            )


def _symbol_type(symbol: Optional[Symbol]) -> str:
    if isinstance(symbol, (LocalSymbol, FieldDecl)):
        return symbol.type_name
    return ANY


def _diagnostic_key(d: Diagnostic):
    span = d.span
    return (span.file, span.line, span.column) if span else ("", 0, 0), d.message
