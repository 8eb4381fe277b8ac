"""Resolved program model: classes, aspects, advices and name resolutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span

PRIMITIVE_TYPES = frozenset({"int", "boolean"})
BUILTIN_TYPES = frozenset({"int", "boolean", "String", "Object"})
INTRINSICS = frozenset({"print", "log"})
MEMBER_INTRINSICS = {"toString": 0, "equals": 1}


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Optional[Span] = None

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        where = f"{self.span.file}:{self.span.line}:{self.span.column}" if self.span else "<program>"
        return f"{where}: {self.severity}: {self.message}"


@dataclass(frozen=True, eq=False)
class FieldDecl:
    owner: str
    name: str
    type_name: str
    visibility: str
    initializer: Optional[n.Expr]
    span: Span
    introduced_by: Optional[str] = None
    owner_is_aspect: bool = False

    @property
    def qualified_name(self) -> str:
        return f"{self.owner}.{self.name}"

    @property
    def is_base_field(self) -> bool:
        """Field of a base class, whether declared there or introduced by an aspect."""
        return not self.owner_is_aspect


@dataclass(frozen=True, eq=False)
class MethodDecl:
    owner: str
    name: str
    return_type: str
    params: Tuple[n.Param, ...]
    body: n.Block
    visibility: str
    span: Span
    introduced_by: Optional[str] = None
    owner_is_aspect: bool = False

    @property
    def qualified_name(self) -> str:
        return f"{self.owner}.{self.name}"

    @property
    def param_types(self) -> Tuple[str, ...]:
        return tuple(p.type_name for p in self.params)

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def is_aspect_code(self) -> bool:
        return self.owner_is_aspect or self.introduced_by is not None

    @property
    def declaring_aspect(self) -> Optional[str]:
        return self.owner if self.owner_is_aspect else self.introduced_by


@dataclass(frozen=True)
class ParentDecl:
    target: str
    interface: str
    span: Span
    introduced_by: Optional[str] = None


@dataclass(frozen=True, eq=False)
class ClassDecl:
    name: str
    fields: Tuple[FieldDecl, ...]
    methods: Tuple[MethodDecl, ...]
    declared_parents: Tuple[ParentDecl, ...]
    span: Span

    def field(self, name: str) -> Optional[FieldDecl]:
        return next((f for f in self.fields if f.name == name), None)

    def method(self, name: str) -> Optional[MethodDecl]:
        return next((m for m in self.methods if m.name == name), None)

    @property
    def declared_fields(self) -> Tuple[FieldDecl, ...]:
        return tuple(f for f in self.fields if f.introduced_by is None)

    @property
    def declared_methods(self) -> Tuple[MethodDecl, ...]:
        return tuple(m for m in self.methods if m.introduced_by is None)


@dataclass(frozen=True, eq=False)
class AdviceDecl:
    aspect: str
    ordinal: int
    kind: str
    return_type: Optional[str]
    bound_params: Tuple[n.Param, ...]
    pointcut: n.PointcutExpr
    body: n.Block
    span: Span

    @property
    def ref(self) -> str:
        return f"{self.aspect}.{self.kind}#{self.ordinal}"

    @property
    def file(self) -> str:
        return self.span.file

    @property
    def binding_types(self) -> Dict[str, str]:
        return {p.name: p.type_name for p in self.bound_params}


@dataclass(frozen=True, eq=False)
class NamedPointcut:
    name: str
    params: Tuple[n.Param, ...]
    expr: n.PointcutExpr
    span: Span


@dataclass(frozen=True, eq=False)
class AspectDecl:
    name: str
    privileged: bool
    advices: Tuple[AdviceDecl, ...]
    inter_type_fields: Tuple[FieldDecl, ...]
    inter_type_methods: Tuple[MethodDecl, ...]
    parent_decls: Tuple[ParentDecl, ...]
    fields: Tuple[FieldDecl, ...]
    methods: Tuple[MethodDecl, ...]
    pointcuts: Tuple[NamedPointcut, ...]
    span: Span

    def method(self, name: str) -> Optional[MethodDecl]:
        return next((m for m in self.methods if m.name == name), None)

    def field(self, name: str) -> Optional[FieldDecl]:
        return next((f for f in self.fields if f.name == name), None)


@dataclass(frozen=True)
class LocalSymbol:
    name: str
    type_name: str


@dataclass(frozen=True)
class ClassSymbol:
    """A class name used as the qualifier of ``C.f`` or ``C.m(...)``."""

    name: str


@dataclass(frozen=True)
class IntrinsicSymbol:
    name: str
    member: bool = False


Symbol = Union[LocalSymbol, ClassSymbol, IntrinsicSymbol, FieldDecl, MethodDecl]


@dataclass(frozen=True, eq=False)
class ProgramModel:
    classes: Mapping[str, ClassDecl]
    aspects: Mapping[str, AspectDecl]
    diagnostics: Tuple[Diagnostic, ...] = ()
    resolutions: Mapping[n.Node, Symbol] = field(default_factory=dict)
    trees: Tuple[n.SyntaxTree, ...] = ()

    @property
    def errors(self) -> Tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.is_error)

    def resolve(self, node: n.Node) -> Optional[Symbol]:
        return self.resolutions.get(node)

    def class_methods(self) -> Iterator[MethodDecl]:
        """Every method of every base class (declared and introduced), in source order."""
        for cls in sorted(self.classes.values(), key=lambda c: c.span):
            yield from sorted(cls.methods, key=lambda m: m.span)

    def method(self, qualified_name: str) -> Optional[MethodDecl]:
        owner, _, name = qualified_name.partition(".")
        if owner in self.classes:
            return self.classes[owner].method(name)
        if owner in self.aspects:
            return self.aspects[owner].method(name)
        return None

    def aspects_in_order(self) -> Tuple[AspectDecl, ...]:
        """Aspects in precedence order: file order, then position."""
        return tuple(sorted(self.aspects.values(), key=lambda a: a.span))

    def advices(self) -> Iterator[AdviceDecl]:
        for aspect in self.aspects_in_order():
            yield from aspect.advices

    def without_aspects(self) -> "ProgramModel":
        """The base program alone: aspects and their introductions removed."""
        classes = {
            name: ClassDecl(
                cls.name,
                cls.declared_fields,
                cls.declared_methods,
                tuple(p for p in cls.declared_parents if p.introduced_by is None),
                cls.span,
            )
            for name, cls in self.classes.items()
        }
        return ProgramModel(classes, {}, self.diagnostics, self.resolutions, self.trees)
