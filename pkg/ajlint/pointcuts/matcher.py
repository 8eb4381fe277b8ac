"""Signature patterns and per-join-point pointcut evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Optional, Sequence

from ajlint.model.program import MethodDecl
from ajlint.syntax import nodes as n

OBJECT = "Object"

# Bindings of a successful match: bound name -> argument position.
Bindings = Dict[str, int]


@dataclass(frozen=True)
class JoinPoint:
    """A method execution, or a call of ``method`` made from the body of ``caller``."""

    kind: str
    method: MethodDecl
    caller: Optional[MethodDecl] = None

    @property
    def key(self) -> str:
        if self.kind == "execution":
            return f"execution({self.method.qualified_name})"
        return f"call({self.caller.qualified_name}->{self.method.qualified_name})"


def _segment(pattern: str, value: str) -> bool:
    return pattern == n.WILDCARD or pattern == value


def match_signature(pattern: n.SignaturePattern, method: MethodDecl) -> bool:
    """
    Check a method against ``ReturnType Declaring.name(params)``.

    ``*`` matches exactly one segment; ``..`` matches any (possibly empty) parameter tail.
    """
    if not (
        _segment(pattern.return_type, method.return_type)
        and _segment(pattern.declaring_type, method.owner)
        and _segment(pattern.name, method.name)
    ):
        return False
    actual = method.param_types
    expected = pattern.param_types
    if pattern.open_tail:
        if len(actual) < len(expected):
            return False
        actual = actual[: len(expected)]
    elif len(actual) != len(expected):
        return False
    return all(_segment(p, a) for p, a in zip(expected, actual))


def static_args_compatible(bound_type: str, param_type: str) -> bool:
    """No subtype lattice: exact type, or ``Object`` on either side (a bound Object takes primitives too)."""
    return bound_type == param_type or OBJECT in (bound_type, param_type)


def evaluate(
    expr: n.PointcutExpr,
    join_point: JoinPoint,
    binding_types: Mapping[str, str],
    residue: Optional[Callable[[str, Any], bool]] = None,
    values: Optional[Sequence[Any]] = None,
) -> Optional[Bindings]:
    """
    Evaluate ``expr`` at one join point.

    Returns None when the pointcut does not match, otherwise the positions bound by the
    ``args`` primitives that took part in the match. When ``values`` is given, ``args``
    also checks each runtime value with ``residue(bound_type, value)``.
    """
    if isinstance(expr, n.ExecutionPointcut):
        if join_point.kind == "execution" and match_signature(expr.pattern, join_point.method):
            return {}
        return None
    if isinstance(expr, n.CallPointcut):
        if join_point.kind == "call" and match_signature(expr.pattern, join_point.method):
            return {}
        return None
    if isinstance(expr, n.ArgsPointcut):
        params = join_point.method.param_types
        if len(params) != len(expr.names):
            return None
        for index, (name, param_type) in enumerate(zip(expr.names, params)):
            bound_type = binding_types.get(name, OBJECT)
            if not static_args_compatible(bound_type, param_type):
                return None
            if values is not None and residue is not None and not residue(bound_type, values[index]):
                return None
        return {name: index for index, name in enumerate(expr.names)}
    if isinstance(expr, n.NotPointcut):
        inner = evaluate(expr.operand, join_point, binding_types, residue, values)
        return {} if inner is None else None
    if isinstance(expr, n.AndPointcut):
        left = evaluate(expr.left, join_point, binding_types, residue, values)
        if left is None:
            return None
        right = evaluate(expr.right, join_point, binding_types, residue, values)
        if right is None:
            return None
        return {**left, **right}
    if isinstance(expr, n.OrPointcut):
        left = evaluate(expr.left, join_point, binding_types, residue, values)
        if left is not None:
            return left
        return evaluate(expr.right, join_point, binding_types, residue, values)
    # Unresolved references only survive in models that failed to build.
    return None


def evaluate_at(
    expr: n.PointcutExpr,
    join_point: JoinPoint,
    binding_types: Mapping[str, str],
    values: Sequence[Any],
    residue: Callable[[str, Any], bool],
) -> Optional[Bindings]:
    """Dynamic match used while interpreting: static shadow test plus the ``args`` residue."""
    return evaluate(expr, join_point, binding_types, residue, values)
