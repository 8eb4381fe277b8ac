"""Static join-point shadows of a program and the shadows selected by each advice."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterator, List, Tuple

from ajlint.errors import EmptyShadowWarning
from ajlint.model.program import AdviceDecl, MethodDecl, ProgramModel
from ajlint.pointcuts.matcher import JoinPoint, evaluate
from ajlint.syntax import nodes as n


@dataclass(frozen=True)
class ShadowSet:
    """Execution shadows as qualified method names; call shadows as (caller, callee) pairs."""

    executions: FrozenSet[str] = frozenset()
    calls: FrozenSet[Tuple[str, str]] = frozenset()

    def __or__(self, other: "ShadowSet") -> "ShadowSet":
        return ShadowSet(self.executions | other.executions, self.calls | other.calls)

    def __and__(self, other: "ShadowSet") -> "ShadowSet":
        return ShadowSet(self.executions & other.executions, self.calls & other.calls)

    def __sub__(self, other: "ShadowSet") -> "ShadowSet":
        return ShadowSet(self.executions - other.executions, self.calls - other.calls)

    def __le__(self, other: "ShadowSet") -> bool:
        return self.executions <= other.executions and self.calls <= other.calls

    def __len__(self) -> int:
        return len(self.executions) + len(self.calls)

    @property
    def is_empty(self) -> bool:
        return not self.executions and not self.calls

    def contains(self, join_point: JoinPoint) -> bool:
        if join_point.kind == "execution":
            return join_point.method.qualified_name in self.executions
        return (join_point.caller.qualified_name, join_point.method.qualified_name) in self.calls

    def keys(self) -> FrozenSet[str]:
        """Shadow keys in the form used by trace events: "execution(C.m)", "call(A.m->C.n)"."""
        return frozenset(
            [f"execution({name})" for name in self.executions]
            + [f"call({caller}->{callee})" for caller, callee in self.calls]
        )

    def to_dict(self):
        return {
            "executions": sorted(self.executions),
            "calls": [f"{caller}->{callee}" for caller, callee in sorted(self.calls)],
        }


@lru_cache(maxsize=64)
def join_point_shadows(model: ProgramModel) -> Tuple[JoinPoint, ...]:
    """
    Every static shadow of the program, in source order.

    Executions are all base-class methods, introduced ones included. Calls are the call
    sites of those methods found in base-class method bodies (introduced bodies too).
    """
    shadows: List[JoinPoint] = []
    methods = list(model.class_methods())
    for method in methods:
        shadows.append(JoinPoint("execution", method))
    for caller in methods:
        seen = set()
        for callee in _called_methods(caller.body, model):
            if callee.qualified_name not in seen:
                seen.add(callee.qualified_name)
                shadows.append(JoinPoint("call", callee, caller))
    return tuple(shadows)


def _called_methods(body: n.Block, model: ProgramModel) -> Iterator[MethodDecl]:
    for node in n.walk(body):
        if isinstance(node, n.Call):
            target = model.resolve(node)
            if isinstance(target, MethodDecl) and not target.owner_is_aspect:
                yield target


def _to_set(join_points) -> ShadowSet:
    executions, calls = set(), set()
    for jp in join_points:
        if jp.kind == "execution":
            executions.add(jp.method.qualified_name)
        else:
            calls.add((jp.caller.qualified_name, jp.method.qualified_name))
    return ShadowSet(frozenset(executions), frozenset(calls))


def universe(model: ProgramModel) -> ShadowSet:
    return _to_set(join_point_shadows(model))


def select(expr: n.PointcutExpr, model: ProgramModel, binding_types=None) -> ShadowSet:
    """Shadows selected by ``expr``; negation is taken relative to ``universe(model)``."""
    binding_types = binding_types or {}
    return _to_set(
        jp for jp in join_point_shadows(model) if evaluate(expr, jp, binding_types) is not None
    )


def shadows_of(advice: AdviceDecl, model: ProgramModel) -> ShadowSet:
    """
    Shadows intercepted by ``advice``.

    ``args`` restricts matches to methods whose parameters are compatible with the bound
    parameter types. An empty result is reported through ``EmptyShadowWarning``.
    """
    shadows = select(advice.pointcut, model, advice.binding_types)
    if shadows.is_empty:
        warnings.warn(EmptyShadowWarning(advice.ref, advice.span), stacklevel=2)
    return shadows
