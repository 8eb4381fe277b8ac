"""
Analyses of how an around advice uses ``proceed``: how often it runs the intercepted body,
whether it hands back a different result, and whether it changes the arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from ajlint.flowanalysis.interval import ONE, UNBOUNDED, ZERO, ProceedInterval
from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span


# ---------------------------------------------------------------------------
# Proceed interval
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Flow:
    """Proceed counts of paths still running (``fallthrough``) and of paths that returned."""

    fallthrough: ProceedInterval
    returned: ProceedInterval


def expression_interval(expr: Optional[n.Expr]) -> ProceedInterval:
    if expr is None:
        return ZERO
    if isinstance(expr, n.Proceed):
        return _sum(expression_interval(a) for a in expr.args) + ONE
    if isinstance(expr, n.Binary) and expr.op in ("&&", "||"):
        # The right operand may be short-circuited away.
        return expression_interval(expr.left) + (expression_interval(expr.right) | ZERO)
    return _sum(expression_interval(child) for child in n.children(expr))


def _sum(intervals) -> ProceedInterval:
    total = ZERO
    for interval in intervals:
        total = total + interval
    return total


def _block_flow(statements: Sequence[n.Stmt], flow: _Flow) -> _Flow:
    for stmt in statements:
        if flow.fallthrough.is_empty:
            break
        flow = _statement_flow(stmt, flow)
    return flow


def _statement_flow(stmt: n.Stmt, flow: _Flow) -> _Flow:
    current, returned = flow.fallthrough, flow.returned
    if isinstance(stmt, n.LocalDecl):
        return _Flow(current + expression_interval(stmt.initializer), returned)
    if isinstance(stmt, n.Assign):
        effect = expression_interval(stmt.target) + expression_interval(stmt.value)
        return _Flow(current + effect, returned)
    if isinstance(stmt, n.ExprStmt):
        return _Flow(current + expression_interval(stmt.expr), returned)
    if isinstance(stmt, n.Return):
        return _Flow(ProceedInterval.empty(), returned | (current + expression_interval(stmt.value)))
    if isinstance(stmt, n.If):
        after_condition = current + expression_interval(stmt.condition)
        then = _block_flow(stmt.then_block.statements, _Flow(after_condition, ProceedInterval.empty()))
        if stmt.else_branch is None:
            otherwise = _Flow(after_condition, ProceedInterval.empty())
        elif isinstance(stmt.else_branch, n.If):
            otherwise = _statement_flow(stmt.else_branch, _Flow(after_condition, ProceedInterval.empty()))
        else:
            otherwise = _block_flow(stmt.else_branch.statements, _Flow(after_condition, ProceedInterval.empty()))
        return _Flow(
            then.fallthrough | otherwise.fallthrough,
            returned | then.returned | otherwise.returned,
        )
    if isinstance(stmt, n.While):
        condition = expression_interval(stmt.condition)
        body = _block_flow(stmt.body.statements, _Flow(ZERO, ProceedInterval.empty()))
        body_total = body.fallthrough | body.returned
        proceeds_inside = condition.max > 0 or (not body_total.is_empty and body_total.max > 0)
        loop = UNBOUNDED if proceeds_inside else ZERO
        entered = current + condition + loop
        if not body.returned.is_empty:
            returned = returned | (entered + body.returned)
        return _Flow(entered, returned)
    raise TypeError(f"unexpected statement {stmt!r}")


def proceed_interval(body: n.Block) -> ProceedInterval:
    """
    Bounds on the number of ``proceed`` executions over one run of ``body``.

    Both arms of every ``if`` are considered feasible. A ``while`` whose condition or body
    may proceed contributes ``(0, MANY)``; one that never proceeds contributes nothing.
    """
    flow = _block_flow(body.statements, _Flow(ZERO, ProceedInterval.empty()))
    return flow.fallthrough | flow.returned


def proceed_sites(body: n.Block) -> Tuple[Span, ...]:
    return tuple(node.span for node in n.walk(body) if isinstance(node, n.Proceed))


# ---------------------------------------------------------------------------
# Reaching definitions (straight-line and syntactic, joined at branches)
# ---------------------------------------------------------------------------

Env = Dict[str, FrozenSet[str]]
OTHER = frozenset({"other"})


class _DefinitionWalker:
    """Tracks, per variable, which kinds of assignment may reach each program point."""

    def __init__(
        self,
        kind_of: Callable[[n.Expr, Env], FrozenSet[str]],
        on_proceed: Callable[[n.Proceed, Env], None] = lambda node, env: None,
        on_return: Callable[[n.Return, Env], None] = lambda node, env: None,
    ):
        self.kind_of = kind_of
        self.on_proceed = on_proceed
        self.on_return = on_return

    def block(self, statements: Sequence[n.Stmt], env: Optional[Env]) -> Optional[Env]:
        for stmt in statements:
            if env is None:
                return None
            env = self.statement(stmt, env)
        return env

    def statement(self, stmt: n.Stmt, env: Env) -> Optional[Env]:
        if isinstance(stmt, n.LocalDecl):
            self.visit(stmt.initializer, env)
            kind = OTHER if stmt.initializer is None else self.kind_of(stmt.initializer, env)
            return {**env, stmt.name: kind}
        if isinstance(stmt, n.Assign):
            self.visit(stmt.value, env)
            if isinstance(stmt.target, n.Name):
                return {**env, stmt.target.identifier: self.kind_of(stmt.value, env)}
            self.visit(stmt.target, env)
            return env
        if isinstance(stmt, n.ExprStmt):
            self.visit(stmt.expr, env)
            return env
        if isinstance(stmt, n.Return):
            self.visit(stmt.value, env)
            self.on_return(stmt, env)
            return None
        if isinstance(stmt, n.If):
            self.visit(stmt.condition, env)
            then = self.block(stmt.then_block.statements, dict(env))
            if stmt.else_branch is None:
                otherwise: Optional[Env] = dict(env)
            elif isinstance(stmt.else_branch, n.If):
                otherwise = self.statement(stmt.else_branch, dict(env))
            else:
                otherwise = self.block(stmt.else_branch.statements, dict(env))
            return _join(then, otherwise)
        if isinstance(stmt, n.While):
            loop_env: Env = env
            while True:
                self.visit(stmt.condition, loop_env)
                out = self.block(stmt.body.statements, dict(loop_env))
                widened = _join(loop_env, out)
                if widened == loop_env:
                    return loop_env
                loop_env = widened
        raise TypeError(f"unexpected statement {stmt!r}")

    def visit(self, expr: Optional[n.Expr], env: Env) -> None:
        if expr is None:
            return
        for node in n.walk(expr):
            if isinstance(node, n.Proceed):
                self.on_proceed(node, env)


def _join(a: Optional[Env], b: Optional[Env]) -> Optional[Env]:
    if a is None:
        return b
    if b is None:
        return a
    joined = dict(a)
    for name, kinds in b.items():
        joined[name] = joined.get(name, frozenset()) | kinds
    return joined


# ---------------------------------------------------------------------------
# Result replacement
# ---------------------------------------------------------------------------

PROCEED_RESULT = frozenset({"proceed"})


def _result_kind(expr: n.Expr, env: Env) -> FrozenSet[str]:
    return PROCEED_RESULT if isinstance(expr, n.Proceed) else OTHER


def result_replacement_sites(
    body: n.Block, params: Sequence[n.Param] = (), returns_value: bool = False
) -> Tuple[Span, ...]:
    """
    Spans of ``return e`` statements whose value may not be the intercepted body's result.

    With ``returns_value`` (a non-void advice) a bare ``return;`` hands back null, and so does
    a body that can fall off its end; the block itself is then a site too.
    """
    sites: List[Span] = []

    def on_return(stmt: n.Return, env: Env) -> None:
        value = stmt.value
        if isinstance(value, n.Proceed) or (value is None and not returns_value):
            return
        if isinstance(value, n.Name) and env.get(value.identifier) == PROCEED_RESULT:
            return
        if stmt.span not in sites:
            sites.append(stmt.span)

    initial: Env = {p.name: OTHER for p in params}
    end = _DefinitionWalker(_result_kind, on_return=on_return).block(body.statements, initial)
    if returns_value and end is not None:
        sites.append(body.span)
    return tuple(sites)


def detect_result_replacement(
    body: n.Block, interval: ProceedInterval, params: Sequence[n.Param] = (), returns_value: bool = False
) -> bool:
    """True iff the body always proceeds but some exit hands back another value."""
    return interval.min >= 1 and bool(result_replacement_sites(body, params, returns_value))


# ---------------------------------------------------------------------------
# Argument passing
# ---------------------------------------------------------------------------

UNCHANGED_PARAM = frozenset({"param"})


def argument_passing_sites(body: n.Block, bound_params: Sequence[n.Param]) -> Tuple[Span, ...]:
    """Spans of ``proceed`` calls that may pass something other than the original arguments."""
    names = [p.name for p in bound_params]
    sites: List[Span] = []

    def on_proceed(node: n.Proceed, env: Env) -> None:
        for position, arg in enumerate(node.args):
            expected = names[position] if position < len(names) else None
            unchanged = (
                isinstance(arg, n.Name)
                and arg.identifier == expected
                and env.get(expected) == UNCHANGED_PARAM
            )
            if not unchanged:
                if node.span not in sites:
                    sites.append(node.span)
                return

    initial: Env = {name: UNCHANGED_PARAM for name in names}
    _DefinitionWalker(_result_kind, on_proceed=on_proceed).block(body.statements, initial)
    return tuple(sites)


def detect_argument_passing(body: n.Block, bound_params: Sequence[n.Param]) -> bool:
    return bool(argument_passing_sites(body, bound_params))
