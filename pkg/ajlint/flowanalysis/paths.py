"""Brute-force path enumeration of proceed counts, used to cross-check the interval analysis."""

from __future__ import annotations

from itertools import product
from typing import FrozenSet, Optional, Sequence, Set, Tuple

from ajlint.syntax import nodes as n

# (proceeds so far, path has returned)
PathState = Tuple[int, bool]

DEFAULT_UNROLL_DEPTH = 3


def enumerate_proceed_counts(body: n.Block, unroll_depth: int = DEFAULT_UNROLL_DEPTH) -> FrozenSet[int]:
    """
    Proceed count of every syntactic path through ``body``.

    Every ``if`` arm and both outcomes of ``&&``/``||`` are explored; each ``while`` runs
    0 to ``unroll_depth`` iterations. Exact for loop-free bodies.
    """
    states = _block(body.statements, {(0, False)}, unroll_depth)
    return frozenset(count for count, _ in states)


def _expr(expr: Optional[n.Expr]) -> Set[int]:
    if expr is None:
        return {0}
    if isinstance(expr, n.Proceed):
        return {total + 1 for total in _combine([_expr(a) for a in expr.args])}
    if isinstance(expr, n.Binary) and expr.op in ("&&", "||"):
        return {left + right for left in _expr(expr.left) for right in _expr(expr.right) | {0}}
    return _combine([_expr(child) for child in n.children(expr)])


def _combine(parts) -> Set[int]:
    return {sum(choice) for choice in product(*parts)} if parts else {0}


def _block(statements: Sequence[n.Stmt], states: Set[PathState], depth: int) -> Set[PathState]:
    for stmt in statements:
        running = {count for count, done in states if not done}
        if not running:
            break
        finished = {state for state in states if state[1]}
        states = finished | _statement(stmt, running, depth)
    return states


def _advance(running: Set[int], expr: Optional[n.Expr]) -> Set[int]:
    extra = _expr(expr)
    return {count + e for count in running for e in extra}


def _statement(stmt: n.Stmt, running: Set[int], depth: int) -> Set[PathState]:
    if isinstance(stmt, n.LocalDecl):
        return {(c, False) for c in _advance(running, stmt.initializer)}
    if isinstance(stmt, n.Assign):
        return {(c, False) for c in _advance(_advance(running, stmt.target), stmt.value)}
    if isinstance(stmt, n.ExprStmt):
        return {(c, False) for c in _advance(running, stmt.expr)}
    if isinstance(stmt, n.Return):
        return {(c, True) for c in _advance(running, stmt.value)}
    if isinstance(stmt, n.If):
        start = {(c, False) for c in _advance(running, stmt.condition)}
        then = _block(stmt.then_block.statements, start, depth)
        if stmt.else_branch is None:
            otherwise = start
        elif isinstance(stmt.else_branch, n.If):
            otherwise = _statement(stmt.else_branch, {c for c, _ in start}, depth)
        else:
            otherwise = _block(stmt.else_branch.statements, start, depth)
        return then | otherwise
    if isinstance(stmt, n.While):
        results: Set[PathState] = set()
        pending = running
        for iteration in range(depth + 1):
            evaluated = _advance(pending, stmt.condition)
            results |= {(c, False) for c in evaluated}
            if iteration == depth:
                break
            after = _block(stmt.body.statements, {(c, False) for c in evaluated}, depth)
            results |= {state for state in after if state[1]}
            pending = {c for c, done in after if not done}
            if not pending:
                break
        return results
    raise TypeError(f"unexpected statement {stmt!r}")
