"""
Weaving interpreter for AJML, used as the dynamic oracle of the static analyses.

At every join point the matching advices run in a fixed order: call-site advices wrap
execution advices; within one join point all befores run, then the arounds nest
(outermost = first in precedence order) around the body, then all afters run.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from ajlint.errors import FuelExhausted, InterpreterError, RuntimeFault
from ajlint.model.program import (
    AdviceDecl,
    ClassSymbol,
    FieldDecl,
    IntrinsicSymbol,
    LocalSymbol,
    MethodDecl,
    ProgramModel,
)
from ajlint.oracle.trace import BASE, EventKind, ExecutionTrace, TraceEvent
from ajlint.oracle.values import Instance, accepts, default_value, freeze, identity, render, same_value
from ajlint.pointcuts.matcher import Bindings, JoinPoint, evaluate_at
from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span

logger = logging.getLogger(__name__)

DEFAULT_FUEL = 100_000


class _Return(Exception):
    def __init__(self, value: Any):
        super().__init__()
        self.value = value


@dataclass
class Frame:
    activation_id: int
    this: Optional[Instance]
    origin: str
    method: Optional[MethodDecl] = None
    advice: Optional[AdviceDecl] = None
    proceed: Optional[Callable[[List[Any]], Any]] = None
    # Object intercepted by the advice this frame belongs to (inherited by helper calls).
    jp_target: Optional[Instance] = None
    scopes: List[Dict[str, Any]] = field(default_factory=lambda: [{}])

    @property
    def is_class_code(self) -> bool:
        return self.method is not None and not self.method.owner_is_aspect

    def lookup(self, name: str, span: Span) -> Any:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        raise RuntimeFault(f"unbound local '{name}'", span)

    def assign(self, name: str, value: Any) -> None:
        for scope in reversed(self.scopes):
            if name in scope:
                scope[name] = value
                return
        self.scopes[-1][name] = value


@dataclass(frozen=True)
class _Advised:
    advice: AdviceDecl
    bindings: Bindings

    def rebind(self, args: Sequence[Any], values: Sequence[Any], span: Span) -> List[Any]:
        """Join-point arguments after ``proceed(values)`` replaced the bound positions."""
        params = self.advice.bound_params
        if len(values) != len(params):
            raise RuntimeFault(f"proceed expects {len(params)} argument(s)", span)
        updated = list(args)
        for param, value in zip(params, values):
            position = self.bindings.get(param.name)
            if position is not None:
                updated[position] = value
        return updated


class _BodyStage:
    def __init__(self, method: MethodDecl):
        self.method = method

    def __call__(self, interp: "Interpreter", target: Optional[Instance], args: List[Any]) -> Any:
        return interp.execute_body(self.method, target, args)


class _ExecutionStage:
    """Continuation of a call join point: the execution join point of the callee."""

    def __init__(self, method: MethodDecl):
        self.method = method

    def __call__(self, interp: "Interpreter", target: Optional[Instance], args: List[Any]) -> Any:
        return interp.weave(JoinPoint("execution", self.method), target, args, _BodyStage(self.method))


Stage = Callable[["Interpreter", Optional[Instance], List[Any]], Any]


def interpret(model: ProgramModel, entry: str, fuel: int = DEFAULT_FUEL) -> ExecutionTrace:
    """
    Run ``entry`` with every aspect of ``model`` woven in.

    Args:
        model: A resolved program
        entry: A zero-parameter method, either ``name`` or ``Class.name``
        fuel: Step budget; statements, calls and object creations each cost one step

    Returns:
        The complete execution trace

    Raises:
        FuelExhausted: when the budget runs out
        RuntimeFault: on a null dereference, arity mismatch or similar fault
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    return Interpreter(model, fuel).run(entry)


class Interpreter:
    def __init__(self, model: ProgramModel, fuel: int = DEFAULT_FUEL, *, record: bool = True, oid_sign: int = 1):
        self.model = model
        self.initial_fuel = fuel
        self.fuel = fuel
        self.record = record
        self.trace = ExecutionTrace()
        self.shared: Dict[str, Instance] = {}
        self.aspect_instances: Dict[str, Instance] = {}
        self._oid_sign = oid_sign
        self._next_oid = 1
        self._next_activation = 0
        self._advices = list(model.advices())

    # ------------------------------------------------------------------
    # Entry point
    # ------------------------------------------------------------------

    def run(self, entry: str) -> ExecutionTrace:
        method = self.entry_method(entry)
        logger.info(f"Interpreting {method.qualified_name} with fuel {self.fuel}")
        try:
            target = self.shared_instance(method.owner, None)
            self.invoke(method, target, [], None, method.span)
        except InterpreterError as exc:
            exc.trace = self.trace
            raise
        except RecursionError:
            raise RuntimeFault("call depth exceeded", method.span, self.trace) from None
        logger.info(f"Interpretation finished: {len(self.trace)} events, {self.initial_fuel - self.fuel} steps")
        return self.trace

    def entry_method(self, entry: str) -> MethodDecl:
        if "." in entry:
            candidates = [m for m in self.model.class_methods() if m.qualified_name == entry]
        else:
            candidates = [m for m in self.model.class_methods() if m.name == entry]
        candidates = [m for m in candidates if m.arity == 0 and m.introduced_by is None]
        if len(candidates) > 1:
            candidates = [m for m in candidates if m.owner == "Main"] or candidates[:1]
        if not candidates:
            raise RuntimeFault(f"entry '{entry}' does not name a zero-parameter method")
        return candidates[0]

    # ------------------------------------------------------------------
    # Bookkeeping
    # ------------------------------------------------------------------

    def step(self, span: Optional[Span]) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("fuel exhausted", span, self.trace)

    def emit(self, kind: EventKind, subject: str, activation_id: int, origin: str, **details: Any) -> None:
        if self.record:
            self.trace.record(TraceEvent(kind, subject, activation_id, origin, **details))

    def new_activation(self) -> int:
        self._next_activation += 1
        return self._next_activation

    def allocate(self, class_name: str) -> Instance:
        oid = self._next_oid * self._oid_sign
        self._next_oid += 1
        return Instance(class_name, oid)

    def instantiate(self, class_name: str, creator: Optional[Frame]) -> Instance:
        """Create an object (or aspect singleton) and run its field initializers."""
        instance = self.allocate(class_name)
        if class_name in self.model.classes:
            decls = self.model.classes[class_name].fields
        else:
            decls = self.model.aspects[class_name].fields
        for decl in decls:
            instance.fields[decl.name] = default_value(decl.type_name)
        activation = creator.activation_id if creator else 0
        for decl in decls:
            if decl.initializer is None:
                continue
            origin = decl.introduced_by or (decl.owner if decl.owner_is_aspect else None)
            origin = origin or (creator.origin if creator else BASE)
            frame = Frame(activation, instance, origin, jp_target=creator.jp_target if creator else None)
            instance.fields[decl.name] = self.eval(decl.initializer, frame)
        return instance

    def shared_instance(self, class_name: str, creator: Optional[Frame]) -> Instance:
        if class_name not in self.shared:
            self.shared[class_name] = self.instantiate(class_name, creator)
        return self.shared[class_name]

    def aspect_instance(self, name: str) -> Instance:
        if name not in self.aspect_instances:
            self.aspect_instances[name] = self.instantiate(name, None)
        return self.aspect_instances[name]

    def designate(self, class_name: str, frame: Frame) -> Instance:
        """Object meant by a class-qualified ``C.x``."""
        if frame.jp_target is not None and frame.jp_target.class_name == class_name:
            return frame.jp_target
        if frame.this is not None and frame.this.class_name == class_name:
            return frame.this
        return self.shared_instance(class_name, frame)

    # ------------------------------------------------------------------
    # Invocation and weaving
    # ------------------------------------------------------------------

    def invoke(self, method: MethodDecl, target: Optional[Instance], args: List[Any],
               caller: Optional[Frame], span: Span) -> Any:
        if len(args) != method.arity:
            raise RuntimeFault(f"method '{method.qualified_name}' expects {method.arity} argument(s)", span)
        if method.owner_is_aspect:
            return self.execute_body(method, target, args, caller.jp_target if caller else None)
        if caller is not None and caller.is_class_code:
            return self.weave(JoinPoint("call", method, caller.method), target, args, _ExecutionStage(method))
        return self.weave(JoinPoint("execution", method), target, args, _BodyStage(method))

    def matching(self, join_point: JoinPoint, args: Sequence[Any]) -> List[_Advised]:
        matched = []
        for advice in self._advices:
            bindings = evaluate_at(advice.pointcut, join_point, advice.binding_types, args, accepts)
            if bindings is not None:
                matched.append(_Advised(advice, bindings))
        return matched

    def weave(self, join_point: JoinPoint, target: Optional[Instance], args: List[Any], inner: Stage) -> Any:
        matched = self.matching(join_point, args)
        if not matched:
            return inner(self, target, args)
        for advised in matched:
            if advised.advice.kind == "before":
                self.run_advice(advised, join_point, target, args)
        arounds = [a for a in matched if a.advice.kind == "around"]
        result = self.run_chain(arounds, 0, join_point, target, args, inner)
        for advised in matched:
            if advised.advice.kind == "after":
                self.run_advice(advised, join_point, target, args)
        return result

    def run_chain(self, arounds: List[_Advised], index: int, join_point: JoinPoint,
                  target: Optional[Instance], args: List[Any], inner: Stage) -> Any:
        if index == len(arounds):
            return inner(self, target, args)
        advised = arounds[index]

        def proceed(values: List[Any]) -> Any:
            updated = advised.rebind(args, values, advised.advice.span)
            return self.run_chain(arounds, index + 1, join_point, target, updated, inner)

        reference = None
        if self.record:
            snapshot = copy.deepcopy((target, list(args), self.shared, self.aspect_instances))

            def reference():
                return self.reference_result(snapshot, arounds, index + 1, join_point, inner)

        return self.run_advice(advised, join_point, target, args, proceed, reference)

    def reference_result(self, snapshot, arounds: List[_Advised], index: int,
                         join_point: JoinPoint, inner: Stage) -> Any:
        """Result of the rest of the chain run on the heap as it was when the advice started."""
        target, args, shared, aspects = snapshot
        child = Interpreter(self.model, self.initial_fuel, record=False, oid_sign=-1)
        child.shared, child.aspect_instances = shared, aspects
        try:
            value = child.run_chain(arounds, index, join_point, target, args, inner)
        except (InterpreterError, RecursionError) as exc:
            logger.debug(f"Reference execution at {join_point.key} abandoned: {exc}")
            return None
        return freeze(value)

    def run_advice(self, advised: _Advised, join_point: JoinPoint, target: Optional[Instance],
                   args: List[Any], proceed: Optional[Callable[[List[Any]], Any]] = None,
                   reference: Optional[Callable[[], Any]] = None) -> Any:
        advice = advised.advice
        self.step(advice.span)
        activation = self.new_activation()
        origin = advice.aspect

        def invoke_proceed(values: List[Any]) -> Any:
            updated = advised.rebind(args, values, advice.span)
            self.emit(EventKind.PROCEED_INVOKED, advice.ref, activation, origin,
                      args=tuple(identity(a) for a in updated))
            return proceed(values)

        bound = {}
        for param in advice.bound_params:
            position = advised.bindings.get(param.name)
            bound[param.name] = args[position] if position is not None else default_value(param.type_name)
        frame = Frame(
            activation, self.aspect_instance(advice.aspect), origin, advice=advice,
            proceed=invoke_proceed if proceed is not None else None,
            jp_target=target, scopes=[bound],
        )
        self.emit(EventKind.ADVICE_ENTER, advice.ref, activation, origin,
                  args=tuple(identity(a) for a in args), declared_by=advice.aspect, shadow=join_point.key)
        try:
            self.exec_block(advice.body, frame)
            value = None
        except _Return as ret:
            value = ret.value
        expected = reference() if reference is not None else None
        self.emit(EventKind.ADVICE_EXIT, advice.ref, activation, origin,
                  value=freeze(value), reference=expected, declared_by=advice.aspect, shadow=join_point.key)
        return value

    def execute_body(self, method: MethodDecl, target: Optional[Instance], args: List[Any],
                     jp_target: Optional[Instance] = None) -> Any:
        self.step(method.span)
        activation = self.new_activation()
        origin = method.declaring_aspect or BASE
        scope = {p.name: value for p, value in zip(method.params, args)}
        frame = Frame(activation, target, origin, method=method, jp_target=jp_target, scopes=[scope])
        self.emit(EventKind.METHOD_BODY_ENTER, method.qualified_name, activation, origin,
                  args=tuple(identity(a) for a in args), declared_by=method.declaring_aspect)
        try:
            self.exec_block(method.body, frame)
            value = None
        except _Return as ret:
            value = ret.value
        self.emit(EventKind.METHOD_BODY_EXIT, method.qualified_name, activation, origin,
                  value=freeze(value), declared_by=method.declaring_aspect)
        return value

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def exec_block(self, block: n.Block, frame: Frame) -> None:
        frame.scopes.append({})
        try:
            for stmt in block.statements:
                self.exec_stmt(stmt, frame)
        finally:
            frame.scopes.pop()

    def exec_stmt(self, stmt: n.Stmt, frame: Frame) -> None:
        self.step(stmt.span)
        if isinstance(stmt, n.LocalDecl):
            value = default_value(stmt.type_name) if stmt.initializer is None else self.eval(stmt.initializer, frame)
            frame.scopes[-1][stmt.name] = value
        elif isinstance(stmt, n.Assign):
            self.assign(stmt.target, stmt.value, frame)
        elif isinstance(stmt, n.If):
            if self.truth(self.eval(stmt.condition, frame), stmt.condition.span):
                self.exec_block(stmt.then_block, frame)
            elif isinstance(stmt.else_branch, n.If):
                self.exec_stmt(stmt.else_branch, frame)
            elif stmt.else_branch is not None:
                self.exec_block(stmt.else_branch, frame)
        elif isinstance(stmt, n.While):
            while self.truth(self.eval(stmt.condition, frame), stmt.condition.span):
                self.exec_block(stmt.body, frame)
                self.step(stmt.span)
        elif isinstance(stmt, n.Return):
            raise _Return(None if stmt.value is None else self.eval(stmt.value, frame))
        elif isinstance(stmt, n.ExprStmt):
            self.eval(stmt.expr, frame)

    def assign(self, target: n.Expr, value_expr: n.Expr, frame: Frame) -> None:
        symbol = self.model.resolve(target)
        if isinstance(target, n.FieldAccess):
            owner = self.receiver(target.receiver, frame)
            self.write_field(owner, symbol, self.eval(value_expr, frame), frame, target.span)
        elif isinstance(symbol, LocalSymbol):
            frame.assign(symbol.name, self.eval(value_expr, frame))
        elif isinstance(symbol, FieldDecl):
            owner = self.implicit_owner(symbol, frame)
            self.write_field(owner, symbol, self.eval(value_expr, frame), frame, target.span)
        else:
            raise RuntimeFault("unresolved assignment target", target.span)

    def truth(self, value: Any, span: Span) -> bool:
        if not isinstance(value, bool):
            raise RuntimeFault("condition is not a boolean", span)
        return value

    # ------------------------------------------------------------------
    # Fields
    # ------------------------------------------------------------------

    def implicit_owner(self, decl: FieldDecl, frame: Frame) -> Optional[Instance]:
        if decl.owner_is_aspect:
            return self.aspect_instance(decl.owner)
        return frame.this

    def _field_event(self, kind: EventKind, decl: FieldDecl, frame: Frame) -> None:
        declared_by = decl.owner if decl.owner_is_aspect else decl.introduced_by
        self.emit(kind, decl.qualified_name, frame.activation_id, frame.origin,
                  declared_by=declared_by, aspect_state=decl.owner_is_aspect)

    def read_field(self, owner: Optional[Instance], decl: Any, frame: Frame, span: Span) -> Any:
        if owner is None:
            raise RuntimeFault("null field access", span)
        if not isinstance(decl, FieldDecl) or decl.name not in owner.fields:
            raise RuntimeFault(f"no such field on {owner!r}", span)
        self._field_event(EventKind.FIELD_READ, decl, frame)
        return owner.fields[decl.name]

    def write_field(self, owner: Optional[Instance], decl: Any, value: Any, frame: Frame, span: Span) -> None:
        if owner is None:
            raise RuntimeFault("null field access", span)
        if not isinstance(decl, FieldDecl) or decl.name not in owner.fields:
            raise RuntimeFault(f"no such field on {owner!r}", span)
        owner.fields[decl.name] = value
        self._field_event(EventKind.FIELD_WRITE, decl, frame)

    def receiver(self, expr: n.Expr, frame: Frame) -> Any:
        if isinstance(expr, n.Name) and isinstance(self.model.resolve(expr), ClassSymbol):
            return self.designate(expr.identifier, frame)
        return self.eval(expr, frame)

    # ------------------------------------------------------------------
    # Expressions
    # ------------------------------------------------------------------

    def eval(self, expr: n.Expr, frame: Frame) -> Any:
        if isinstance(expr, (n.IntLiteral, n.StringLiteral, n.BoolLiteral)):
            return expr.value
        if isinstance(expr, n.NullLiteral):
            return None
        if isinstance(expr, n.This):
            return frame.this
        if isinstance(expr, n.Name):
            symbol = self.model.resolve(expr)
            if isinstance(symbol, LocalSymbol):
                return frame.lookup(symbol.name, expr.span)
            if isinstance(symbol, FieldDecl):
                return self.read_field(self.implicit_owner(symbol, frame), symbol, frame, expr.span)
            raise RuntimeFault(f"unresolved name '{expr.identifier}'", expr.span)
        if isinstance(expr, n.FieldAccess):
            owner = self.receiver(expr.receiver, frame)
            return self.read_field(owner, self.model.resolve(expr), frame, expr.span)
        if isinstance(expr, n.Call):
            return self.call(expr, frame)
        if isinstance(expr, n.Proceed):
            values = [self.eval(arg, frame) for arg in expr.args]
            if frame.proceed is None:
                raise RuntimeFault("proceed outside around advice", expr.span)
            return frame.proceed(values)
        if isinstance(expr, n.New):
            self.step(expr.span)
            return self.instantiate(expr.class_name, frame)
        if isinstance(expr, n.Unary):
            value = self.eval(expr.operand, frame)
            if expr.op == "!":
                return not self.truth(value, expr.operand.span)
            return -self.integer(value, expr.operand.span)
        if isinstance(expr, n.Binary):
            return self.binary(expr, frame)
        raise RuntimeFault(f"cannot evaluate {type(expr).__name__}", expr.span)

    def call(self, expr: n.Call, frame: Frame) -> Any:
        symbol = self.model.resolve(expr)
        if isinstance(symbol, IntrinsicSymbol) and not symbol.member:
            value = self.eval(expr.args[0], frame)
            self.trace.output.append(render(value))
            return None
        if isinstance(symbol, IntrinsicSymbol):
            receiver = self.receiver(expr.receiver, frame)
            args = [self.eval(arg, frame) for arg in expr.args]
            if receiver is None:
                raise RuntimeFault(f"'{expr.name}' called on null", expr.span)
            if expr.name == "toString":
                return render(receiver)
            return same_value(receiver, args[0])
        if not isinstance(symbol, MethodDecl):
            raise RuntimeFault(f"unresolved method '{expr.name}'", expr.span)

        if expr.receiver is not None:
            target = self.receiver(expr.receiver, frame)
        elif symbol.owner_is_aspect:
            target = self.aspect_instance(symbol.owner)
        else:
            target = frame.this
        args = [self.eval(arg, frame) for arg in expr.args]
        if target is None:
            raise RuntimeFault(f"method '{symbol.qualified_name}' called on null", expr.span)
        self.emit(EventKind.CALL_INVOKED, symbol.qualified_name, frame.activation_id, frame.origin,
                  args=tuple(identity(a) for a in args), declared_by=symbol.declaring_aspect)
        return self.invoke(symbol, target, args, frame, expr.span)

    def integer(self, value: Any, span: Span) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise RuntimeFault("operand is not an int", span)
        return value

    def binary(self, expr: n.Binary, frame: Frame) -> Any:
        op = expr.op
        if op == "&&":
            return self.truth(self.eval(expr.left, frame), expr.left.span) and \
                self.truth(self.eval(expr.right, frame), expr.right.span)
        if op == "||":
            return self.truth(self.eval(expr.left, frame), expr.left.span) or \
                self.truth(self.eval(expr.right, frame), expr.right.span)
        left = self.eval(expr.left, frame)
        right = self.eval(expr.right, frame)
        if op == "==":
            return same_value(left, right)
        if op == "!=":
            return not same_value(left, right)
        if op == "+" and (isinstance(left, str) or isinstance(right, str)):
            return render(left) + render(right)
        a = self.integer(left, expr.left.span)
        b = self.integer(right, expr.right.span)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op in ("/", "%"):
            if b == 0:
                raise RuntimeFault("division by zero", expr.span)
            # Truncating division, as in Java.
            quotient = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                quotient = -quotient
            return quotient if op == "/" else a - b * quotient
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise RuntimeFault(f"unknown operator '{op}'", expr.span)
