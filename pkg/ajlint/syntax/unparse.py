"""Canonical AJML source rendering of syntax trees."""

from __future__ import annotations

from typing import List

from ajlint.syntax import nodes as n

INDENT = "    "

# Tighter operators bind with higher numbers; mirrors the parser's levels.
_PRECEDENCE = {
    "||": 1, "&&": 2, "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5, "*": 6, "/": 6, "%": 6,
}
_UNARY_PRECEDENCE = 7


def unparse(tree: n.SyntaxTree) -> str:
    lines: List[str] = []
    for decl in tree.declarations:
        if lines:
            lines.append("")
        if isinstance(decl, n.ClassNode):
            _class(decl, lines)
        else:
            _aspect(decl, lines)
    return "\n".join(lines) + "\n"


def _class(node: n.ClassNode, out: List[str]) -> None:
    header = f"class {node.name}"
    if node.parents:
        header += " implements " + ", ".join(node.parents)
    out.append(header + " {")
    for member in node.members:
        if isinstance(member, n.FieldNode):
            out.append(INDENT + _field(member.visibility, member.type_name, member.name, member.initializer))
        else:
            _method(member.visibility, member.return_type, member.name, member.params, member.body, out)
    out.append("}")


def _aspect(node: n.AspectNode, out: List[str]) -> None:
    prefix = "privileged " if node.privileged else ""
    out.append(f"{prefix}aspect {node.name} {{")
    for member in node.members:
        if isinstance(member, n.PointcutDeclNode):
            out.append(f"{INDENT}pointcut {member.name}({_params(member.params)}): {pointcut(member.expr)};")
        elif isinstance(member, n.DeclareParentsNode):
            out.append(f"{INDENT}declare parents : {member.target} implements {member.interface};")
        elif isinstance(member, n.AdviceNode):
            head = member.kind if member.return_type is None else f"{member.return_type} around"
            out.append(f"{INDENT}{head}({_params(member.params)}): {pointcut(member.pointcut)} {{")
            _statements(member.body.statements, 2, out)
            out.append(INDENT + "}")
        elif isinstance(member, n.InterTypeFieldNode):
            qualified = f"{member.target}.{member.name}"
            out.append(INDENT + _field(member.visibility, member.type_name, qualified, member.initializer))
        elif isinstance(member, n.InterTypeMethodNode):
            qualified = f"{member.target}.{member.name}"
            _method(member.visibility, member.return_type, qualified, member.params, member.body, out)
        elif isinstance(member, n.FieldNode):
            out.append(INDENT + _field(member.visibility, member.type_name, member.name, member.initializer))
        else:
            _method(member.visibility, member.return_type, member.name, member.params, member.body, out)
    out.append("}")


def _field(visibility: str, type_name: str, name: str, initializer) -> str:
    text = f"{visibility} {type_name} {name}"
    if initializer is not None:
        text += f" = {expression(initializer)}"
    return text + ";"


def _method(visibility, return_type, name, params, body: n.Block, out: List[str]) -> None:
    out.append(f"{INDENT}{visibility} {return_type} {name}({_params(params)}) {{")
    _statements(body.statements, 2, out)
    out.append(INDENT + "}")


def _params(params) -> str:
    return ", ".join(f"{p.type_name} {p.name}" for p in params)


def _statements(statements, depth: int, out: List[str]) -> None:
    for stmt in statements:
        _statement(stmt, depth, out)


def _statement(stmt: n.Stmt, depth: int, out: List[str]) -> None:
    pad = INDENT * depth
    if isinstance(stmt, n.LocalDecl):
        text = f"{pad}{stmt.type_name} {stmt.name}"
        if stmt.initializer is not None:
            text += f" = {expression(stmt.initializer)}"
        out.append(text + ";")
    elif isinstance(stmt, n.Assign):
        out.append(f"{pad}{expression(stmt.target)} = {expression(stmt.value)};")
    elif isinstance(stmt, n.Return):
        out.append(f"{pad}return;" if stmt.value is None else f"{pad}return {expression(stmt.value)};")
    elif isinstance(stmt, n.ExprStmt):
        out.append(f"{pad}{expression(stmt.expr)};")
    elif isinstance(stmt, n.While):
        out.append(f"{pad}while ({expression(stmt.condition)}) {{")
        _statements(stmt.body.statements, depth + 1, out)
        out.append(pad + "}")
    elif isinstance(stmt, n.If):
        out.append(f"{pad}if ({expression(stmt.condition)}) {{")
        current = stmt
        while True:
            _statements(current.then_block.statements, depth + 1, out)
            branch = current.else_branch
            if branch is None:
                out.append(pad + "}")
                break
            if isinstance(branch, n.If):
                out.append(f"{pad}}} else if ({expression(branch.condition)}) {{")
                current = branch
                continue
            out.append(pad + "} else {")
            _statements(branch.statements, depth + 1, out)
            out.append(pad + "}")
            break


def expression(expr: n.Expr, parent_precedence: int = 0) -> str:
    if isinstance(expr, n.Name):
        return expr.identifier
    if isinstance(expr, n.This):
        return "this"
    if isinstance(expr, n.IntLiteral):
        return str(expr.value)
    if isinstance(expr, n.BoolLiteral):
        return "true" if expr.value else "false"
    if isinstance(expr, n.NullLiteral):
        return "null"
    if isinstance(expr, n.StringLiteral):
        escaped = (expr.value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\t", "\\t"))
        return f'"{escaped}"'
    if isinstance(expr, n.FieldAccess):
        return f"{expression(expr.receiver, _UNARY_PRECEDENCE + 1)}.{expr.name}"
    if isinstance(expr, n.Call):
        args = ", ".join(expression(a) for a in expr.args)
        if expr.receiver is None:
            return f"{expr.name}({args})"
        return f"{expression(expr.receiver, _UNARY_PRECEDENCE + 1)}.{expr.name}({args})"
    if isinstance(expr, n.Proceed):
        return f"proceed({', '.join(expression(a) for a in expr.args)})"
    if isinstance(expr, n.New):
        return f"new {expr.class_name}({', '.join(expression(a) for a in expr.args)})"
    if isinstance(expr, n.Unary):
        text = f"{expr.op}{expression(expr.operand, _UNARY_PRECEDENCE)}"
        return f"({text})" if parent_precedence > _UNARY_PRECEDENCE else text
    if isinstance(expr, n.Binary):
        prec = _PRECEDENCE[expr.op]
        # Left-associative: the right operand needs parentheses at equal precedence.
        text = f"{expression(expr.left, prec)} {expr.op} {expression(expr.right, prec + 1)}"
        return f"({text})" if parent_precedence > prec else text
    raise TypeError(f"not an expression: {expr!r}")


def pointcut(expr: n.PointcutExpr, parent_precedence: int = 0) -> str:
    if isinstance(expr, (n.ExecutionPointcut, n.CallPointcut)):
        keyword = "execution" if isinstance(expr, n.ExecutionPointcut) else "call"
        return f"{keyword}({signature(expr.pattern)})"
    if isinstance(expr, n.ArgsPointcut):
        return f"args({', '.join(expr.names)})"
    if isinstance(expr, n.PointcutRef):
        return f"{expr.name}({', '.join(expr.args)})"
    if isinstance(expr, n.NotPointcut):
        return f"!{pointcut(expr.operand, 3)}"
    if isinstance(expr, n.AndPointcut):
        text = f"{pointcut(expr.left, 2)} && {pointcut(expr.right, 3)}"
        return f"({text})" if parent_precedence > 2 else text
    if isinstance(expr, n.OrPointcut):
        text = f"{pointcut(expr.left, 1)} || {pointcut(expr.right, 2)}"
        return f"({text})" if parent_precedence > 1 else text
    raise TypeError(f"not a pointcut: {expr!r}")


def signature(pattern: n.SignaturePattern) -> str:
    params = list(pattern.param_types)
    if pattern.open_tail:
        params.append("..")
    return f"{pattern.return_type} {pattern.declaring_type}.{pattern.name}({', '.join(params)})"
