"""Recursive-descent parser producing a ``SyntaxTree`` from AJML tokens."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple, Union

from ajlint.errors import ParseError
from ajlint.syntax import nodes as n
from ajlint.syntax.tokens import Span, Token, TokenKind, decode_string, tokenize

TYPE_KEYWORDS = ("int", "boolean", "void")
VISIBILITIES = ("private", "public")
POINTCUT_PRIMITIVES = ("execution", "call", "args")

# Binary operator precedence, loosest first.
BINARY_LEVELS: Tuple[Tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


def parse_program(tokens: Sequence[Token]) -> n.SyntaxTree:
    """
    Parse a complete token list into a syntax tree.

    Args:
        tokens: Output of ``tokenize``; must end with the END token

    Returns:
        The syntax tree of all class and aspect declarations

    Raises:
        ParseError: at the first syntax error, with the expected-token set, or where nesting
            exceeds the interpreter's recursion limit
    """
    parser = Parser(tokens)
    try:
        return parser.parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", parser.current.span) from None


def parse_source(source: str, file_name: str) -> n.SyntaxTree:
    return parse_program(tokenize(source, file_name))


class Parser:
    def __init__(self, tokens: Sequence[Token]):
        if not tokens or tokens[-1].kind is not TokenKind.END:
            raise ValueError("token list must end with the end-of-input token")
        self.tokens = list(tokens)
        self.pos = 0

    # ------------------------------------------------------------------
    # Token helpers
    # ------------------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def lookahead(self, distance: int = 1) -> Token:
        return self.tokens[min(self.pos + distance, len(self.tokens) - 1)]

    def at(self, lexeme: str) -> bool:
        return self.current.is_(lexeme)

    def at_identifier(self, text: Optional[str] = None) -> bool:
        tok = self.current
        return tok.kind is TokenKind.IDENTIFIER and (text is None or tok.lexeme == text)

    def advance(self) -> Token:
        tok = self.current
        if tok.kind is not TokenKind.END:
            self.pos += 1
        return tok

    def accept(self, lexeme: str) -> Optional[Token]:
        if self.at(lexeme):
            return self.advance()
        return None

    def expect(self, lexeme: str) -> Token:
        if not self.at(lexeme):
            self.fail({repr(lexeme)})
        return self.advance()

    def expect_identifier(self) -> Token:
        if not self.at_identifier():
            self.fail({"identifier"})
        return self.advance()

    def fail(self, expected: set) -> None:
        tok = self.current
        wanted = ", ".join(sorted(expected))
        raise ParseError(
            f"expected {wanted} but found {tok.describe()}",
            tok.span,
            frozenset(expected),
        )

    def span_from(self, start: Span) -> Span:
        return start.to(self.tokens[self.pos - 1].span)

    # ------------------------------------------------------------------
    # Declarations
    # ------------------------------------------------------------------

    def parse(self) -> n.SyntaxTree:
        start = self.current.span
        declarations: List[Union[n.ClassNode, n.AspectNode]] = []
        while self.current.kind is not TokenKind.END:
            if self.at("class"):
                declarations.append(self.parse_class())
            elif self.at("aspect") or self.at("privileged"):
                declarations.append(self.parse_aspect())
            else:
                self.fail({"'class'", "'aspect'", "'privileged'", "end of input"})
        end = self.tokens[self.pos - 1].span if self.pos else start
        return n.SyntaxTree(start.to(end) if declarations else start, tuple(declarations))

    def parse_class(self) -> n.ClassNode:
        start = self.expect("class").span
        name = self.expect_identifier().lexeme
        parents: List[str] = []
        if self.accept("implements"):
            parents.append(self.expect_identifier().lexeme)
            while self.accept(","):
                parents.append(self.expect_identifier().lexeme)
        self.expect("{")
        members: List[Union[n.FieldNode, n.MethodNode]] = []
        while not self.at("}"):
            members.append(self.parse_class_member())
        self.expect("}")
        return n.ClassNode(self.span_from(start), name, tuple(parents), tuple(members))

    def parse_class_member(self) -> Union[n.FieldNode, n.MethodNode]:
        start = self.current.span
        visibility = self.parse_visibility()
        type_name = self.parse_type()
        name = self.expect_identifier().lexeme
        if self.at("("):
            params = self.parse_params()
            body = self.parse_block()
            return n.MethodNode(self.span_from(start), visibility, type_name, name, params, body)
        initializer = self.parse_initializer()
        return n.FieldNode(self.span_from(start), visibility, type_name, name, initializer)

    def parse_aspect(self) -> n.AspectNode:
        start = self.current.span
        privileged = self.accept("privileged") is not None
        self.expect("aspect")
        name = self.expect_identifier().lexeme
        self.expect("{")
        members: List[n.AspectMember] = []
        while not self.at("}"):
            members.append(self.parse_aspect_member())
        self.expect("}")
        return n.AspectNode(self.span_from(start), name, privileged, tuple(members))

    def parse_aspect_member(self) -> n.AspectMember:
        start = self.current.span
        if self.accept("pointcut"):
            name = self.expect_identifier().lexeme
            params = self.parse_params()
            self.expect(":")
            expr = self.parse_pointcut()
            self.expect(";")
            return n.PointcutDeclNode(self.span_from(start), name, params, expr)

        if self.accept("declare"):
            self.expect("parents")
            self.expect(":")
            target = self.expect_identifier().lexeme
            self.expect("implements")
            interface = self.expect_identifier().lexeme
            self.expect(";")
            return n.DeclareParentsNode(self.span_from(start), target, interface)

        if self.at("before") or self.at("after"):
            kind = self.advance().lexeme
            return self.parse_advice_rest(start, kind, None)

        visibility = self.parse_visibility()
        type_name = self.parse_type()
        if self.accept("around"):
            return self.parse_advice_rest(start, "around", type_name)

        name = self.expect_identifier().lexeme
        if self.accept("."):
            member = self.expect_identifier().lexeme
            if self.at("("):
                params = self.parse_params()
                body = self.parse_block()
                return n.InterTypeMethodNode(
                    self.span_from(start), visibility, type_name, name, member, params, body
                )
            initializer = self.parse_initializer()
            return n.InterTypeFieldNode(
                self.span_from(start), visibility, type_name, name, member, initializer
            )

        if self.at("("):
            params = self.parse_params()
            body = self.parse_block()
            return n.MethodNode(self.span_from(start), visibility, type_name, name, params, body)
        initializer = self.parse_initializer()
        return n.FieldNode(self.span_from(start), visibility, type_name, name, initializer)

    def parse_advice_rest(self, start: Span, kind: str, return_type: Optional[str]) -> n.AdviceNode:
        params = self.parse_params()
        self.expect(":")
        pointcut = self.parse_pointcut()
        body = self.parse_block()
        return n.AdviceNode(self.span_from(start), kind, return_type, params, pointcut, body)

    def parse_visibility(self) -> str:
        if self.at("private") or self.at("public"):
            return self.advance().lexeme
        return "public"

    def parse_type(self) -> str:
        tok = self.current
        if tok.kind is TokenKind.KEYWORD and tok.lexeme in TYPE_KEYWORDS:
            return self.advance().lexeme
        if tok.kind is TokenKind.IDENTIFIER:
            return self.advance().lexeme
        self.fail({"type", "'int'", "'boolean'", "'void'"})
        raise AssertionError("unreachable")

    def parse_params(self) -> Tuple[n.Param, ...]:
        self.expect("(")
        params: List[n.Param] = []
        if not self.at(")"):
            params.append(self.parse_param())
            while self.accept(","):
                params.append(self.parse_param())
        self.expect(")")
        return tuple(params)

    def parse_param(self) -> n.Param:
        start = self.current.span
        type_name = self.parse_type()
        name = self.expect_identifier().lexeme
        return n.Param(self.span_from(start), type_name, name)

    def parse_initializer(self) -> Optional[n.Expr]:
        initializer = None
        if self.accept("="):
            initializer = self.parse_expression()
        if not self.at(";"):
            self.fail({"';'", "'='", "'('"} if initializer is None else {"';'"})
        self.advance()
        return initializer

    # ------------------------------------------------------------------
    # Pointcuts
    # ------------------------------------------------------------------

    def parse_pointcut(self) -> n.PointcutExpr:
        left = self.parse_pointcut_and()
        while self.at("||"):
            self.advance()
            right = self.parse_pointcut_and()
            left = n.OrPointcut(left.span.to(right.span), left, right)
        return left

    def parse_pointcut_and(self) -> n.PointcutExpr:
        left = self.parse_pointcut_unary()
        while self.at("&&"):
            self.advance()
            right = self.parse_pointcut_unary()
            left = n.AndPointcut(left.span.to(right.span), left, right)
        return left

    def parse_pointcut_unary(self) -> n.PointcutExpr:
        start = self.current.span
        if self.accept("!"):
            operand = self.parse_pointcut_unary()
            return n.NotPointcut(start.to(operand.span), operand)
        if self.accept("("):
            inner = self.parse_pointcut()
            self.expect(")")
            return inner
        if not self.at_identifier():
            self.fail({"pointcut", "'!'", "'('"})
        head = self.advance().lexeme
        if head in ("execution", "call"):
            self.expect("(")
            pattern = self.parse_signature_pattern()
            self.expect(")")
            cls = n.ExecutionPointcut if head == "execution" else n.CallPointcut
            return cls(self.span_from(start), pattern)
        names = self.parse_name_list()
        if head == "args":
            return n.ArgsPointcut(self.span_from(start), names)
        return n.PointcutRef(self.span_from(start), head, names)

    def parse_name_list(self) -> Tuple[str, ...]:
        self.expect("(")
        names: List[str] = []
        if not self.at(")"):
            names.append(self.expect_identifier().lexeme)
            while self.accept(","):
                names.append(self.expect_identifier().lexeme)
        self.expect(")")
        return tuple(names)

    def parse_type_pattern(self) -> str:
        if self.accept("*"):
            return n.WILDCARD
        return self.parse_type()

    def parse_name_pattern(self) -> str:
        if self.accept("*"):
            return n.WILDCARD
        return self.expect_identifier().lexeme

    def parse_signature_pattern(self) -> n.SignaturePattern:
        start = self.current.span
        return_type = self.parse_type_pattern()
        declaring = self.parse_name_pattern()
        self.expect(".")
        name = self.parse_name_pattern()
        self.expect("(")
        params: List[str] = []
        open_tail = False
        if self.accept(".."):
            open_tail = True
        elif not self.at(")"):
            params.append(self.parse_type_pattern())
            while self.accept(","):
                if self.accept(".."):
                    open_tail = True
                    break
                params.append(self.parse_type_pattern())
        self.expect(")")
        return n.SignaturePattern(self.span_from(start), return_type, declaring, name, tuple(params), open_tail)

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def parse_block(self) -> n.Block:
        start = self.expect("{").span
        statements: List[n.Stmt] = []
        while not self.at("}"):
            if self.current.kind is TokenKind.END:
                self.fail({"'}'", "statement"})
            statements.append(self.parse_statement())
        self.expect("}")
        return n.Block(self.span_from(start), tuple(statements))

    def starts_local_decl(self) -> bool:
        tok = self.current
        if tok.kind is TokenKind.KEYWORD and tok.lexeme in ("int", "boolean"):
            return True
        return tok.kind is TokenKind.IDENTIFIER and self.lookahead().kind is TokenKind.IDENTIFIER

    def parse_statement(self) -> n.Stmt:
        start = self.current.span
        if self.at("if"):
            return self.parse_if()
        if self.accept("while"):
            self.expect("(")
            condition = self.parse_expression()
            self.expect(")")
            body = self.parse_block()
            return n.While(self.span_from(start), condition, body)
        if self.accept("return"):
            value = None if self.at(";") else self.parse_expression()
            self.expect(";")
            return n.Return(self.span_from(start), value)
        if self.starts_local_decl():
            type_name = self.parse_type()
            name = self.expect_identifier().lexeme
            initializer = self.parse_initializer()
            return n.LocalDecl(self.span_from(start), type_name, name, initializer)

        expr = self.parse_expression()
        if self.accept("="):
            if not isinstance(expr, (n.Name, n.FieldAccess)):
                raise ParseError("invalid assignment target", expr.span, frozenset({"identifier", "field access"}))
            value = self.parse_expression()
            self.expect(";")
            return n.Assign(self.span_from(start), expr, value)
        if not isinstance(expr, (n.Call, n.Proceed, n.New)):
            raise ParseError("not a statement", expr.span, frozenset({"'='", "call"}))
        self.expect(";")
        return n.ExprStmt(self.span_from(start), expr)

    def parse_if(self) -> n.If:
        start = self.expect("if").span
        self.expect("(")
        condition = self.parse_expression()
        self.expect(")")
        then_block = self.parse_block()
        else_branch: Optional[Union[n.Block, n.If]] = None
        if self.accept("else"):
            else_branch = self.parse_if() if self.at("if") else self.parse_block()
        return n.If(self.span_from(start), condition, then_block, else_branch)

    # ------------------------------------------------------------------
    # Expressions
    # ------------------------------------------------------------------

    def parse_expression(self, level: int = 0) -> n.Expr:
        if level == len(BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_expression(level + 1)
        operators = BINARY_LEVELS[level]
        while self.current.kind is TokenKind.PUNCTUATION and self.current.lexeme in operators:
            op = self.advance().lexeme
            right = self.parse_expression(level + 1)
            left = n.Binary(left.span.to(right.span), op, left, right)
        return left

    def parse_unary(self) -> n.Expr:
        start = self.current.span
        if self.at("!") or self.at("-"):
            op = self.advance().lexeme
            operand = self.parse_unary()
            return n.Unary(start.to(operand.span), op, operand)
        return self.parse_postfix()

    def parse_postfix(self) -> n.Expr:
        expr = self.parse_primary()
        while self.accept("."):
            name = self.expect_identifier().lexeme
            if self.at("("):
                args = self.parse_args()
                expr = n.Call(self.span_from(expr.span), expr, name, args)
            else:
                expr = n.FieldAccess(self.span_from(expr.span), expr, name)
        return expr

    def parse_args(self) -> Tuple[n.Expr, ...]:
        self.expect("(")
        args: List[n.Expr] = []
        if not self.at(")"):
            args.append(self.parse_expression())
            while self.accept(","):
                args.append(self.parse_expression())
        self.expect(")")
        return tuple(args)

    def parse_primary(self) -> n.Expr:
        tok = self.current
        start = tok.span
        if tok.kind is TokenKind.LITERAL:
            self.advance()
            if tok.lexeme == "true" or tok.lexeme == "false":
                return n.BoolLiteral(start, tok.lexeme == "true")
            if tok.lexeme == "null":
                return n.NullLiteral(start)
            if tok.lexeme.startswith('"'):
                return n.StringLiteral(start, decode_string(tok.lexeme))
            return n.IntLiteral(start, int(tok.lexeme))
        if self.accept("this"):
            return n.This(start)
        if self.accept("proceed"):
            args = self.parse_args()
            return n.Proceed(self.span_from(start), args)
        if self.accept("new"):
            class_name = self.expect_identifier().lexeme
            args = self.parse_args()
            return n.New(self.span_from(start), class_name, args)
        if self.accept("("):
            inner = self.parse_expression()
            self.expect(")")
            return inner
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            if self.at("("):
                args = self.parse_args()
                return n.Call(self.span_from(start), None, tok.lexeme, args)
            return n.Name(start, tok.lexeme)
        self.fail({"expression"})
        raise AssertionError("unreachable")
