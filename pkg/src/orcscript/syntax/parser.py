"""Recursive-descent parser producing :mod:`orcscript.syntax.ast` trees.

Connector precedence, loosest first::

    ;  ,        (equal, flat list of statements)
    &
    statement   (at, whenever, if, loop, while, for, return, var, ...)
    =  op=      (right associative)
    ||
    &&
    == != < <= > >=
    + -
    * / %
    unary - + !
    postfix     call, .slot, [index], e!(...), e?(...), ++, --
"""

from __future__ import annotations

from typing import Optional

from ..errors import IncompleteInput, ParseError
from . import ast as A
from .lexer import Token, tokenize

_ASSIGN_OPS = {"=": None, "+=": "+", "-=": "-", "*=": "*", "/=": "/"}
_COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")
_STMT_END = {";", ",", "}", ")", "&", "]"}


class Parser:
    def __init__(self, tokens: list[Token]):
        end_line = tokens[-1].line if tokens else 1
        end_col = tokens[-1].column + len(tokens[-1].lexeme) if tokens else 1
        self.tokens = list(tokens) + [Token("eof", "", end_line, end_col)]
        self.i = 0
        self._header_depth = 0
        self._pattern_depth = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def at_punct(self, *lexemes: str) -> bool:
        t = self.tok
        return t.kind == "punctuation" and t.lexeme in lexemes

    def at_keyword(self, *words: str) -> bool:
        t = self.tok
        return t.kind == "keyword" and t.lexeme in words

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message: str, expected: set[str] | frozenset[str] = frozenset()) -> ParseError:
        t = self.tok
        cls = IncompleteInput if t.kind == "eof" else ParseError
        found = "end of input" if t.kind == "eof" else repr(t.lexeme)
        return cls(f"{message}, found {found}", t.line, t.column, frozenset(expected))

    def expect_punct(self, lexeme: str) -> Token:
        if not self.at_punct(lexeme):
            raise self.error("syntax error", {repr(lexeme)})
        return self.advance()

    def expect_ident(self) -> str:
        if self.tok.kind != "identifier":
            raise self.error("syntax error", {"identifier"})
        return self.advance().lexeme

    # -- statements ---------------------------------------------------------

    def parse_program(self) -> A.Sequence:
        seq = self.parse_sequence(closer=None)
        if self.tok.kind != "eof":
            raise self.error("syntax error", {"';'", "','"})
        return seq

    def parse_sequence(self, closer: Optional[str]) -> A.Sequence:
        pos = self.tok.position
        items: list[A.Node] = []
        seps: list[str] = []
        while True:
            while self.at_punct(";"):
                self.advance()
            if self.tok.kind == "eof" or (closer is not None and self.at_punct(closer)):
                break
            items.append(self.parse_and())
            if self.at_punct(";", ","):
                seps.append(self.advance().lexeme)
            else:
                seps.append("")
                if self.tok.kind == "eof" or (closer is not None and self.at_punct(closer)):
                    break
                expected = {"';'", "','"} | ({repr(closer)} if closer else set())
                raise self.error("syntax error", expected)
        return A.Sequence(tuple(items), tuple(seps), pos)

    def parse_and(self) -> A.Node:
        pos = self.tok.position
        first = self.parse_statement()
        if not self.at_punct("&"):
            return first
        items = [first]
        while self.at_punct("&"):
            self.advance()
            items.append(self.parse_statement())
        return A.AndNode(tuple(items), pos)

    def parse_statement(self) -> A.Node:
        t = self.tok
        if t.kind == "keyword":
            word = t.lexeme
            if word == "var":
                return self.parse_var()
            if word == "function" and (self.peek().kind == "identifier" or self.peek().is_("keyword", "this")):
                return self.parse_function(named=True)
            if word == "class":
                return self.parse_class()
            if word in ("at", "whenever"):
                return self.parse_at()
            if word == "if":
                return self.parse_if()
            if word == "loop":
                self.advance()
                return A.Loop(self.parse_statement(), t.position)
            if word == "while":
                self.advance()
                self.expect_punct("(")
                cond = self.parse_expression()
                self.expect_punct(")")
                return A.While(cond, self.parse_statement(), t.position)
            if word in ("for", "for&"):
                return self.parse_for()
            if word == "return":
                self.advance()
                if self.tok.kind == "eof" or (self.tok.kind == "punctuation" and self.tok.lexeme in _STMT_END) \
                        or self.at_keyword("else", "onleave"):
                    return A.Return(None, t.position)
                return A.Return(self.parse_expression(), t.position)
        if t.is_("punctuation", "{"):
            return self.parse_scope()
        return self.parse_expression()

    def parse_scope(self) -> A.Scope:
        pos = self.expect_punct("{").position
        body = self.parse_sequence(closer="}")
        self.expect_punct("}")
        return A.Scope(body, pos)

    def parse_path(self) -> A.Node:
        """``name`` / ``this`` followed by ``.slot`` steps (declaration targets)."""
        t = self.tok
        if t.is_("keyword", "this"):
            self.advance()
            node: A.Node = A.This(t.position)
        else:
            node = A.Ident(self.expect_ident(), t.position)
        while self.at_punct("."):
            self.advance()
            node = A.SlotAccess(node, self.expect_ident(), t.position)
        return node

    def parse_var(self) -> A.Node:
        pos = self.advance().position
        target = self.parse_path()
        value = None
        if self.at_punct("="):
            self.advance()
            value = self.parse_expression()
        return A.VarDecl(target, value, pos)

    def parse_params(self) -> tuple[str, ...]:
        self.expect_punct("(")
        params: list[str] = []
        while not self.at_punct(")"):
            if self.at_keyword("var"):
                self.advance()
            params.append(self.expect_ident())
            if not self.at_punct(","):
                break
            self.advance()
        self.expect_punct(")")
        if len(set(params)) != len(params):
            raise self.error("duplicate parameter name")
        return tuple(params)

    def parse_function(self, named: bool) -> A.FunctionDecl:
        pos = self.advance().position
        target = self.parse_path() if named else None
        params = self.parse_params()
        body = self.parse_scope()
        return A.FunctionDecl(target, params, body, pos)

    def parse_class(self) -> A.ClassDecl:
        pos = self.advance().position
        name = self.expect_ident()
        self.expect_punct("{")
        body = self.parse_sequence(closer="}")
        self.expect_punct("}")
        return A.ClassDecl(name, body.items, pos)

    def parse_if(self) -> A.If:
        pos = self.advance().position
        self.expect_punct("(")
        cond = self.parse_expression()
        self.expect_punct(")")
        then = self.parse_statement()
        orelse = None
        if self.at_punct(";") and self.peek().is_("keyword", "else"):
            self.advance()
        if self.at_keyword("else"):
            self.advance()
            orelse = self.parse_statement()
        return A.If(cond, then, orelse, pos)

    def parse_for(self) -> A.For:
        t = self.advance()
        self.expect_punct("(")
        if self.at_keyword("var"):
            self.advance()
        name = self.expect_ident()
        self.expect_punct(":")
        iterable = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return A.For(name, iterable, body, t.lexeme == "for&", t.position)

    def parse_at(self) -> A.Node:
        t = self.advance()
        kind = t.lexeme
        self.expect_punct("(")
        self._header_depth += 1
        try:
            head = self.parse_expression()
        finally:
            self._header_depth -= 1
        guard = duration = None
        if isinstance(head, A.EventQuery) and self.at_keyword("if"):
            self.advance()
            guard = self.parse_expression()
        if self.at_punct("~"):
            self.advance()
            duration = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        onleave = None
        if self.at_keyword("onleave"):
            self.advance()
            onleave = self.parse_statement()
        if isinstance(head, A.EventQuery):
            return A.AtEvent(kind, head.event, head.patterns, guard, duration, body, onleave, t.position)
        if _contains_query(head):
            raise ParseError("'?' must apply to the whole at header", t.line, t.column)
        return A.AtCond(kind, head, duration, body, onleave, t.position)

    # -- expressions --------------------------------------------------------

    def parse_expression(self) -> A.Node:
        return self.parse_assignment()

    def parse_assignment(self) -> A.Node:
        pos = self.tok.position
        left = self.parse_or()
        if self.tok.kind == "punctuation" and self.tok.lexeme in _ASSIGN_OPS:
            op = _ASSIGN_OPS[self.tok.lexeme]
            if not isinstance(left, (A.Ident, A.SlotAccess, A.Index)):
                raise self.error("invalid assignment target")
            self.advance()
            right = self.parse_assignment()
            if op is None:
                return A.Assign(left, right, pos)
            return A.CompoundAssign(op, left, right, pos)
        return left

    def _binary(self, ops: tuple[str, ...], sub) -> A.Node:
        pos = self.tok.position
        left = sub()
        while self.tok.kind == "punctuation" and self.tok.lexeme in ops:
            op = self.advance().lexeme
            left = A.BinOp(op, left, sub(), pos)
        return left

    def parse_or(self) -> A.Node:
        return self._binary(("||",), self.parse_and_expr)

    def parse_and_expr(self) -> A.Node:
        return self._binary(("&&",), self.parse_comparison)

    def parse_comparison(self) -> A.Node:
        return self._binary(_COMPARE_OPS, self.parse_additive)

    def parse_additive(self) -> A.Node:
        return self._binary(("+", "-"), self.parse_multiplicative)

    def parse_multiplicative(self) -> A.Node:
        return self._binary(("*", "/", "%"), self.parse_unary)

    def parse_unary(self) -> A.Node:
        if self.at_punct("-", "+", "!"):
            t = self.advance()
            return A.UnaryOp(t.lexeme, self.parse_unary(), t.position)
        return self.parse_postfix()

    def parse_args(self) -> tuple[A.Node, ...]:
        self.expect_punct("(")
        args: list[A.Node] = []
        while not self.at_punct(")"):
            args.append(self.parse_expression())
            if not self.at_punct(","):
                break
            self.advance()
        self.expect_punct(")")
        return tuple(args)

    def parse_postfix(self) -> A.Node:
        node = self.parse_primary()
        while True:
            t = self.tok
            if t.kind != "punctuation":
                return node
            p = t.lexeme
            if p == "(":
                node = A.Call(node, self.parse_args(), t.position)
            elif p == ".":
                self.advance()
                node = A.SlotAccess(node, self.expect_ident(), t.position)
            elif p == "[":
                self.advance()
                index = self.parse_expression()
                self.expect_punct("]")
                node = A.Index(node, index, t.position)
            elif p == "!":
                self.advance()
                args = self.parse_args() if self.at_punct("(") else ()
                node = A.Emit(node, args, t.position)
            elif p == "?":
                if not self._header_depth:
                    raise self.error("'?' is only allowed in an at or whenever header")
                self.advance()
                patterns = None
                if self.at_punct("("):
                    self._pattern_depth += 1
                    try:
                        args = self.parse_args()
                    finally:
                        self._pattern_depth -= 1
                    patterns = tuple(self.to_pattern(a) for a in args)
                node = A.EventQuery(node, patterns, t.position)
            elif p in ("++", "--"):
                if not isinstance(node, (A.Ident, A.SlotAccess, A.Index)):
                    raise self.error("invalid increment target")
                self.advance()
                node = A.IncDec(p, node, t.position)
            else:
                return node

    def parse_primary(self) -> A.Node:
        t = self.tok
        pos = t.position
        if t.kind == "number":
            self.advance()
            return A.Literal(t.value, pos)
        if t.kind == "duration":
            self.advance()
            return A.Literal(t.value / 1000.0, pos)
        if t.kind == "string":
            self.advance()
            return A.Literal(t.value, pos)
        if t.kind == "identifier":
            self.advance()
            return A.Ident(t.lexeme, pos)
        if t.kind == "keyword":
            if t.lexeme in ("true", "false"):
                self.advance()
                return A.Literal(t.lexeme == "true", pos)
            if t.lexeme == "void":
                self.advance()
                return A.Literal(None, pos)
            if t.lexeme == "this":
                self.advance()
                return A.This(pos)
            if t.lexeme == "function" and self.peek().is_("punctuation", "("):
                return self.parse_function(named=False)
            if t.lexeme == "var" and self._pattern_depth:
                self.advance()
                return A.PatternVar(self.expect_ident(), pos)
        if t.kind == "punctuation":
            if t.lexeme == "(":
                return self.parse_paren()
            if t.lexeme == "[":
                return self.parse_bracket()
            if t.lexeme == "{":
                return self.parse_scope()
        raise self.error("syntax error", {"expression"})

    def parse_paren(self) -> A.Node:
        pos = self.advance().position
        if self.at_punct(")"):
            self.advance()
            return A.TupleLit((), pos)
        first = self.parse_expression()
        if self.at_punct(")"):
            self.advance()
            return first
        items = [first]
        while self.at_punct(","):
            self.advance()
            if self.at_punct(")"):
                break
            items.append(self.parse_expression())
        self.expect_punct(")")
        return A.TupleLit(tuple(items), pos)

    def parse_bracket(self) -> A.Node:
        pos = self.advance().position
        if self.at_punct("]"):
            self.advance()
            return A.ListLit((), pos)
        if self.at_punct("=>"):
            self.advance()
            self.expect_punct("]")
            return A.DictLit((), pos)
        first = self.parse_expression()
        if self.at_punct("=>"):
            self.advance()
            pairs = [(first, self.parse_expression())]
            while self.at_punct(","):
                self.advance()
                if self.at_punct("]"):
                    break
                key = self.parse_expression()
                self.expect_punct("=>")
                pairs.append((key, self.parse_expression()))
            self.expect_punct("]")
            return A.DictLit(tuple(pairs), pos)
        items = [first]
        while self.at_punct(","):
            self.advance()
            if self.at_punct("]"):
                break
            items.append(self.parse_expression())
        self.expect_punct("]")
        return A.ListLit(tuple(items), pos)

    # -- patterns -----------------------------------------------------------

    def to_pattern(self, node: A.Node) -> A.Pattern:
        if isinstance(node, A.PatternVar):
            return A.PBind(node.name)
        if isinstance(node, A.Literal):
            return A.PLit(node.value)
        if isinstance(node, A.UnaryOp) and node.op == "-" and isinstance(node.operand, A.Literal) \
                and isinstance(node.operand.value, float):
            return A.PLit(-node.operand.value)
        if isinstance(node, A.ListLit):
            return A.PList(tuple(self.to_pattern(i) for i in node.items))
        if isinstance(node, A.TupleLit):
            return A.PTuple(tuple(self.to_pattern(i) for i in node.items))
        if isinstance(node, A.DictLit):
            keys = []
            for k, _ in node.pairs:
                if not (isinstance(k, A.Literal) and isinstance(k.value, str)):
                    raise ParseError("dictionary pattern keys must be string literals", *node.pos)
                keys.append(k.value)
            if len(set(keys)) != len(keys):
                raise ParseError("duplicate key in dictionary pattern", *node.pos)
            return A.PDict(tuple(keys), tuple(self.to_pattern(v) for _, v in node.pairs))
        if _contains(node, A.PatternVar):
            raise ParseError("'var' is only allowed as a whole pattern element", *node.pos)
        return A.POuter(node)


def _children(node: A.Node):
    for name in getattr(node, "__dataclass_fields__", {}):
        if name == "pos":
            continue
        value = getattr(node, name)
        if isinstance(value, A.Node):
            yield value
        elif isinstance(value, tuple):
            for v in value:
                if isinstance(v, A.Node):
                    yield v
                elif isinstance(v, tuple):
                    yield from (x for x in v if isinstance(x, A.Node))


def _contains(node: A.Node, cls) -> bool:
    if isinstance(node, cls):
        return True
    return any(_contains(c, cls) for c in _children(node))


def _contains_query(node: A.Node) -> bool:
    return _contains(node, A.EventQuery)


def parse(source_or_tokens: str | list[Token]) -> A.Sequence:
    """Parse a whole program (source text or a token list) into a ``Sequence``."""
    tokens = tokenize(source_or_tokens) if isinstance(source_or_tokens, str) else source_or_tokens
    return Parser(tokens).parse_program()
