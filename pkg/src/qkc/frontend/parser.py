"""Recursive-descent parser producing :class:`~qkc.frontend.ast.Program`."""

from __future__ import annotations

from ..errors import ParseError
from ..ir.gates import gate_names
from . import ast
from .lexer import EOF, FLOAT, IDENT, INT, KEYWORD, PUNCT, Token, tokenize


class _Parser:
    def __init__(self, tokens: list[Token]):
        if not tokens or tokens[-1].kind != EOF:
            raise ValueError("token list must end with an end-of-input token")
        self.toks = tokens
        self.pos = 0
        self.gates = gate_names()

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def _advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != EOF:
            self.pos += 1
        return t

    def _fail(self, expected: str):
        t = self.tok
        raise ParseError(expected, t.text if t.kind != EOF else "end of input", t.line, t.column)

    def _at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in (PUNCT, KEYWORD)

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            self._fail(repr(text))
        return self._advance()

    def _ident(self) -> Token:
        if self.tok.kind != IDENT:
            self._fail("identifier")
        return self._advance()

    # declarations

    def program(self) -> ast.Program:
        decls = []
        while self.tok.kind != EOF:
            decls.append(self.decl())
        return ast.Program(tuple(decls))

    def decl(self) -> ast.Decl:
        t = self.tok
        span = (t.line, t.column)
        if self._at("qbit") or self._at("cbit"):
            kind = self._advance().text
            return self._array_rest(kind, span)
        if self._at("shared"):
            self._advance()
            self._expect("double")
            return self._array_rest("shared", span)
        if self._at("const"):
            self._advance()
            self._expect("int")
            name = self._ident().text
            self._expect("=")
            value = self.expr()
            self._expect(";")
            return ast.ConstDecl(name, value, span)
        if self._at("kernel"):
            self._advance()
            name = self._ident().text
            self._expect("(")
            self._expect(")")
            return ast.KernelDecl(name, self.block(), span)
        self._fail("declaration")

    def _array_rest(self, kind, span):
        name = self._ident().text
        self._expect("[")
        length = self.expr()
        self._expect("]")
        self._expect(";")
        return ast.ArrayDecl(kind, name, length, span)

    # statements

    def block(self) -> tuple[ast.Stmt, ...]:
        self._expect("{")
        body = []
        while not self._at("}"):
            if self.tok.kind == EOF:
                self._fail("'}'")
            body.append(self.stmt())
        self._expect("}")
        return tuple(body)

    def stmt(self) -> ast.Stmt:
        t = self.tok
        span = (t.line, t.column)
        if self._at("for"):
            self._advance()
            var = self._ident().text
            self._expect("in")
            start = self.expr()
            self._expect("..")
            stop = self.expr()
            return ast.ForLoop(var, start, stop, self.block(), span)
        name = self._ident().text
        self._expect("(")
        if name in self.gates:
            args = []
            if not self._at(")"):
                args.append(self.expr())
                while self._at(","):
                    self._advance()
                    args.append(self.expr())
            self._expect(")")
            self._expect(";")
            return ast.GateCall(name, tuple(args), span)
        self._expect(")")
        self._expect(";")
        return ast.KernelCall(name, span)

    # expressions

    def expr(self) -> ast.Expr:
        left = self.term()
        while self._at("+") or self._at("-"):
            t = self._advance()
            left = ast.BinOp(t.text, left, self.term(), (t.line, t.column))
        return left

    def term(self) -> ast.Expr:
        left = self.unary()
        while self._at("*") or self._at("/") or self._at("%"):
            t = self._advance()
            left = ast.BinOp(t.text, left, self.unary(), (t.line, t.column))
        return left

    def unary(self) -> ast.Expr:
        if self._at("-"):
            t = self._advance()
            return ast.Neg(self.unary(), (t.line, t.column))
        return self.primary()

    def primary(self) -> ast.Expr:
        t = self.tok
        span = (t.line, t.column)
        if t.kind == INT:
            self._advance()
            return ast.IntLit(int(t.text), span)
        if t.kind == FLOAT:
            self._advance()
            return ast.FloatLit(float(t.text), span)
        if self._at("pi"):
            self._advance()
            return ast.Pi(span)
        if t.kind == IDENT:
            self._advance()
            if self._at("["):
                self._advance()
                index = self.expr()
                self._expect("]")
                return ast.ElemRef(t.text, index, span)
            return ast.Name(t.text, span)
        if self._at("("):
            self._advance()
            e = self.expr()
            self._expect(")")
            return e
        self._fail("expression")


def parse(tokens: list[Token]) -> ast.Program:
    return _Parser(tokens).program()


def parse_source(source: str) -> ast.Program:
    return parse(tokenize(source))
