"""Recursive-descent parser and canonical printer.

Grammar (axes normalize to COLUMNS first; a lone ROWS axis is rejected):

    query  := SELECT axis ("," axis)? FROM ident (WHERE tuple)?
    axis   := (NON EMPTY)? set ON (COLUMNS | ROWS)
    set    := "{" set ("," set)* "}"
            | path "." MEMBERS
            | path "." CHILDREN
            | CROSSJOIN "(" set "," set ")"
            | tuple
    tuple  := "(" path ("," path)* ")" | path
    ident  := bracket_ident
    path   := bracket_ident ("." bracket_ident)*

Braces union their elements and parentheses may group a Members/Children
set, so member-set expressions compose inside explicit sets. The first
error is reported with its line/column and the expected-token set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import QuerySyntaxError
from .tokens import Token, tokenize


@dataclass(frozen=True)
class MemberPath:
    segments: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def text(self) -> str:
        return ".".join(_bracket(s) for s in self.segments)


@dataclass(frozen=True)
class TupleExpr:
    paths: tuple


@dataclass(frozen=True)
class ExplicitSet:
    elements: tuple


@dataclass(frozen=True)
class MembersExpr:
    path: MemberPath


@dataclass(frozen=True)
class ChildrenExpr:
    path: MemberPath


@dataclass(frozen=True)
class CrossJoin:
    left: object
    right: object


@dataclass(frozen=True)
class AxisSpec:
    name: str                 # COLUMNS | ROWS
    non_empty: bool
    set_expr: object


@dataclass(frozen=True)
class QueryAst:
    axes: tuple               # axis 0 = COLUMNS[, axis 1 = ROWS]
    cube: str
    slicer: TupleExpr | None


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        index = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def fail(self, expected: tuple) -> QuerySyntaxError:
        token = self.peek()
        wanted = ", ".join(expected)
        return QuerySyntaxError(
            f"expected {wanted}, found {token.describe()}",
            token.line, token.column, expected=expected,
            found=token.describe())

    def expect_keyword(self, *words: str) -> Token:
        token = self.peek()
        if token.kind == "keyword" and token.text in words:
            return self.advance()
        raise self.fail(words)

    def expect_punct(self, ch: str) -> Token:
        token = self.peek()
        if token.kind == "punct" and token.text == ch:
            return self.advance()
        raise self.fail((f"'{ch}'",))

    def at_punct(self, ch: str, ahead: int = 0) -> bool:
        token = self.peek(ahead)
        return token.kind == "punct" and token.text == ch

    def at_keyword(self, word: str, ahead: int = 0) -> bool:
        token = self.peek(ahead)
        return token.kind == "keyword" and token.text == word

    # --- grammar ---

    def query(self) -> QueryAst:
        self.expect_keyword("SELECT")
        axes = [self.axis()]
        if self.at_punct(","):
            self.advance()
            axes.append(self.axis())
        self.expect_keyword("FROM")
        cube_token = self.peek()
        if cube_token.kind != "bracket_ident":
            raise self.fail(("cube name in brackets",))
        self.advance()
        slicer = None
        if self.at_keyword("WHERE"):
            self.advance()
            slicer = self.tuple_expr()
        end = self.peek()
        if end.kind != "eof":
            raise self.fail(("end of query",))

        names = [a[0].text for a in axes]
        if len(set(names)) != len(names):
            token = axes[1][0]
            raise QuerySyntaxError(
                f"axis {token.text} specified twice", token.line, token.column,
                expected=("COLUMNS", "ROWS"), found=token.text)
        if "COLUMNS" not in names:
            token = axes[0][0]
            raise QuerySyntaxError(
                "a ROWS axis requires a COLUMNS axis", token.line,
                token.column, expected=("COLUMNS",), found=token.text)
        specs = sorted((AxisSpec(t.text, ne, s) for t, ne, s in axes),
                       key=lambda a: a.name != "COLUMNS")
        return QueryAst(axes=tuple(specs), cube=cube_token.text, slicer=slicer)

    def axis(self):
        non_empty = False
        if self.at_keyword("NON"):
            self.advance()
            self.expect_keyword("EMPTY")
            non_empty = True
        set_expr = self.set_expr()
        self.expect_keyword("ON")
        name_token = self.expect_keyword("COLUMNS", "ROWS")
        return (name_token, non_empty, set_expr)

    def set_expr(self):
        if self.at_punct("{"):
            self.advance()
            elements = [self.set_expr()]
            while self.at_punct(","):
                self.advance()
                elements.append(self.set_expr())
            self.expect_punct("}")
            return ExplicitSet(tuple(elements))
        if self.at_keyword("CROSSJOIN"):
            self.advance()
            self.expect_punct("(")
            left = self.set_expr()
            self.expect_punct(",")
            right = self.set_expr()
            self.expect_punct(")")
            return CrossJoin(left, right)
        if self.at_punct("("):
            return self.paren_group()
        if self.peek().kind == "bracket_ident":
            path = self.path_expr()
            suffix = self.member_set_suffix(path)
            if suffix is not None:
                return suffix
            return TupleExpr((path,))
        raise self.fail(("'{'", "'('", "CROSSJOIN", "identifier"))

    def member_set_suffix(self, path: MemberPath):
        """`.MEMBERS` / `.CHILDREN` after a path, if present."""
        if self.at_punct(".") and self.peek(1).kind == "keyword" \
                and self.peek(1).text in ("MEMBERS", "CHILDREN"):
            self.advance()
            word = self.advance().text
            return MembersExpr(path) if word == "MEMBERS" else ChildrenExpr(path)
        return None

    def paren_group(self):
        """A parenthesized tuple, or parentheses around a member set."""
        self.expect_punct("(")
        first = self.path_expr()
        suffix = self.member_set_suffix(first)
        if suffix is not None:
            self.expect_punct(")")
            return suffix
        paths = [first]
        while self.at_punct(","):
            self.advance()
            paths.append(self.path_expr())
        self.expect_punct(")")
        return TupleExpr(tuple(paths))

    def tuple_expr(self) -> TupleExpr:
        if self.at_punct("("):
            self.advance()
            paths = [self.path_expr()]
            while self.at_punct(","):
                self.advance()
                paths.append(self.path_expr())
            self.expect_punct(")")
            return TupleExpr(tuple(paths))
        if self.peek().kind == "bracket_ident":
            return TupleExpr((self.path_expr(),))
        raise self.fail(("'('", "identifier"))

    def path_expr(self) -> MemberPath:
        first = self.peek()
        if first.kind != "bracket_ident":
            raise self.fail(("identifier",))
        self.advance()
        segments = [first.text]
        while self.at_punct(".") and self.peek(1).kind == "bracket_ident":
            self.advance()
            segments.append(self.advance().text)
        return MemberPath(tuple(segments), first.line, first.column)


def parse(source) -> QueryAst:
    """Parse query text (or a token list) into its AST."""
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    return _Parser(tokens).query()


# --- canonical printer -----------------------------------------------------------

def _bracket(segment: str) -> str:
    return "[" + segment.replace("]", "]]") + "]"


def _print_set(expr) -> str:
    if isinstance(expr, ExplicitSet):
        return "{" + ", ".join(_print_set(e) for e in expr.elements) + "}"
    if isinstance(expr, MembersExpr):
        return f"{expr.path.text()}.MEMBERS"
    if isinstance(expr, ChildrenExpr):
        return f"{expr.path.text()}.CHILDREN"
    if isinstance(expr, CrossJoin):
        return f"CROSSJOIN({_print_set(expr.left)}, {_print_set(expr.right)})"
    if isinstance(expr, TupleExpr):
        return _print_tuple(expr)
    raise TypeError(f"not a set expression: {expr!r}")


def _print_tuple(expr: TupleExpr) -> str:
    if len(expr.paths) == 1:
        return expr.paths[0].text()
    return "(" + ", ".join(p.text() for p in expr.paths) + ")"


def print_query(ast: QueryAst) -> str:
    """Canonical text form; parse(print_query(ast)) is structurally equal
    to ast."""
    axes = ", ".join(
        ("NON EMPTY " if a.non_empty else "") + f"{_print_set(a.set_expr)} "
        f"ON {a.name}"
        for a in ast.axes)
    text = f"SELECT {axes} FROM {_bracket(ast.cube)}"
    if ast.slicer is not None:
        rendered = _print_tuple(ast.slicer)
        if len(ast.slicer.paths) == 1:
            rendered = ast.slicer.paths[0].text()
        text += f" WHERE {rendered}"
    return text
