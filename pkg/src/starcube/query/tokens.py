"""Tokenizer for the query language.

Keywords are case-insensitive; identifiers are always bracketed and
preserve inner text verbatim, with ``]]`` escaping a literal ``]``.
Every token carries its 1-based line/column.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySyntaxError

KEYWORDS = frozenset({
    "SELECT", "ON", "COLUMNS", "ROWS", "FROM", "WHERE", "NON", "EMPTY",
    "CROSSJOIN", "MEMBERS", "CHILDREN",
})

PUNCT = frozenset("(){},.")


@dataclass(frozen=True)
class Token:
    kind: str        # keyword | bracket_ident | number | punct | eof
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of query"
        if self.kind == "bracket_ident":
            return f"[{self.text}]"
        return self.text


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, column = 1, 1
    i, n = 0, len(text)

    def advance(k: int = 1):
        nonlocal i, line, column
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                column = 1
            else:
                column += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch.isspace():
            advance()
            continue
        if ch == "[":
            start_line, start_col = line, column
            advance()
            parts: list[str] = []
            while True:
                if i >= n:
                    raise QuerySyntaxError(
                        "UnterminatedBracket: identifier opened here never "
                        "closes", start_line, start_col, expected=("]",),
                        found="end of query")
                if text[i] == "]":
                    if i + 1 < n and text[i + 1] == "]":
                        parts.append("]")
                        advance(2)
                        continue
                    advance()
                    break
                parts.append(text[i])
                advance()
            tokens.append(Token("bracket_ident", "".join(parts),
                                start_line, start_col))
            continue
        if ch in PUNCT:
            tokens.append(Token("punct", ch, line, column))
            advance()
            continue
        if ch.isdigit():
            start_line, start_col = line, column
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            tokens.append(Token("number", text[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch.isalpha() or ch == "_":
            start_line, start_col = line, column
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            upper = word.upper()
            if upper not in KEYWORDS:
                raise QuerySyntaxError(
                    f"IllegalCharacter: bare word {word!r} (identifiers must "
                    f"be written in brackets)", start_line, start_col,
                    expected=("keyword",), found=word)
            tokens.append(Token("keyword", upper, start_line, start_col))
            advance(j - i)
            continue
        raise QuerySyntaxError(f"IllegalCharacter: {ch!r}", line, column,
                               expected=(), found=ch)
    tokens.append(Token("eof", "", line, column))
    return tokens
