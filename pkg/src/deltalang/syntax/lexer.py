"""Tokenizer shared by the Delta surface syntax and the IR text format."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError, ValueSyntaxError
from ..values import read_value_prefix
from .ast import SourceSpan

PUNCT = (":=", "->", "(", ")", "{", "}", ",", ";", "<", ">", "/", ":")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "text", "punct", "eof"
    text: str
    value: object
    span: SourceSpan


def tokenize(source: str, file: str = "<input>", allow_dollar: bool = False) -> tuple[list, list]:
    """Return (tokens, errors). Bad characters are reported and skipped."""
    tokens: list = []
    errors: list = []
    i, line, col = 0, 1, 1
    n = len(source)

    def span(start_col, length):
        return SourceSpan(file, line, start_col, length)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        start = i
        if ch.isalpha() or ch == "_" or (allow_dollar and ch == "$"):
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_" or (allow_dollar and source[j] == "$")):
                j += 1
            text = source[i:j]
            tokens.append(Token("ident", text, text, span(col, j - i)))
        elif ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit()):
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            text = source[i:j]
            tokens.append(Token("int", text, int(text), span(col, j - i)))
        elif ch == '"':
            try:
                value, j = read_value_prefix(source, i)
            except ValueSyntaxError as exc:
                errors.append(ParseError(f"bad text literal: {exc}", span(col, 1)))
                j = source.find("\n", i)
                j = n if j < 0 else j
            else:
                if "\n" in source[i:j]:
                    errors.append(ParseError("raw newline in text literal", span(col, j - i)))
                tokens.append(Token("text", source[i:j], value, span(col, j - i)))
        else:
            for p in PUNCT:
                if source.startswith(p, i):
                    j = i + len(p)
                    tokens.append(Token("punct", p, p, span(col, len(p))))
                    break
            else:
                errors.append(ParseError(f"unexpected character {ch!r}", span(col, 1)))
                j = i + 1
        col += j - start
        i = j
    tokens.append(Token("eof", "", None, SourceSpan(file, line, col, 0)))
    return tokens, errors
