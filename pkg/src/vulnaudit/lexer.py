"""Pragmatic C/C++ lexing and function-shape classification.

The scanner never parses; it only has to be honest about token boundaries
so that downstream measurements (brace balance, token bags, literal
boundaries) see through formatting.  Its failure mode on malformed input is
graceful: unknown bytes become single-character operator tokens and
truncated constructs are reported through ``TokenStream.ended_inside``.

Known limits, by design: digraphs/trigraphs are not recognised, raw string
literals are split like ordinary tokens, and a C++ template return type
such as ``vector<int> f()`` trips the truncated-start heuristic because
``>`` is not treated as type-forming.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterator, Sequence

from . import _tokendefs as _td
from . import kernels


class TokenKind(IntEnum):
    IDENTIFIER = _td.IDENTIFIER
    KEYWORD = _td.KEYWORD
    NUMBER_LITERAL = _td.NUMBER_LITERAL
    STRING_LITERAL = _td.STRING_LITERAL
    CHAR_LITERAL = _td.CHAR_LITERAL
    OPERATOR = _td.OPERATOR
    PUNCTUATION = _td.PUNCTUATION
    PREPROCESSOR = _td.PREPROCESSOR


class EndedInside(IntEnum):
    NO = _td.ENDED_NO
    BLOCK_COMMENT = _td.ENDED_BLOCK_COMMENT
    STRING_LITERAL = _td.ENDED_STRING_LITERAL
    CHAR_LITERAL = _td.ENDED_CHAR_LITERAL


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int  # 1-based line of the token's first character


class TokenStream:
    """Scanner output: parallel kind/text/line arrays plus the end state.

    The arrays are the working representation for the hot paths; ``tokens``
    materialises Token objects for inspection and tests.
    """

    __slots__ = ("kinds", "texts", "lines", "ended_inside")

    def __init__(
        self,
        kinds: Sequence[int],
        texts: Sequence[str],
        lines: Sequence[int],
        ended_inside: EndedInside,
    ):
        self.kinds = list(kinds)
        self.texts = list(texts)
        self.lines = list(lines)
        self.ended_inside = EndedInside(ended_inside)

    @property
    def tokens(self) -> tuple[Token, ...]:
        return tuple(
            Token(TokenKind(k), t, ln)
            for k, t, ln in zip(self.kinds, self.texts, self.lines)
        )

    def __len__(self) -> int:
        return len(self.texts)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __repr__(self) -> str:
        return f"TokenStream({len(self.texts)} tokens, ended_inside={self.ended_inside.name})"


def tokenize(code: str) -> TokenStream:
    """Scan ``code`` into a TokenStream.  Total: any input tokenizes."""
    if not isinstance(code, str):
        raise TypeError("code must be a string")
    kinds, texts, lines, ended = kernels.scan(code)
    return TokenStream(kinds, texts, lines, EndedInside(ended))


class CompletenessClass(Enum):
    COMPLETE = "complete"
    TRUNCATED_START = "truncated_start"
    TRUNCATED_END = "truncated_end"
    TRUNCATED_BOTH = "truncated_both"
    EMPTY = "empty"
    DECLARATION_ONLY = "declaration_only"


# tokens that may legitimately precede a function name in its header
_TYPE_FORMING_OPERATORS = frozenset(("*", "&"))


def _first_top_level_paren(kinds: list[int], texts: list[str]) -> int:
    """Index of the first '(' at zero bracket depth, or -1."""
    paren = brace = bracket = 0
    for idx, (k, t) in enumerate(zip(kinds, texts)):
        if k != _td.PUNCTUATION:
            continue
        if t == "(":
            if paren == 0 and brace == 0 and bracket == 0:
                return idx
            paren += 1
        elif t == ")":
            paren -= 1
        elif t == "{":
            brace += 1
        elif t == "}":
            brace -= 1
        elif t == "[":
            bracket += 1
        elif t == "]":
            bracket -= 1
    return -1


def _start_truncated(kinds: list[int], texts: list[str]) -> bool:
    paren_idx = _first_top_level_paren(kinds, texts)
    if paren_idx < 0:
        # nothing that could be a parameter list: no usable header
        return True
    if paren_idx == 0:
        return True
    if kinds[paren_idx - 1] != _td.IDENTIFIER:
        return False
    # lone function name with nothing type-like in front of it
    if paren_idx == 1:
        type_forming = False
        prev_text = None
    else:
        prev_kind = kinds[paren_idx - 2]
        prev_text = texts[paren_idx - 2]
        type_forming = (
            prev_kind == _td.KEYWORD
            or prev_kind == _td.IDENTIFIER
            or (prev_kind == _td.OPERATOR and prev_text in _TYPE_FORMING_OPERATORS)
        )
    if type_forming:
        return False
    # C++ special members legitimately have no leading type
    name = texts[paren_idx - 1]
    if "~" in name:
        return False
    if prev_text in ("~", "::"):
        return False
    if any(t == "operator" for t in texts[:paren_idx]):
        return False
    return True


def _end_truncated(stream: TokenStream) -> bool:
    balance = 0
    has_open = False
    for k, t in zip(stream.kinds, stream.texts):
        if k != _td.PUNCTUATION:
            continue
        if t == "{":
            balance += 1
            has_open = True
        elif t == "}":
            balance -= 1
    if balance > 0:
        return True
    if stream.ended_inside != EndedInside.NO:
        return True
    if has_open and stream.texts[-1] not in ("}", ";"):
        return True
    return False


def classify_completeness(stream: TokenStream) -> CompletenessClass:
    """Classify a function body's shape from its token stream.

    Rules apply in order: empty stream; declaration (no brace, ends ';');
    then independent start/end truncation checks combined into the four
    remaining classes.  Braces inside literals never count because literals
    are single tokens.
    """
    if len(stream) == 0:
        return CompletenessClass.EMPTY
    has_brace = any(
        k == _td.PUNCTUATION and t == "{"
        for k, t in zip(stream.kinds, stream.texts)
    )
    if not has_brace and stream.texts[-1] == ";":
        return CompletenessClass.DECLARATION_ONLY
    start_bad = _start_truncated(stream.kinds, stream.texts)
    end_bad = _end_truncated(stream)
    if start_bad and end_bad:
        return CompletenessClass.TRUNCATED_BOTH
    if start_bad:
        return CompletenessClass.TRUNCATED_START
    if end_bad:
        return CompletenessClass.TRUNCATED_END
    return CompletenessClass.COMPLETE
