"""Pure-Python twin of the compiled scanner/verifier extension.

This module is the reference implementation: `_kernels.pyx` is a line-for-
line port of the loops below and must produce identical output for every
input.  Keep the two in lockstep when changing either.
"""

from __future__ import annotations

import sys

from ._tokendefs import (
    CHAR_LITERAL,
    ENDED_BLOCK_COMMENT,
    ENDED_CHAR_LITERAL,
    ENDED_NO,
    ENDED_STRING_LITERAL,
    IDENTIFIER,
    KEYWORD,
    KEYWORDS,
    NUMBER_LITERAL,
    OPERATOR,
    OPERATORS_2,
    OPERATORS_3,
    PREPROCESSOR,
    PUNCTUATION,
    PUNCTUATION_CHARS,
    STRING_LITERAL,
)

_OPS3 = frozenset(OPERATORS_3)
_OPS2 = frozenset(OPERATORS_2)
_PUNCT = frozenset(PUNCTUATION_CHARS)
_KEYWORDS = KEYWORDS


def _is_ident_start(c: str) -> bool:
    return ("a" <= c <= "z") or ("A" <= c <= "Z") or c == "_"


def _is_ident_char(c: str) -> bool:
    return ("a" <= c <= "z") or ("A" <= c <= "Z") or ("0" <= c <= "9") or c == "_"


def _is_digit(c: str) -> bool:
    return "0" <= c <= "9"


def _is_hex_digit(c: str) -> bool:
    return ("0" <= c <= "9") or ("a" <= c <= "f") or ("A" <= c <= "F")


def _scan_number(code: str, i: int) -> int:
    """Return the index one past a numeric literal starting at ``i``."""
    n = len(code)
    if code[i] == "0" and i + 1 < n and (code[i + 1] == "x" or code[i + 1] == "X"):
        j = i + 2
        while j < n and _is_hex_digit(code[j]):
            j += 1
        while j < n and code[j] in "uUlL":
            j += 1
        return j
    j = i
    while j < n and _is_digit(code[j]):
        j += 1
    if j < n and code[j] == ".":
        j += 1
        while j < n and _is_digit(code[j]):
            j += 1
    if j < n and (code[j] == "e" or code[j] == "E"):
        k = j + 1
        if k < n and (code[k] == "+" or code[k] == "-"):
            k += 1
        if k < n and _is_digit(code[k]):
            j = k
            while j < n and _is_digit(code[j]):
                j += 1
    while j < n and code[j] in "uUlLfF":
        j += 1
    return j


def scan(code: str):
    """Tokenize C/C++ source pragmatically.

    Returns (kinds, texts, lines, ended) where the first three are parallel
    lists and ``ended`` says whether the text stopped inside an unfinished
    construct.  Comments and whitespace are consumed, never emitted.  Any
    byte that fits no rule becomes a single-character Operator token, so
    scanning is total.
    """
    intern = sys.intern
    kinds: list[int] = []
    texts: list[str] = []
    lines: list[int] = []
    n = len(code)
    i = 0
    line = 1
    fresh = True  # only whitespace (or nothing) since the last newline
    ended = ENDED_NO

    while i < n:
        c = code[i]

        if c == "\n":
            line += 1
            i += 1
            fresh = True
            continue
        if c == " " or c == "\t" or c == "\r" or c == "\f" or c == "\v":
            i += 1
            continue

        # comments
        if c == "/" and i + 1 < n:
            d = code[i + 1]
            if d == "/":
                i += 2
                while i < n and code[i] != "\n":
                    i += 1
                continue
            if d == "*":
                i += 2
                closed = False
                while i < n:
                    if code[i] == "*" and i + 1 < n and code[i + 1] == "/":
                        i += 2
                        closed = True
                        break
                    if code[i] == "\n":
                        line += 1
                        fresh = True
                    i += 1
                if not closed:
                    ended = ENDED_BLOCK_COMMENT
                continue

        start = i
        start_line = line

        # preprocessor directive: a full (possibly continued) line is one token
        if c == "#" and fresh:
            parts: list[str] = []
            seg = i
            i += 1
            while i < n:
                ch = code[i]
                if ch == "\n":
                    break
                if ch == "\\":
                    # line continuation, tolerating \r\n
                    j = i + 1
                    if j < n and code[j] == "\r":
                        j += 1
                    if j < n and code[j] == "\n":
                        parts.append(code[seg:i])
                        parts.append(" ")
                        line += 1
                        i = j + 1
                        seg = i
                        continue
                    i += 1
                    continue
                if ch == "/" and i + 1 < n and code[i + 1] == "/":
                    parts.append(code[seg:i])
                    i += 2
                    while i < n and code[i] != "\n":
                        i += 1
                    seg = i
                    break
                if ch == "/" and i + 1 < n and code[i + 1] == "*":
                    parts.append(code[seg:i])
                    parts.append(" ")
                    i += 2
                    closed = False
                    while i < n:
                        if code[i] == "*" and i + 1 < n and code[i + 1] == "/":
                            i += 2
                            closed = True
                            break
                        if code[i] == "\n":
                            line += 1
                        i += 1
                    if not closed:
                        ended = ENDED_BLOCK_COMMENT
                    seg = i
                    continue
                if ch == '"' or ch == "'":
                    q = ch
                    i += 1
                    closed = False
                    while i < n:
                        cc = code[i]
                        if cc == "\\" and i + 1 < n:
                            if code[i + 1] == "\n":
                                line += 1
                            i += 2
                            continue
                        if cc == q:
                            i += 1
                            closed = True
                            break
                        if cc == "\n":
                            # a raw newline ends the directive; the literal
                            # is left open but the scan recovers on the next line
                            break
                        i += 1
                    if not closed and i >= n:
                        ended = ENDED_STRING_LITERAL if q == '"' else ENDED_CHAR_LITERAL
                    continue
                i += 1
            parts.append(code[seg:i])
            text = "".join(parts).rstrip()
            kinds.append(PREPROCESSOR)
            texts.append(intern(text))
            lines.append(start_line)
            fresh = False
            continue

        # string / char literals: escapes kept, may span lines
        if c == '"' or c == "'":
            q = c
            i += 1
            closed = False
            while i < n:
                cc = code[i]
                if cc == "\\" and i + 1 < n:
                    if code[i + 1] == "\n":
                        line += 1
                    i += 2
                    continue
                if cc == q:
                    i += 1
                    closed = True
                    break
                if cc == "\n":
                    line += 1
                i += 1
            if not closed:
                ended = ENDED_STRING_LITERAL if q == '"' else ENDED_CHAR_LITERAL
            kinds.append(STRING_LITERAL if q == '"' else CHAR_LITERAL)
            texts.append(intern(code[start:i]))
            lines.append(start_line)
            fresh = False
            continue

        if _is_ident_start(c):
            i += 1
            while i < n and _is_ident_char(code[i]):
                i += 1
            text = code[start:i]
            kinds.append(KEYWORD if text in _KEYWORDS else IDENTIFIER)
            texts.append(intern(text))
            lines.append(start_line)
            fresh = False
            continue

        if _is_digit(c) or (c == "." and i + 1 < n and _is_digit(code[i + 1])):
            i = _scan_number(code, i)
            kinds.append(NUMBER_LITERAL)
            texts.append(intern(code[start:i]))
            lines.append(start_line)
            fresh = False
            continue

        if c in _PUNCT:
            kinds.append(PUNCTUATION)
            texts.append(intern(c))
            lines.append(start_line)
            i += 1
            fresh = False
            continue

        if i + 3 <= n and code[i : i + 3] in _OPS3:
            kinds.append(OPERATOR)
            texts.append(intern(code[i : i + 3]))
            lines.append(start_line)
            i += 3
            fresh = False
            continue
        if i + 2 <= n and code[i : i + 2] in _OPS2:
            kinds.append(OPERATOR)
            texts.append(intern(code[i : i + 2]))
            lines.append(start_line)
            i += 2
            fresh = False
            continue

        # anything else, known single-char operator or not, is one Operator token
        kinds.append(OPERATOR)
        texts.append(intern(c))
        lines.append(start_line)
        i += 1
        fresh = False

    return kinds, texts, lines, ended


def verify_pairs(
    pair_a,
    pair_b,
    tok_ids,
    tok_counts,
    tok_indptr,
    tok_totals,
    idl_ids,
    idl_indptr,
    multiset_threshold: float,
    set_threshold: float,
):
    """Exact near-miss check for candidate pairs over packed sketches.

    Sketches are CSR-packed: sample ``k`` owns ``tok_ids[tok_indptr[k]:
    tok_indptr[k+1]]`` (sorted, with parallel counts) and the analogous
    ``idl_ids`` slice.  Returns a uint8 mask: 1 where both the token-multiset
    Jaccard and the identifier/literal set Jaccard meet their thresholds.
    """
    import numpy as np

    a_arr = pair_a.tolist()
    b_arr = pair_b.tolist()
    tids = tok_ids.tolist()
    tcounts = tok_counts.tolist()
    tptr = tok_indptr.tolist()
    totals = tok_totals.tolist()
    iids = idl_ids.tolist()
    iptr = idl_indptr.tolist()

    out = np.zeros(len(a_arr), dtype=np.uint8)
    for k in range(len(a_arr)):
        a = a_arr[k]
        b = b_arr[k]

        # identifier/literal set jaccard
        ia, ea = iptr[a], iptr[a + 1]
        ib, eb = iptr[b], iptr[b + 1]
        la = ea - ia
        lb = eb - ib
        if la == 0 and lb == 0:
            set_ok = True
        else:
            inter = 0
            x, y = ia, ib
            while x < ea and y < eb:
                va = iids[x]
                vb = iids[y]
                if va == vb:
                    inter += 1
                    x += 1
                    y += 1
                elif va < vb:
                    x += 1
                else:
                    y += 1
            union = la + lb - inter
            set_ok = (inter / union) >= set_threshold
        if not set_ok:
            continue

        # token multiset jaccard
        xa, fa = tptr[a], tptr[a + 1]
        xb, fb = tptr[b], tptr[b + 1]
        smin = 0
        x, y = xa, xb
        while x < fa and y < fb:
            va = tids[x]
            vb = tids[y]
            if va == vb:
                ca = tcounts[x]
                cb = tcounts[y]
                smin += ca if ca < cb else cb
                x += 1
                y += 1
            elif va < vb:
                x += 1
            else:
                y += 1
        smax = totals[a] + totals[b] - smin
        if smax == 0:
            multi_ok = True
        else:
            multi_ok = (smin / smax) >= multiset_threshold
        if multi_ok:
            out[k] = 1
    return out
