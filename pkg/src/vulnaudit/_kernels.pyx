# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _kernels_py.

Same algorithm, same output, token for token; only the loop machinery is
typed. _kernels_py.py is the reference — port any change made there.
"""

import sys

import numpy as np

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
    STRING_LITERAL,
)

_OPS3 = frozenset(OPERATORS_3)
_OPS2 = frozenset(OPERATORS_2)
_KEYWORDS = KEYWORDS

DEF K_IDENTIFIER = 0
DEF K_KEYWORD = 1
DEF K_NUMBER = 2
DEF K_STRING = 3
DEF K_CHAR = 4
DEF K_OPERATOR = 5
DEF K_PUNCTUATION = 6
DEF K_PREPROCESSOR = 7

DEF E_NO = 0
DEF E_BLOCK_COMMENT = 1
DEF E_STRING = 2
DEF E_CHAR = 3


cdef inline bint _is_ident_start(Py_UCS4 c):
    return (u"a" <= c <= u"z") or (u"A" <= c <= u"Z") or c == u"_"


cdef inline bint _is_ident_char(Py_UCS4 c):
    return (u"a" <= c <= u"z") or (u"A" <= c <= u"Z") or (u"0" <= c <= u"9") or c == u"_"


cdef inline bint _is_digit(Py_UCS4 c):
    return u"0" <= c <= u"9"


cdef inline bint _is_hex_digit(Py_UCS4 c):
    return (u"0" <= c <= u"9") or (u"a" <= c <= u"f") or (u"A" <= c <= u"F")


cdef inline bint _is_int_suffix(Py_UCS4 c):
    return c == u"u" or c == u"U" or c == u"l" or c == u"L"


cdef inline bint _is_num_suffix(Py_UCS4 c):
    return _is_int_suffix(c) or c == u"f" or c == u"F"


cdef inline bint _is_punct(Py_UCS4 c):
    return (
        c == u"(" or c == u")" or c == u"{" or c == u"}"
        or c == u"[" or c == u"]" or c == u";" or c == u","
    )


cdef Py_ssize_t _scan_number(unicode code, Py_ssize_t i):
    cdef Py_ssize_t n = len(code)
    cdef Py_ssize_t j, k
    if code[i] == u"0" and i + 1 < n and (code[i + 1] == u"x" or code[i + 1] == u"X"):
        j = i + 2
        while j < n and _is_hex_digit(code[j]):
            j += 1
        while j < n and _is_int_suffix(code[j]):
            j += 1
        return j
    j = i
    while j < n and _is_digit(code[j]):
        j += 1
    if j < n and code[j] == u".":
        j += 1
        while j < n and _is_digit(code[j]):
            j += 1
    if j < n and (code[j] == u"e" or code[j] == u"E"):
        k = j + 1
        if k < n and (code[k] == u"+" or code[k] == u"-"):
            k += 1
        if k < n and _is_digit(code[k]):
            j = k
            while j < n and _is_digit(code[j]):
                j += 1
    while j < n and _is_num_suffix(code[j]):
        j += 1
    return j


def scan(unicode code):
    """Tokenize C/C++ source; see _kernels_py.scan for the contract."""
    intern = sys.intern
    cdef list kinds = []
    cdef list texts = []
    cdef list lines = []
    cdef Py_ssize_t n = len(code)
    cdef Py_ssize_t i = 0, start, seg, j
    cdef int line = 1, start_line
    cdef bint fresh = True
    cdef int ended = E_NO
    cdef bint closed
    cdef Py_UCS4 c, d, ch, cc, q
    cdef list parts
    cdef unicode text

    while i < n:
        c = code[i]

        if c == u"\n":
            line += 1
            i += 1
            fresh = True
            continue
        if c == u" " or c == u"\t" or c == u"\r" or c == u"\f" or c == u"\v":
            i += 1
            continue

        if c == u"/" and i + 1 < n:
            d = code[i + 1]
            if d == u"/":
                i += 2
                while i < n and code[i] != u"\n":
                    i += 1
                continue
            if d == u"*":
                i += 2
                closed = False
                while i < n:
                    if code[i] == u"*" and i + 1 < n and code[i + 1] == u"/":
                        i += 2
                        closed = True
                        break
                    if code[i] == u"\n":
                        line += 1
                        fresh = True
                    i += 1
                if not closed:
                    ended = E_BLOCK_COMMENT
                continue

        start = i
        start_line = line

        if c == u"#" and fresh:
            parts = []
            seg = i
            i += 1
            while i < n:
                ch = code[i]
                if ch == u"\n":
                    break
                if ch == u"\\":
                    j = i + 1
                    if j < n and code[j] == u"\r":
                        j += 1
                    if j < n and code[j] == u"\n":
                        parts.append(code[seg:i])
                        parts.append(u" ")
                        line += 1
                        i = j + 1
                        seg = i
                        continue
                    i += 1
                    continue
                if ch == u"/" and i + 1 < n and code[i + 1] == u"/":
                    parts.append(code[seg:i])
                    i += 2
                    while i < n and code[i] != u"\n":
                        i += 1
                    seg = i
                    break
                if ch == u"/" and i + 1 < n and code[i + 1] == u"*":
                    parts.append(code[seg:i])
                    parts.append(u" ")
                    i += 2
                    closed = False
                    while i < n:
                        if code[i] == u"*" and i + 1 < n and code[i + 1] == u"/":
                            i += 2
                            closed = True
                            break
                        if code[i] == u"\n":
                            line += 1
                        i += 1
                    if not closed:
                        ended = E_BLOCK_COMMENT
                    seg = i
                    continue
                if ch == u'"' or ch == u"'":
                    q = ch
                    i += 1
                    closed = False
                    while i < n:
                        cc = code[i]
                        if cc == u"\\" and i + 1 < n:
                            if code[i + 1] == u"\n":
                                line += 1
                            i += 2
                            continue
                        if cc == q:
                            i += 1
                            closed = True
                            break
                        if cc == u"\n":
                            break
                        i += 1
                    if not closed and i >= n:
                        ended = E_STRING if q == u'"' else E_CHAR
                    continue
                i += 1
            parts.append(code[seg:i])
            text = (u"".join(parts)).rstrip()
            kinds.append(K_PREPROCESSOR)
            texts.append(intern(text))
            lines.append(start_line)
            fresh = False
            continue

        if c == u'"' or c == u"'":
            q = c
            i += 1
            closed = False
            while i < n:
                cc = code[i]
                if cc == u"\\" and i + 1 < n:
                    if code[i + 1] == u"\n":
                        line += 1
                    i += 2
                    continue
                if cc == q:
                    i += 1
                    closed = True
                    break
                if cc == u"\n":
                    line += 1
                i += 1
            if not closed:
                ended = E_STRING if q == u'"' else E_CHAR
            kinds.append(K_STRING if q == u'"' else K_CHAR)
            texts.append(intern(code[start:i]))
            lines.append(start_line)
            fresh = False
            continue

        if _is_ident_start(c):
            i += 1
            while i < n and _is_ident_char(code[i]):
                i += 1
            text = code[start:i]
            kinds.append(K_KEYWORD if text in _KEYWORDS else K_IDENTIFIER)
            texts.append(intern(text))
            lines.append(start_line)
            fresh = False
            continue

        if _is_digit(c) or (c == u"." and i + 1 < n and _is_digit(code[i + 1])):
            i = _scan_number(code, i)
            kinds.append(K_NUMBER)
            texts.append(intern(code[start:i]))
            lines.append(start_line)
            fresh = False
            continue

        if _is_punct(c):
            kinds.append(K_PUNCTUATION)
            texts.append(intern(code[i : i + 1]))
            lines.append(start_line)
            i += 1
            fresh = False
            continue

        if i + 3 <= n and code[i : i + 3] in _OPS3:
            kinds.append(K_OPERATOR)
            texts.append(intern(code[i : i + 3]))
            lines.append(start_line)
            i += 3
            fresh = False
            continue
        if i + 2 <= n and code[i : i + 2] in _OPS2:
            kinds.append(K_OPERATOR)
            texts.append(intern(code[i : i + 2]))
            lines.append(start_line)
            i += 2
            fresh = False
            continue

        kinds.append(K_OPERATOR)
        texts.append(intern(code[i : i + 1]))
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
    double multiset_threshold,
    double set_threshold,
):
    """Exact near-miss check; see _kernels_py.verify_pairs for the contract."""
    cdef const long long[::1] pa = pair_a
    cdef const long long[::1] pb = pair_b
    cdef const long long[::1] tids = tok_ids
    cdef const long long[::1] tcounts = tok_counts
    cdef const long long[::1] tptr = tok_indptr
    cdef const long long[::1] totals = tok_totals
    cdef const long long[::1] iids = idl_ids
    cdef const long long[::1] iptr = idl_indptr

    out_arr = np.zeros(pa.shape[0], dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr

    cdef Py_ssize_t k, a, b, x, y, ia, ea, ib, eb, xa, fa, xb, fb
    cdef long long va, vb, ca, cb, inter, union_, smin, smax, la, lb
    cdef bint set_ok, multi_ok

    for k in range(pa.shape[0]):
        a = pa[k]
        b = pb[k]

        ia = iptr[a]
        ea = iptr[a + 1]
        ib = iptr[b]
        eb = iptr[b + 1]
        la = ea - ia
        lb = eb - ib
        if la == 0 and lb == 0:
            set_ok = True
        else:
            inter = 0
            x = ia
            y = ib
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
            union_ = la + lb - inter
            set_ok = (<double> inter / <double> union_) >= set_threshold
        if not set_ok:
            continue

        xa = tptr[a]
        fa = tptr[a + 1]
        xb = tptr[b]
        fb = tptr[b + 1]
        smin = 0
        x = xa
        y = xb
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
            multi_ok = (<double> smin / <double> smax) >= multiset_threshold
        if multi_ok:
            out[k] = 1
    return out_arr
