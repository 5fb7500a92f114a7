import pytest

from vulnaudit.lexer import (
    CompletenessClass,
    EndedInside,
    TokenKind,
    classify_completeness,
    tokenize,
)

K = TokenKind
C = CompletenessClass


def kinds(code):
    return [t.kind for t in tokenize(code).tokens]


def texts(code):
    return list(tokenize(code).texts)


class TestScanner:
    def test_basic_function(self):
        ts = tokenize("int f(int a){return a+1;}")
        assert list(ts.texts) == [
            "int", "f", "(", "int", "a", ")", "{", "return", "a", "+", "1",
            ";", "}",
        ]
        assert [TokenKind(k) for k in ts.kinds] == [
            K.KEYWORD, K.IDENTIFIER, K.PUNCTUATION, K.KEYWORD, K.IDENTIFIER,
            K.PUNCTUATION, K.PUNCTUATION, K.KEYWORD, K.IDENTIFIER, K.OPERATOR,
            K.NUMBER_LITERAL, K.PUNCTUATION, K.PUNCTUATION,
        ]
        assert ts.ended_inside is EndedInside.NO

    def test_keywords_vs_identifiers(self):
        ts = tokenize("while whileX size_t constexpr")
        got = [(t.kind, t.text) for t in ts.tokens]
        assert got == [
            (K.KEYWORD, "while"),
            (K.IDENTIFIER, "whileX"),
            (K.IDENTIFIER, "size_t"),
            (K.KEYWORD, "constexpr"),
        ]

    def test_number_forms(self):
        for lit in ("0", "42u", "0x1Ful", "3.14f", "1e-5", "2E+10", "10UL",
                    "0xABCDEF", ".noexample" if False else "7."):
            ts = tokenize(f"x={lit};")
            assert ts.texts[2] == lit, lit
            assert TokenKind(ts.kinds[2]) is K.NUMBER_LITERAL, lit

    def test_string_with_escapes(self):
        ts = tokenize(r'char *s = "a\"b\\";')
        assert ts.texts[4] == r'"a\"b\\"'
        assert TokenKind(ts.kinds[4]) is K.STRING_LITERAL

    def test_char_literal(self):
        ts = tokenize(r"char c = '\n';")
        assert ts.texts[3] == r"'\n'"
        assert TokenKind(ts.kinds[3]) is K.CHAR_LITERAL

    def test_string_spans_newline(self):
        ts = tokenize('"ab\ncd" x')
        assert ts.texts[0] == '"ab\ncd"'
        assert ts.ended_inside is EndedInside.NO
        # the identifier after the literal sits on line 2
        assert ts.tokens[1].line == 2

    def test_unterminated_string(self):
        ts = tokenize('x = "never closed')
        assert ts.ended_inside is EndedInside.STRING_LITERAL

    def test_unterminated_char(self):
        assert tokenize("c = 'q").ended_inside is EndedInside.CHAR_LITERAL

    def test_comments_consumed(self):
        assert texts("a /* mid */ b // tail\nc") == ["a", "b", "c"]

    def test_unterminated_block_comment(self):
        ts = tokenize("a /* runs off")
        assert list(ts.texts) == ["a"]
        assert ts.ended_inside is EndedInside.BLOCK_COMMENT

    def test_operators_maximal_munch(self):
        assert texts("a<<=b>>c->d...e<=>f") == [
            "a", "<<=", "b", ">>", "c", "->", "d", "...", "e", "<=>", "f",
        ]

    def test_scope_and_member_operators(self):
        assert texts("A::b.*c##d") == ["A", "::", "b", ".*", "c", "##", "d"]

    def test_unlexable_bytes_become_single_char_operators(self):
        ts = tokenize("a @ \x01 é b")
        assert list(ts.texts) == ["a", "@", "\x01", "é", "b"]
        assert all(
            TokenKind(k) is K.OPERATOR for k in ts.kinds[1:4]
        )

    def test_line_numbers(self):
        ts = tokenize("a\nb\n\nc")
        assert [(t.text, t.line) for t in ts.tokens] == [
            ("a", 1), ("b", 2), ("c", 4),
        ]

    def test_non_string_input_rejected(self):
        with pytest.raises(TypeError):
            tokenize(b"int x;")

    def test_stream_api(self):
        ts = tokenize("a b")
        assert len(ts) == 2
        assert [t.text for t in ts] == ["a", "b"]
        assert "2 tokens" in repr(ts)


class TestPreprocessor:
    def test_directive_is_single_token(self):
        ts = tokenize("#include <stdio.h>\nint x;")
        assert ts.texts[0] == "#include <stdio.h>"
        assert TokenKind(ts.kinds[0]) is K.PREPROCESSOR
        assert ts.texts[1] == "int"

    def test_backslash_continuation_joined(self):
        ts = tokenize("#define MAX(a,b) \\\n  ((a)>(b)?(a):(b))\nx")
        assert ts.texts[0] == "#define MAX(a,b)    ((a)>(b)?(a):(b))"
        assert ts.texts[1] == "x"

    def test_line_comment_ends_directive_text(self):
        ts = tokenize("#define A 1 // why\nB")
        assert ts.texts[0] == "#define A 1"
        assert ts.texts[1] == "B"

    def test_block_comment_inside_directive(self):
        ts = tokenize("#define A/*gap*/1\nB")
        assert ts.texts[0] == "#define A 1"

    def test_trailing_whitespace_stripped(self):
        assert tokenize("#pragma once   \t\nx").texts[0] == "#pragma once"

    def test_hash_mid_line_is_operator(self):
        ts = tokenize("a # b")
        assert list(ts.texts) == ["a", "#", "b"]
        assert TokenKind(ts.kinds[1]) is K.OPERATOR

    def test_comment_prefix_keeps_line_fresh(self):
        ts = tokenize("/* banner */ #define X 1\ny")
        assert ts.texts[0] == "#define X 1"

    def test_directive_after_code_line(self):
        ts = tokenize("int a;\n#define B 2\nint c;")
        assert ts.texts[3] == "#define B 2"


class TestClassify:
    def cls(self, code):
        return classify_completeness(tokenize(code))

    def test_complete(self):
        assert self.cls("int f(int a) { return a; }") is C.COMPLETE
        assert self.cls("static size_t g(void) { return 0; }") is C.COMPLETE

    def test_empty(self):
        assert self.cls("") is C.EMPTY
        assert self.cls("   \n\t") is C.EMPTY
        assert self.cls("/* only a comment */") is C.EMPTY

    def test_declaration_only(self):
        assert self.cls("int f(int a, char *b);") is C.DECLARATION_ONLY

    def test_declaration_only_wins_over_start_check(self):
        # no brace and a trailing semicolon reads as a declaration even when
        # the text is really a statement fragment; the check order is fixed
        assert self.cls("return x;") is C.DECLARATION_ONLY

    def test_truncated_start_no_paren(self):
        assert self.cls("return x; }") is C.TRUNCATED_START

    def test_truncated_start_leading_paren(self):
        assert self.cls("(a + b); }") is C.TRUNCATED_START

    def test_truncated_start_call_expression(self):
        assert self.cls("x = helper(a, 3); return x; }") is C.TRUNCATED_START

    def test_truncated_end_open_brace(self):
        assert self.cls("int f(int a) { a = a + 1;") is C.TRUNCATED_END

    def test_truncated_end_inside_literal(self):
        assert self.cls('int f(void) { puts("cut') is C.TRUNCATED_END

    def test_truncated_end_trailing_expression(self):
        # braces balance but the stream stops mid-statement
        assert self.cls("int f(void) { if (x) { y(); } z = 1") is C.TRUNCATED_END

    def test_truncated_both(self):
        assert self.cls("x = f(a); if (x) { y = y + 1;") is C.TRUNCATED_BOTH

    def test_destructor_not_start_truncated(self):
        assert self.cls("Foo::~Foo() { release(); }") is C.COMPLETE

    def test_operator_overload_not_start_truncated(self):
        assert self.cls("bool operator==(const T &a) { return true; }") is C.COMPLETE

    def test_qualified_name_not_start_truncated(self):
        assert self.cls("void NS::fn() { work(); }") is C.COMPLETE

    def test_keyword_led_paren_not_flagged(self):
        # control-flow headers never look like a missing function header
        assert self.cls("if (x) { y(); }") is C.COMPLETE

    def test_pointer_return_type(self):
        assert self.cls("char *dup(const char *s) { return copy(s); }") is C.COMPLETE
