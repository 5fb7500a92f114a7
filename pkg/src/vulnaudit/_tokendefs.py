"""Token tables shared by the compiled and pure scanners.

Both scanner twins must read their vocabulary from here so the keyword set
and operator inventory can never drift apart.
"""

# token kind codes
IDENTIFIER = 0
KEYWORD = 1
NUMBER_LITERAL = 2
STRING_LITERAL = 3
CHAR_LITERAL = 4
OPERATOR = 5
PUNCTUATION = 6
PREPROCESSOR = 7

# ended-inside codes
ENDED_NO = 0
ENDED_BLOCK_COMMENT = 1
ENDED_STRING_LITERAL = 2
ENDED_CHAR_LITERAL = 3

# C plus the common C++ and compiler-extension keywords seen in real corpora.
# Contextual keywords (final, override) are deliberately absent: they are
# ordinary identifiers most of the time in C code.
KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Alignas _Alignof _Atomic _Bool _Complex _Generic _Imaginary _Noreturn
    _Static_assert _Thread_local
    alignas alignof and and_eq asm bitand bitor bool catch char8_t char16_t
    char32_t class compl concept consteval constexpr constinit const_cast
    co_await co_return co_yield decltype delete dynamic_cast explicit export
    friend mutable namespace new noexcept not not_eq nullptr operator or
    or_eq private protected public reinterpret_cast requires static_assert
    static_cast template this thread_local throw true false try typeid
    typename using virtual wchar_t xor xor_eq
    __attribute__ __asm __asm__ __volatile__ __inline __inline__ __restrict
    __restrict__ __typeof __typeof__ __declspec __cdecl __stdcall __fastcall
    __forceinline __extension__ __builtin_va_list __int8 __int16 __int32
    __int64
    """.split()
)

PUNCTUATION_CHARS = "(){}[];,"

# maximal munch: three-character operators first, then two, then one
OPERATORS_3 = ("<<=", ">>=", "->*", "...", "<=>")
OPERATORS_2 = (
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::", ".*", "##",
)
