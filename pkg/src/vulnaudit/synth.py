"""Synthetic C-like corpora with built-in ground truth.

Generation is token-first: a sample is assembled as a list of token texts
and only then rendered to source.  The renderer promises that scanning the
rendered source returns exactly the assembled texts, so every structural
fact about a generated corpus (clone relations, truncation class, token
bags) is known by construction instead of re-derived by the code under
test.  That promise holds for any token list that contains no bare '#'
or '##' operator tokens and no literal spanning a newline; directive
tokens (text starting with '#') are placed on their own line.
"""

from __future__ import annotations

import random
from collections import Counter
from datetime import date, timedelta
from typing import Iterator, Optional

from ._tokendefs import KEYWORDS
from .clones import is_type3_pair, sketch
from .corpus import CodeSample, Dataset, Label
from .lexer import CompletenessClass, classify_completeness, tokenize

_GLUE = frozenset("(){}[];,")
_BREAK_AFTER = frozenset(";{}")
_LABELS = (Label.VULNERABLE, Label.NON_VULNERABLE)
_INDENT = "    "

_WORDS = (
    "count", "index", "total", "buffer", "size", "offset", "value", "state",
    "length", "limit", "cursor", "depth", "flags", "width", "input", "output",
    "delta", "ratio", "slot", "token", "round", "shift", "scale", "batch",
    "probe", "stride", "margin", "weight", "spare", "anchor",
)
_FN_WORDS = (
    "update", "compute", "handle", "process", "check", "merge", "scan",
    "reduce", "emit", "clamp", "pack", "route",
)
_TYPES = (
    "int", "long", "unsigned", "char", "short", "float", "double",
    "size_t", "uint32_t", "int64_t",
)
_COMMON_NUMBERS = ("0", "1", "2", "4", "8", "16", "32", "64", "128", "255")
_OPS = ("+", "-", "*", "&", "|", "^", "<<", ">>")
_CMPS = ("<", ">", "<=", ">=", "==", "!=")


def render_tokens(
    texts,
    rng: Optional[random.Random] = None,
    comment_rate: float = 0.04,
    newline_rate: float = 0.7,
) -> str:
    """Render token texts to C-ish source that tokenizes back to them.

    With an rng, cosmetic noise (newlines, indentation, comments) is mixed
    in; without one the rendering is canonical and fully deterministic.
    Separation is conservative: adjacent tokens get a space unless one
    side's boundary character is a bracket-class punctuation mark, which
    can never fuse with a neighbor.
    """
    out: list[str] = []
    fresh = True  # only whitespace emitted on the current line so far
    prev_last = ""
    for t in texts:
        if not isinstance(t, str) or not t:
            raise ValueError("token texts must be non-empty strings")
        if t[0] == "#":
            # directive: owns its whole line
            if not fresh:
                out.append("\n")
            out.append(t)
            out.append("\n")
            fresh = True
            prev_last = ""
            continue
        if fresh:
            sep = ""
        elif rng is not None and rng.random() < comment_rate:
            sep = (
                " /* sweep */ "
                if rng.random() < 0.7
                else " // sweep\n" + _INDENT
            )
        elif prev_last in _GLUE or t[0] in _GLUE:
            sep = ""
        else:
            sep = " "
        out.append(sep)
        out.append(t)
        fresh = False
        prev_last = t[-1]
        if (
            rng is not None
            and t in _BREAK_AFTER
            and rng.random() < newline_rate
        ):
            out.append("\n")
            if rng.random() < 0.7:
                out.append(_INDENT)
            fresh = True
            prev_last = ""
    return "".join(out)


def idlit_texts(tokens) -> set[str]:
    """Identifier and literal texts of a token list, keywords excluded.

    Matches the sketch definition used for near-miss matching because
    identifiers, numbers, strings and chars are exactly the tokens whose
    first character is a name character, digit, or quote.
    """
    out = set()
    for t in tokens:
        c = t[0]
        if (c.isalpha() or c == "_" or c.isdigit() or c in "'\"") and t not in KEYWORDS:
            out.add(t)
    return out


def _fresh_number(rng: random.Random, used) -> str:
    while True:
        v = str(rng.randrange(100000, 1000000))
        if v not in used:
            return v


def _body_statements(rng, vars_, nums, n, tag) -> list[str]:
    stmts: list[str] = []
    for _ in range(n):
        kind = rng.randrange(8)
        a = rng.choice(vars_)
        b = rng.choice(vars_)
        num = rng.choice(nums)
        if kind == 0:
            stmts += [a, "=", b, rng.choice(_OPS), num, ";"]
        elif kind == 1:
            stmts += ["if", "(", a, rng.choice(_CMPS), num, ")", "{",
                      b, "=", b, "+", "1", ";", "}"]
        elif kind == 2:
            stmts += ["while", "(", a, ">", "0", ")", "{",
                      a, "--", ";", b, "+=", num, ";", "}"]
        elif kind == 3:
            stmts += [a, "=", a, rng.choice(_OPS), b, ";"]
        elif kind == 4:
            stmts += ["for", "(", a, "=", "0", ";", a, "<", num, ";",
                      a, "++", ")", "{", b, "+=", a, ";", "}"]
        elif kind == 5:
            stmts += [b, "=", "(", a, rng.choice(_CMPS), num, ")",
                      "?", a, ":", b, ";"]
        elif kind == 6:
            stmts += ["puts", "(", f'"{tag} hot path"', ")", ";"]
        else:
            stmts += ["if", "(", a, "==", "'q'", ")", "{",
                      b, "=", "0", ";", "}"]
    return stmts


def _build_function(
    rng: random.Random,
    tag: str,
    n_statements: Optional[int] = None,
    rich: bool = False,
) -> tuple[list[str], list[str]]:
    """Token list for one function plus the variable names it may use.

    Every name is suffixed with the tag, so functions built under distinct
    tags can never share identifiers.  Rich mode declares every variable
    and spends two fresh multi-digit literals, guaranteeing at least 30
    tokens and 8 distinct identifier/literal texts.
    """
    fname = f"{rng.choice(_FN_WORDS)}_{tag}"
    vars_ = [f"{w}_{tag}" for w in rng.sample(_WORDS, 5)]
    nums = list(rng.sample(_COMMON_NUMBERS, 3))
    if n_statements is None:
        n_statements = rng.randrange(2, 6)
    ptype_a, ptype_b = rng.sample(_TYPES, 2)
    head = [rng.choice(_TYPES), fname, "(",
            ptype_a, vars_[0], ",", ptype_b, vars_[1], ")", "{"]
    decls: list[str] = []
    if rich:
        used = set(vars_) | set(nums) | {fname}
        magic = [_fresh_number(rng, used)]
        magic.append(_fresh_number(rng, set(used) | set(magic)))
        nums += magic
        for i, v in enumerate(vars_[2:]):
            decls += [rng.choice(_TYPES), v, "=",
                      magic[i % 2] if i < 2 else rng.choice(nums), ";"]
        n_statements = max(n_statements, 1)
    body = _body_statements(rng, vars_, nums, n_statements, tag)
    tail = ["return", vars_[0], ";", "}"]
    return head + decls + body + tail, vars_


def make_function_tokens(
    rng: random.Random,
    tag: str,
    n_statements: Optional[int] = None,
    rich: bool = False,
) -> list[str]:
    tokens, _ = _build_function(rng, tag, n_statements, rich)
    return tokens


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(f"generator invariant broken: {msg}")


def bounded_substitution(
    rng: random.Random,
    tokens: list[str],
    tag: str,
) -> list[str]:
    """Rename identifiers / swap literals within margins that keep the
    result a near-miss clone of the input.

    Margins: total changed occurrences stay within a ninth of the token
    count (bag similarity floor 0.8) and the number of changed distinct
    values stays within 3/17 of the identifier-literal vocabulary (set
    similarity floor 0.7).  Every replacement is kind-preserving and
    position-wise, so the abstracted token sequence is unchanged.
    """
    occ = Counter(tokens)
    idlits = sorted(idlit_texts(tokens))
    total = len(tokens)
    max_vals = (3 * len(idlits)) // 17
    max_occ = total // 9
    if max_vals == 0 or max_occ == 0:
        return list(tokens)
    candidates = [v for v in idlits if v[0] not in "'\""]
    rng.shuffle(candidates)
    chosen: list[str] = []
    budget = max_occ
    for v in candidates:
        if len(chosen) == max_vals:
            break
        if occ[v] <= budget:
            chosen.append(v)
            budget -= occ[v]
    if not chosen:
        return list(tokens)
    used = set(occ)
    mapping: dict[str, str] = {}
    for j, v in enumerate(sorted(chosen)):
        if v[0].isdigit():
            repl = _fresh_number(rng, used)
        else:
            repl = f"rn{j}_{tag}"
        _check(repl not in used, "replacement must be fresh")
        used.add(repl)
        mapping[v] = repl
    return [mapping.get(t, t) for t in tokens]


def bounded_edit_pairs(
    seed: int,
    count: int,
) -> Iterator[tuple[str, str, str]]:
    """Yield (code_a, code_b, relation) pairs for hierarchy checking.

    relation is "identical" (same token sequence, different formatting) or
    "edited" (margin-bounded renames/literal swaps).  Either way the two
    sides abstract to the same sequence, and the construction margins
    guarantee both near-miss similarity floors hold.
    """
    rng = random.Random(seed)
    for k in range(count):
        tag = f"e{k}"
        tokens = make_function_tokens(
            rng, tag, n_statements=rng.randrange(1, 5), rich=True
        )
        if rng.random() < 0.15:
            relation = "identical"
            other = list(tokens)
        else:
            relation = "edited"
            other = bounded_substitution(rng, tokens, tag)
            if other == tokens:
                relation = "identical"
        yield (
            render_tokens(tokens, rng=rng),
            render_tokens(other, rng=rng),
            relation,
        )


def _plant_tokens(rng: random.Random, tag: str, cls: CompletenessClass):
    """Token list (or raw code) engineered to land in one truncation class."""
    v0 = f"left_{tag}"
    v1 = f"right_{tag}"
    fn = f"call_{tag}"
    if cls is CompletenessClass.TRUNCATED_START:
        return [v0, "=", fn, "(", v1, ",", "3", ")", ";",
                v0, "=", v0, "+", "1", ";", "return", v0, ";", "}"]
    if cls is CompletenessClass.TRUNCATED_END:
        return ["static", "int", fn, "(", "int", v0, ")", "{",
                v0, "=", v0, "*", "3", ";"]
    if cls is CompletenessClass.TRUNCATED_BOTH:
        return [v0, "=", fn, "(", v1, ")", ";",
                "if", "(", v0, ")", "{", v1, "=", v1, "+", "1", ";"]
    if cls is CompletenessClass.DECLARATION_ONLY:
        return ["int", fn, "(", "int", v0, ",", "char", "*", v1, ")", ";"]
    if cls is CompletenessClass.EMPTY:
        return []
    raise ValueError(f"no plant for {cls!r}")


_PLANT_CLASSES = (
    CompletenessClass.TRUNCATED_START,
    CompletenessClass.TRUNCATED_END,
    CompletenessClass.TRUNCATED_BOTH,
    CompletenessClass.DECLARATION_ONLY,
    CompletenessClass.EMPTY,
)


def make_audit_fixture(seed: int = 20257) -> tuple[Dataset, dict]:
    """199-sample corpus whose audit outcome is known exactly.

    Planted structure: 160 isolated functions (4 of them undated), three
    same-label near-miss clusters of sizes 3, 3 and 4, two cross-label
    exact-duplicate pairs, and five samples in each of the five
    non-complete shape classes.  The returned dict carries the expected
    score fractions, breakdowns, and the older/newer token bags that
    determine the freshness score.
    """
    rng = random.Random(seed)
    entries: list[dict] = []

    def add(sid, tokens, label, code=None):
        if code is None:
            code = render_tokens(tokens, rng=rng)
        entries.append(
            {"id": sid, "tokens": list(tokens), "label": label, "code": code}
        )

    for i in range(160):
        add(f"base_{i:03d}", make_function_tokens(rng, f"b{i}"), rng.choice(_LABELS))

    cluster_member_ids: list[str] = []
    for ci, size in enumerate((3, 3, 4)):
        tag = f"c{ci}"
        base, vars_ = _build_function(rng, tag, n_statements=2, rich=True)
        label = rng.choice(_LABELS)
        used = set(base)
        magics = []
        for _ in range(size):
            m = _fresh_number(rng, used)
            used.add(m)
            magics.append(m)
        insert_at = len(base) - 4  # just before the return statement
        for mi, magic in enumerate(magics):
            stmt = [vars_[0], "=", vars_[0], "^", magic, ";"]
            tokens = base[:insert_at] + stmt + base[insert_at:]
            sid = f"dup{ci}_{mi}"
            cluster_member_ids.append(sid)
            add(sid, tokens, label)

    inconsistent_ids: list[str] = []
    for pi in range(2):
        tokens, _ = _build_function(rng, f"p{pi}", rng.randrange(2, 5))
        add(f"pair{pi}_v", tokens, Label.VULNERABLE)
        add(f"pair{pi}_n", list(tokens), Label.NON_VULNERABLE)
        inconsistent_ids += [f"pair{pi}_v", f"pair{pi}_n"]

    # all empty plants share one label: their token sequences are equal, so
    # mixed labels would add a third inconsistent exact cluster
    empty_label = rng.choice(_LABELS)
    for cls in _PLANT_CLASSES:
        for i in range(5):
            tag = f"t{cls.name.lower()}_{i}"
            tokens = _plant_tokens(rng, tag, cls)
            if cls is CompletenessClass.EMPTY:
                add(f"plant_{cls.name.lower()}_{i}", [],
                    empty_label, code=f"/* contents withheld {tag} */\n")
            else:
                add(f"plant_{cls.name.lower()}_{i}", tokens, rng.choice(_LABELS))

    _check(len(entries) == 199, f"expected 199 entries, built {len(entries)}")

    undated = set(rng.sample([e["id"] for e in entries if e["id"].startswith("base_")], 4))
    epoch = date(2015, 1, 1)
    for e in entries:
        e["date"] = (
            None
            if e["id"] in undated
            else epoch + timedelta(days=rng.randrange(3200))
        )

    rng.shuffle(entries)
    samples = [
        CodeSample(
            id=e["id"],
            code=e["code"],
            label=e["label"],
            report_date=e["date"],
        )
        for e in entries
    ]
    dataset = Dataset("audit-fixture", samples)

    # ground-truth self-checks; any failure here is a generator bug
    by_id = {e["id"]: e for e in entries}
    for e in entries:
        got = list(tokenize(e["code"]).texts)
        _check(got == e["tokens"], f"render round-trip failed for {e['id']}")
    expected_cls = {e["id"]: CompletenessClass.COMPLETE for e in entries}
    for cls in _PLANT_CLASSES:
        for i in range(5):
            expected_cls[f"plant_{cls.name.lower()}_{i}"] = cls
    for sid, cls in expected_cls.items():
        got_cls = classify_completeness(tokenize(by_id[sid]["code"]))
        _check(got_cls is cls, f"{sid} classified {got_cls}, planted {cls}")
    for ci, size in enumerate((3, 3, 4)):
        members = [f"dup{ci}_{mi}" for mi in range(size)]
        sks = [sketch(tokenize(by_id[m]["code"])) for m in members]
        for x in range(len(sks)):
            for y in range(x + 1, len(sks)):
                _check(
                    is_type3_pair(sks[x], sks[y]),
                    f"cluster {ci} members {x},{y} not near-miss similar",
                )

    dated = sorted(
        (e for e in entries if e["date"] is not None),
        key=lambda e: (e["date"], e["id"]),
    )
    half = (len(dated) + 1) // 2
    older_tokens: Counter = Counter()
    newer_tokens: Counter = Counter()
    for e in dated[:half]:
        older_tokens.update(e["tokens"])
    for e in dated[half:]:
        newer_tokens.update(e["tokens"])

    breakdown = {c: 0 for c in CompletenessClass}
    for cls in expected_cls.values():
        breakdown[cls] += 1

    expected = {
        "size": 199,
        "uniqueness": (189, 199),
        "duplicate_count": 10,
        "cluster_count": 3,
        "cluster_member_ids": tuple(sorted(cluster_member_ids)),
        "consistency": (195, 199),
        "inconsistent_ids": tuple(sorted(inconsistent_ids)),
        "completeness": (174, 199),
        "breakdown": breakdown,
        "older_tokens": older_tokens,
        "newer_tokens": newer_tokens,
        "older_count": half,
        "newer_count": len(dated) - half,
        "undated_count": 4,
    }
    return dataset, expected


def random_corpus(seed: int, n_samples: int, name: Optional[str] = None) -> Dataset:
    """Messy corpus for oracle comparison: shared names, duplicates,
    unbounded tweaks, fragments, and the occasional empty sample.

    Nothing about its clone structure is promised; it exists so exhaustive
    reference computations can be compared against the optimized path.
    """
    rng = random.Random(seed)
    shared_tags = [f"s{i}" for i in range(4)]
    pool: list[list[str]] = []
    samples: list[CodeSample] = []
    epoch = date(2016, 6, 1)
    for i in range(n_samples):
        r = rng.random()
        if pool and r < 0.12:
            tokens = list(rng.choice(pool))
        elif pool and r < 0.30:
            donor = rng.choice(pool)
            tokens = bounded_substitution(rng, donor, f"w{i}")
            if rng.random() < 0.5 and len(tokens) > 4:
                # unbounded extra damage: delete or duplicate a token run
                cut = rng.randrange(1, min(6, len(tokens) - 2))
                at = rng.randrange(0, len(tokens) - cut)
                if rng.random() < 0.5:
                    tokens = tokens[:at] + tokens[at + cut:]
                else:
                    tokens = tokens[:at] + tokens[at:at + cut] + tokens[at:]
        elif r < 0.34:
            tokens = ["return", rng.choice(_COMMON_NUMBERS), ";"]
        elif r < 0.36:
            tokens = []
        else:
            tag = rng.choice(shared_tags) if rng.random() < 0.5 else f"u{i}"
            tokens = make_function_tokens(rng, tag, n_statements=rng.randrange(1, 5))
        if tokens and rng.random() < 0.08:
            tokens = tokens[: rng.randrange(2, len(tokens) + 1)]
        if tokens:
            pool.append(tokens)
        samples.append(
            CodeSample(
                id=f"r{i:04d}",
                code=render_tokens(tokens, rng=rng),
                label=rng.choice(_LABELS),
                report_date=(
                    epoch + timedelta(days=rng.randrange(2000))
                    if rng.random() < 0.7
                    else None
                ),
            )
        )
    return Dataset(name or f"random-{seed}", samples)


def scale_corpus(
    seed: int,
    n_uniques: int = 4000,
    variants_per_unique: int = 10,
    copies_per_variant: int = 5,
) -> Dataset:
    """Large corpus of known shape: per distinct function, a family of
    single-slot variants, each variant repeated verbatim several times.

    Families use disjoint name suffixes, so the expected cluster count is
    exactly ``n_uniques`` (one same-label cluster per family) with every
    family member in it.
    """
    rng = random.Random(seed)
    samples: list[CodeSample] = []
    epoch = date(2017, 1, 1)
    serial = 1000000  # magic literals drawn from a disjoint global range
    for u in range(n_uniques):
        tag = f"g{u}"
        base, vars_ = _build_function(rng, tag, n_statements=3, rich=True)
        label = rng.choice(_LABELS)
        insert_at = len(base) - 4
        for v in range(variants_per_unique):
            serial += 1
            stmt = [vars_[0], "=", vars_[0], "^", str(serial), ";"]
            tokens = base[:insert_at] + stmt + base[insert_at:]
            for c in range(copies_per_variant):
                samples.append(
                    CodeSample(
                        id=f"s{u}_{v}_{c}",
                        code=render_tokens(tokens, rng=rng),
                        label=label,
                        report_date=epoch + timedelta(days=rng.randrange(1500)),
                    )
                )
    return Dataset(f"scale-{seed}", samples)
