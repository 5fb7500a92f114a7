"""Backend equivalence: the compiled extension and the pure-Python twin
must be indistinguishable on every input, including garbage."""

import random

import numpy as np
import pytest

from vulnaudit import _kernels_py
from vulnaudit import kernels
from vulnaudit.synth import random_corpus, render_tokens

compiled = pytest.importorskip(
    "vulnaudit._kernels", reason="compiled extension not built"
)


ADVERSARIAL = [
    "",
    "\n\n\n",
    "\\",
    "x\\",
    '"',
    "'",
    "'a",
    '"abc\\',
    "/*",
    "/* almost */ /*",
    "//",
    "// no newline",
    "#",
    "#define X \\",
    "#define X \\\n",
    "# \t weird   directive  \t",
    "a#b\n#c",
    "0x", "0x1g", "1..2", "1e", "1e+", "3.14.15",
    "a\r\nb\rc",
    "'\\''",
    '"\\"\\\\"',
    "~!@#$%^&*()_+`-=[]{}|;:,.<>?",
    "\x00\x01\x7f",
    "é ünïcode 变量",
    "int/**/x/*;*/=1;",
    "L'a' u8\"s\"",
    "a/ /b",
    "...." , "<<<=>>>", "->*", "##__VA_ARGS__",
]


def assert_same_scan(code):
    got_c = compiled.scan(code)
    got_p = _kernels_py.scan(code)
    assert list(got_c[0]) == list(got_p[0]), repr(code)
    assert list(got_c[1]) == list(got_p[1]), repr(code)
    assert list(got_c[2]) == list(got_p[2]), repr(code)
    assert got_c[3] == got_p[3], repr(code)


class TestScanEquivalence:
    def test_adversarial_inputs(self):
        for code in ADVERSARIAL:
            assert_same_scan(code)

    def test_rendered_corpora(self):
        for seed in range(3):
            ds = random_corpus(seed=seed, n_samples=60)
            for s in ds:
                assert_same_scan(s.code)

    def test_truncation_fuzz(self):
        # chopping at arbitrary offsets lands inside every construct kind
        rng = random.Random(7)
        ds = random_corpus(seed=11, n_samples=20)
        for s in ds:
            for _ in range(10):
                cut = rng.randrange(len(s.code) + 1) if s.code else 0
                assert_same_scan(s.code[:cut])

    def test_random_token_soup(self):
        rng = random.Random(3)
        atoms = ["if", "x1", "0x1F", '"s"', "'c'", "{", "}", "(", ")", ";",
                 "+", "<<=", "#define A 1", "##"]
        for _ in range(50):
            toks = [rng.choice(atoms) for _ in range(rng.randrange(1, 25))]
            try:
                code = render_tokens(toks, rng=rng)
            except ValueError:
                continue
            assert_same_scan(code)

    def test_backend_label(self):
        assert kernels.BACKEND in ("compiled", "pure")


def pack(bags, sets_):
    """CSR-pack parallel multiset/set sketches the way the clone layer does."""
    tok_ids, tok_counts, tok_indptr, totals = [], [], [0], []
    idl_ids, idl_indptr = [], [0]
    for bag, st in zip(bags, sets_):
        for tid in sorted(bag):
            tok_ids.append(tid)
            tok_counts.append(bag[tid])
        tok_indptr.append(len(tok_ids))
        totals.append(sum(bag.values()))
        idl_ids.extend(sorted(st))
        idl_indptr.append(len(idl_ids))
    i64 = lambda xs: np.asarray(xs, dtype=np.int64)
    return (i64(tok_ids), i64(tok_counts), i64(tok_indptr), i64(totals),
            i64(idl_ids), i64(idl_indptr))


def naive_mask(pairs, bags, sets_, mt, st):
    out = []
    for a, b in pairs:
        sa, sb = sets_[a], sets_[b]
        if not sa and not sb:
            set_ok = True
        else:
            set_ok = len(sa & sb) / len(sa | sb) >= st
        ba, bb = bags[a], bags[b]
        smin = sum(min(ba[t], bb.get(t, 0)) for t in ba)
        smax = sum(ba.values()) + sum(bb.values()) - smin
        multi_ok = True if smax == 0 else smin / smax >= mt
        out.append(1 if set_ok and multi_ok else 0)
    return out


class TestVerifyPairs:
    def random_sketches(self, rng, n):
        bags, sets_ = [], []
        for _ in range(n):
            bag = {}
            for _ in range(rng.randrange(0, 12)):
                bag[rng.randrange(0, 9)] = rng.randrange(1, 5)
            bags.append(bag)
            sets_.append({rng.randrange(0, 6) for _ in range(rng.randrange(0, 5))})
        return bags, sets_

    def test_backends_agree_on_random_batches(self):
        rng = random.Random(42)
        for trial in range(20):
            n = rng.randrange(2, 15)
            bags, sets_ = self.random_sketches(rng, n)
            packed = pack(bags, sets_)
            pairs = [(rng.randrange(n), rng.randrange(n))
                     for _ in range(rng.randrange(1, 30))]
            pa = np.asarray([p[0] for p in pairs], dtype=np.int64)
            pb = np.asarray([p[1] for p in pairs], dtype=np.int64)
            for mt, st in ((0.8, 0.7), (0.5, 0.5), (1.0, 1.0), (0.0, 0.0)):
                got_c = compiled.verify_pairs(pa, pb, *packed, mt, st)
                got_p = _kernels_py.verify_pairs(pa, pb, *packed, mt, st)
                assert got_c.tolist() == got_p.tolist()
                assert got_p.tolist() == naive_mask(pairs, bags, sets_, mt, st)

    def test_exact_threshold_boundary(self):
        # intersection 4, union 5: exactly 0.8, so >= 0.8 passes
        bags = [{0: 4, 1: 1}, {0: 4}]
        sets_ = [{0}, {0}]
        packed = pack(bags, sets_)
        pa = np.asarray([0], dtype=np.int64)
        pb = np.asarray([1], dtype=np.int64)
        for impl in (compiled, _kernels_py):
            assert impl.verify_pairs(pa, pb, *packed, 0.8, 0.7).tolist() == [1]
            assert impl.verify_pairs(pa, pb, *packed, 0.81, 0.7).tolist() == [0]

    def test_empty_sketch_conventions(self):
        # two empty samples: both jaccards default to satisfied
        bags = [{}, {}, {0: 1}]
        sets_ = [set(), set(), {0}]
        packed = pack(bags, sets_)
        pa = np.asarray([0, 0], dtype=np.int64)
        pb = np.asarray([1, 2], dtype=np.int64)
        for impl in (compiled, _kernels_py):
            assert impl.verify_pairs(pa, pb, *packed, 0.8, 0.7).tolist() == [1, 0]

    def test_self_pair_is_always_similar(self):
        bags = [{3: 2, 5: 1}]
        sets_ = [{1, 2}]
        packed = pack(bags, sets_)
        one = np.asarray([0], dtype=np.int64)
        for impl in (compiled, _kernels_py):
            assert impl.verify_pairs(one, one, *packed, 1.0, 1.0).tolist() == [1]
