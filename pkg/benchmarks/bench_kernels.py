"""Compare the compiled scanning/verification kernels with the pure twin.

Runs both backends over the same synthetic corpus, checks they produce
identical output, and reports throughput.  Usage:

    python3 benchmarks/bench_kernels.py [--samples N] [--pairs M] [--seed S]
"""

import argparse
import random
import time

import numpy as np

from vulnaudit import _kernels_py, _tokendefs
from vulnaudit.synth import random_corpus

_IDLIT = (
    _tokendefs.IDENTIFIER,
    _tokendefs.NUMBER_LITERAL,
    _tokendefs.STRING_LITERAL,
    _tokendefs.CHAR_LITERAL,
)

try:
    from vulnaudit import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(runs, fn):
    best = float("inf")
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_scan(codes):
    total_bytes = sum(len(c) for c in codes)

    def run(scan):
        def go():
            for c in codes:
                scan(c)
        return go

    results = {}
    backends = [("pure", _kernels_py.scan)]
    if _compiled is not None:
        backends.insert(0, ("compiled", _compiled.scan))
        for c in codes[:200]:
            got_c = _compiled.scan(c)
            got_p = _kernels_py.scan(c)
            assert (list(got_c[0]), list(got_c[1]), list(got_c[2]), got_c[3]) == (
                list(got_p[0]), list(got_p[1]), list(got_p[2]), got_p[3]
            ), "backend outputs diverge"
    for name, scan in backends:
        secs = best_of(3, run(scan))
        results[name] = secs
        print(f"scan   {name:>8}: {secs * 1e3:8.1f} ms"
              f"  ({total_bytes / secs / 1e6:7.1f} MB/s)")
    return results


def pack_sketches(codes, rng):
    vocab = {}

    def tid(text):
        return vocab.setdefault(text, len(vocab))

    tok_ids, tok_counts, tok_indptr, totals = [], [], [0], []
    idl_ids, idl_indptr = [], [0]
    for c in codes:
        kinds, texts, _, _ = _kernels_py.scan(c)
        bag = {}
        for t in texts:
            bag[tid(t)] = bag.get(tid(t), 0) + 1
        for t in sorted(bag):
            tok_ids.append(t)
            tok_counts.append(bag[t])
        tok_indptr.append(len(tok_ids))
        totals.append(len(texts))
        idl = sorted({tid(t) for k, t in zip(kinds, texts) if k in _IDLIT})
        idl_ids.extend(idl)
        idl_indptr.append(len(idl_ids))
    i64 = lambda xs: np.asarray(xs, dtype=np.int64)
    return (i64(tok_ids), i64(tok_counts), i64(tok_indptr), i64(totals),
            i64(idl_ids), i64(idl_indptr))


def bench_verify(codes, n_pairs, rng):
    packed = pack_sketches(codes, rng)
    n = len(codes)
    pa = np.asarray([rng.randrange(n) for _ in range(n_pairs)], dtype=np.int64)
    pb = np.asarray([rng.randrange(n) for _ in range(n_pairs)], dtype=np.int64)

    backends = [("pure", _kernels_py.verify_pairs)]
    if _compiled is not None:
        backends.insert(0, ("compiled", _compiled.verify_pairs))
        got_c = _compiled.verify_pairs(pa, pb, *packed, 0.8, 0.7)
        got_p = _kernels_py.verify_pairs(pa, pb, *packed, 0.8, 0.7)
        assert got_c.tolist() == got_p.tolist(), "backend masks diverge"
    for name, verify in backends:
        secs = best_of(3, lambda v=verify: v(pa, pb, *packed, 0.8, 0.7))
        print(f"verify {name:>8}: {secs * 1e3:8.1f} ms"
              f"  ({n_pairs / secs / 1e6:7.2f} Mpairs/s)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--pairs", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    ds = random_corpus(seed=args.seed, n_samples=args.samples)
    codes = [s.code for s in ds]
    print(f"corpus: {len(codes)} functions,"
          f" {sum(len(c) for c in codes) / 1e6:.2f} MB")
    if _compiled is None:
        print("compiled extension not available; pure backend only")

    scan_times = bench_scan(codes)
    bench_verify(codes, args.pairs, rng)
    if _compiled is not None:
        speedup = scan_times["pure"] / scan_times["compiled"]
        print(f"scan speedup: {speedup:.1f}x (outputs verified identical)")


if __name__ == "__main__":
    main()
