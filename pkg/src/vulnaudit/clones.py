"""Exact and near-miss clone detection over token streams.

Three tiers: identical token sequences (tier 1), identical sequences after
abstracting identifiers and literals (tier 2, fingerprint only), and the
near-miss tier 3 defined by two Jaccard thresholds over a sample's token
bag.  Clustering is the transitive closure of the pairwise relation.

The tier-3 production path stays exact while scaling: samples with equal
token sequences are collapsed into one node (their pairwise relations are
identical by construction), candidate pairs between nodes come from prefix
filtering over the identifier/literal sets under a rarest-first global
token order (a pair meeting the set threshold must share a prefix token),
and only candidates are scored.  No qualifying pair can be missed, which
brute-force comparison over small corpora verifies in the test suite.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional

import numpy as np

from . import _tokendefs as _td
from . import kernels
from .corpus import Dataset, Label
from .lexer import TokenStream, tokenize


class CloneTier(Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    TYPE3 = "type3"


@dataclass(frozen=True)
class Fingerprint:
    tier: CloneTier
    digest: str


@dataclass(frozen=True)
class CloneConfig:
    """Thresholds for the near-miss tier.

    Defaults follow the detector configuration used throughout: token
    multiset Jaccard at 0.8, identifier/literal set Jaccard at 0.7, and a
    five-token floor below which a sample pairs with nothing.
    """

    multiset_threshold: float = 0.8
    set_threshold: float = 0.7
    min_tokens: int = 5

    def __post_init__(self) -> None:
        for name in ("multiset_threshold", "set_threshold"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v!r}")
        if self.min_tokens < 1:
            raise ValueError("min_tokens must be >= 1")


@dataclass(frozen=True, eq=True)
class CloneSketch:
    token_multiset: Mapping[str, int]
    idlit_set: frozenset[str]
    token_count: int


@dataclass(frozen=True)
class CloneCluster:
    tier: CloneTier
    member_ids: tuple[str, ...]  # sorted
    label_profile: Mapping[Label, int]


_IDLIT_KINDS = (
    _td.IDENTIFIER,
    _td.NUMBER_LITERAL,
    _td.STRING_LITERAL,
    _td.CHAR_LITERAL,
)

_ABSTRACTED = {
    _td.IDENTIFIER: "ID",
    _td.NUMBER_LITERAL: "LITN",
    _td.STRING_LITERAL: "LITS",
    _td.CHAR_LITERAL: "LITC",
}


def _digest(parts: Iterable[str]) -> str:
    # length-prefixed framing so no token boundary ambiguity exists, even
    # for token texts containing arbitrary bytes
    h = hashlib.blake2b(digest_size=16)
    for p in parts:
        enc = p.encode("utf-8")
        h.update(len(enc).to_bytes(4, "little"))
        h.update(enc)
    return h.hexdigest()


def type1_fingerprint(stream: TokenStream) -> Fingerprint:
    """Digest of the exact token texts: whitespace/comment-invariant identity."""
    return Fingerprint(CloneTier.TYPE1, _digest(stream.texts))


def type2_fingerprint(stream: TokenStream) -> Fingerprint:
    """Digest with identifiers and literals abstracted to placeholder classes."""
    abstracted = [
        _ABSTRACTED.get(k, t) for k, t in zip(stream.kinds, stream.texts)
    ]
    return Fingerprint(CloneTier.TYPE2, _digest(abstracted))


def sketch(stream: TokenStream) -> CloneSketch:
    """Order-free summary used by the near-miss tier."""
    return CloneSketch(
        token_multiset=dict(Counter(stream.texts)),
        idlit_set=frozenset(
            t for k, t in zip(stream.kinds, stream.texts) if k in _IDLIT_KINDS
        ),
        token_count=len(stream.texts),
    )


def multiset_jaccard(a: Mapping[str, int], b: Mapping[str, int]) -> float:
    """Sum-of-mins over sum-of-maxes; 1.0 when both bags are empty."""
    total_a = sum(a.values())
    total_b = sum(b.values())
    if total_a == 0 and total_b == 0:
        return 1.0
    shared = 0
    for t, c in a.items():
        cb = b.get(t, 0)
        shared += c if c < cb else cb
    return shared / (total_a + total_b - shared)


def set_jaccard(a: frozenset, b: frozenset) -> float:
    """Plain Jaccard; 1.0 when both sets are empty (no disagreement)."""
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def is_type3_pair(
    a: CloneSketch,
    b: CloneSketch,
    multiset_threshold: float = 0.8,
    set_threshold: float = 0.7,
) -> bool:
    """Near-miss test: both Jaccards must clear their thresholds.

    Callers are responsible for the token-count floor; this predicate only
    evaluates the two similarities.  Symmetric in its arguments.
    """
    for name, v in (("multiset_threshold", multiset_threshold), ("set_threshold", set_threshold)):
        if not 0.0 < v <= 1.0:
            raise ValueError(f"{name} must be in (0, 1], got {v!r}")
    if multiset_jaccard(a.token_multiset, b.token_multiset) < multiset_threshold:
        return False
    return set_jaccard(a.idlit_set, b.idlit_set) >= set_threshold


class _UnionFind:
    __slots__ = ("parent", "rank")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]  # path halving
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def _make_cluster(dataset: Dataset, tier: CloneTier, ids: Iterable[str]) -> CloneCluster:
    member_ids = tuple(sorted(ids))
    profile = Counter(dataset.get(i).label for i in member_ids)
    return CloneCluster(tier=tier, member_ids=member_ids, label_profile=dict(profile))


def cluster(
    dataset: Dataset,
    tier: CloneTier,
    same_label_only: bool,
    config: Optional[CloneConfig] = None,
) -> list[CloneCluster]:
    """All maximal clone clusters of size >= 2 at the given tier.

    Clusters partition their members (no id appears twice), member ids are
    sorted, and the cluster list is ordered by smallest member id.  With
    ``same_label_only`` the pairwise relation is restricted to samples
    sharing a label, so every cluster is single-label.  An empty dataset
    yields an empty list.
    """
    config = config or CloneConfig()
    if tier is CloneTier.TYPE1:
        return _cluster_type1(dataset, same_label_only)
    if tier is CloneTier.TYPE3:
        return _cluster_type3(dataset, same_label_only, config)
    raise ValueError("tier 2 is a fingerprint tier; cluster on TYPE1 or TYPE3")


def _cluster_type1(dataset: Dataset, same_label_only: bool) -> list[CloneCluster]:
    groups: dict[object, list[str]] = {}
    for s in dataset:
        stream = tokenize(s.code)
        dg = _digest(stream.texts)
        key = (dg, s.label) if same_label_only else dg
        groups.setdefault(key, []).append(s.id)
    clusters = [
        _make_cluster(dataset, CloneTier.TYPE1, ids)
        for ids in groups.values()
        if len(ids) >= 2
    ]
    clusters.sort(key=lambda c: c.member_ids[0])
    return clusters


def _required_overlap(size: int, threshold: float) -> int:
    # smallest integer overlap a qualifying pair must reach for this set
    # size; the epsilon keeps float noise from overshooting an exact bound
    return max(1, math.ceil(threshold * size - 1e-9))


def _cluster_type3(
    dataset: Dataset, same_label_only: bool, config: CloneConfig
) -> list[CloneCluster]:
    # 1. collapse samples with identical token sequences into groups
    groups: dict[object, list[str]] = {}
    group_sketch: dict[object, CloneSketch] = {}
    for s in dataset:
        stream = tokenize(s.code)
        if len(stream) < config.min_tokens:
            continue
        dg = _digest(stream.texts)
        key = (dg, s.label) if same_label_only else dg
        bucket = groups.get(key)
        if bucket is None:
            groups[key] = [s.id]
            group_sketch[key] = sketch(stream)
        else:
            bucket.append(s.id)

    keys = list(groups.keys())
    n = len(keys)
    if n == 0:
        return []
    sketches = [group_sketch[k] for k in keys]
    labels = [dataset.get(groups[k][0]).label for k in keys]

    # 2. global token order: ascending document frequency, ties by text,
    # over the groups' identifier/literal sets; non-idlit tokens follow
    df: Counter = Counter()
    for sk in sketches:
        df.update(sk.idlit_set)
    idlit_rank = {
        t: r for r, t in enumerate(sorted(df, key=lambda t: (df[t], t)))
    }
    extra = sorted(
        {t for sk in sketches for t in sk.token_multiset} - idlit_rank.keys()
    )
    rank = dict(idlit_rank)
    for t in extra:
        rank[t] = len(rank)

    idl_sorted = [sorted(idlit_rank[t] for t in sk.idlit_set) for sk in sketches]

    st = config.set_threshold
    mt = config.multiset_threshold
    counts = [sk.token_count for sk in sketches]

    # 3. candidate generation: prefix filtering plus cheap size screens
    pair_a: list[int] = []
    pair_b: list[int] = []
    index: dict[int, list[int]] = {}
    empties: list[int] = []
    for r in range(n):
        ids = idl_sorted[r]
        size = len(ids)
        if size == 0:
            empties.append(r)
            continue
        prefix = size - _required_overlap(size, st) + 1
        seen: set[int] = set()
        for t in ids[:prefix]:
            bucket = index.get(t)
            if bucket is not None:
                for j in bucket:
                    if j in seen:
                        continue
                    seen.add(j)
                    if same_label_only and labels[j] is not labels[r]:
                        continue
                    oj = len(idl_sorted[j])
                    lo, hi = (oj, size) if oj < size else (size, oj)
                    if lo < st * hi - 1e-9:
                        continue
                    ca, cb = counts[j], counts[r]
                    lo, hi = (ca, cb) if ca < cb else (cb, ca)
                    if lo < mt * hi - 1e-9:
                        continue
                    pair_a.append(j)
                    pair_b.append(r)
            index.setdefault(t, []).append(r)
    # samples with no identifiers or literals at all can only match each
    # other (their set Jaccard against anything non-empty is zero)
    for x in range(len(empties)):
        for y in range(x + 1, len(empties)):
            j, r = empties[x], empties[y]
            if same_label_only and labels[j] is not labels[r]:
                continue
            ca, cb = counts[j], counts[r]
            lo, hi = (ca, cb) if ca < cb else (cb, ca)
            if lo < mt * hi - 1e-9:
                continue
            pair_a.append(j)
            pair_b.append(r)

    # 4. exact verification of candidates, then transitive closure
    uf = _UnionFind(n)
    if pair_a:
        tok_ids_l: list[int] = []
        tok_counts_l: list[int] = []
        tok_indptr = [0]
        idl_ids_l: list[int] = []
        idl_indptr = [0]
        for r in range(n):
            items = sorted((rank[t], c) for t, c in sketches[r].token_multiset.items())
            tok_ids_l.extend(i for i, _ in items)
            tok_counts_l.extend(c for _, c in items)
            tok_indptr.append(len(tok_ids_l))
            idl_ids_l.extend(idl_sorted[r])
            idl_indptr.append(len(idl_ids_l))
        mask = kernels.verify_pairs(
            np.asarray(pair_a, dtype=np.int64),
            np.asarray(pair_b, dtype=np.int64),
            np.asarray(tok_ids_l, dtype=np.int64),
            np.asarray(tok_counts_l, dtype=np.int64),
            np.asarray(tok_indptr, dtype=np.int64),
            np.asarray(counts, dtype=np.int64),
            np.asarray(idl_ids_l, dtype=np.int64),
            np.asarray(idl_indptr, dtype=np.int64),
            mt,
            st,
        )
        for a, b, ok in zip(pair_a, pair_b, mask):
            if ok:
                uf.union(a, b)

    components: dict[int, list[int]] = {}
    for r in range(n):
        components.setdefault(uf.find(r), []).append(r)

    clusters = []
    for members in components.values():
        ids = [sid for r in members for sid in groups[keys[r]]]
        if len(ids) >= 2:
            clusters.append(_make_cluster(dataset, CloneTier.TYPE3, ids))
    clusters.sort(key=lambda c: c.member_ids[0])
    return clusters


def save_clusters(clusters: Iterable[CloneCluster], path) -> None:
    """Write clusters as line-delimited records {tier, members, label_profile}."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in clusters:
            record = {
                "tier": c.tier.value,
                "members": list(c.member_ids),
                "label_profile": {
                    label.value: c.label_profile[label]
                    for label in Label
                    if label in c.label_profile
                },
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_clusters(path) -> list[CloneCluster]:
    clusters = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            if not raw.strip():
                continue
            record = json.loads(raw)
            clusters.append(
                CloneCluster(
                    tier=CloneTier(record["tier"]),
                    member_ids=tuple(record["members"]),
                    label_profile={
                        Label(k): v for k, v in record["label_profile"].items()
                    },
                )
            )
    return clusters
