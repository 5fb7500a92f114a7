"""Dataset cleaning operations and train/validation/test split protocols.

Each cleaning operation is pure: it takes a dataset and returns a new
dataset plus removal records saying which ids were dropped and why, so a
pipeline can be audited after the fact.  Splits are value objects that can
be saved, reloaded, and shrunk as cleaning removes ids.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Iterable, Optional, Sequence

from .clones import CloneCluster, CloneConfig, CloneTier, cluster
from .corpus import Dataset, DatasetFormatError, InsufficientDataError, Label
from .lexer import CompletenessClass, classify_completeness, tokenize


class SplitProtocol(Enum):
    RANDOM = "random"
    TEMPORAL = "temporal"


class CleaningScope(Enum):
    ALL = "all"
    TEST_ONLY = "test_only"


@dataclass(frozen=True)
class RemovalRecord:
    sample_id: str
    reason: str


_TRAIN_FRACTION = 0.8
_VALIDATION_FRACTION = 0.1
_PARTITION_COUNT = 10
_TRAIN_PARTITIONS = 4
_VALIDATION_PARTITIONS = 1


@dataclass(frozen=True)
class SplitAssignment:
    """Disjoint id sets for the three roles, plus how they were drawn.

    ``partitions`` is populated only by the temporal protocol and keeps the
    chronological blocks the roles were assembled from.
    """

    protocol: SplitProtocol
    train: tuple[str, ...]
    validation: tuple[str, ...]
    test: tuple[str, ...]
    seed: Optional[int] = None
    partitions: Optional[tuple[tuple[str, ...], ...]] = None

    def __post_init__(self):
        roles = (self.train, self.validation, self.test)
        total = sum(len(r) for r in roles)
        combined = set().union(*map(set, roles))
        if len(combined) != total:
            raise ValueError("split roles must be disjoint and duplicate-free")

    def all_ids(self) -> frozenset[str]:
        return frozenset(self.train) | frozenset(self.validation) | frozenset(self.test)

    def without(self, removed: Iterable[str]) -> "SplitAssignment":
        """Copy with the given ids dropped from every role and partition."""
        gone = set(removed)
        parts = self.partitions
        if parts is not None:
            parts = tuple(
                tuple(i for i in block if i not in gone) for block in parts
            )
        return SplitAssignment(
            protocol=self.protocol,
            train=tuple(i for i in self.train if i not in gone),
            validation=tuple(i for i in self.validation if i not in gone),
            test=tuple(i for i in self.test if i not in gone),
            seed=self.seed,
            partitions=parts,
        )


def random_split(dataset: Dataset, seed: int) -> SplitAssignment:
    """Seeded 80/10/10 shuffle split; the remainder lands in the test role.

    Role tuples are stored sorted: membership is the contract, and sorted
    storage keeps the serialized form byte-stable.
    """
    n = len(dataset)
    if n < 10:
        raise InsufficientDataError(
            f"random split needs at least 10 samples, got {n}"
        )
    ids = list(dataset.ids())
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_train = int(_TRAIN_FRACTION * n + 1e-9)
    n_val = int(_VALIDATION_FRACTION * n + 1e-9)
    return SplitAssignment(
        protocol=SplitProtocol.RANDOM,
        train=tuple(sorted(ids[:n_train])),
        validation=tuple(sorted(ids[n_train : n_train + n_val])),
        test=tuple(sorted(ids[n_train + n_val :])),
        seed=seed,
    )


def temporal_split(dataset: Dataset) -> SplitAssignment:
    """Chronological ten-block split: 4 train, 1 validation, 5 test.

    Samples are ordered by (report date, id) and cut into ten contiguous
    blocks; when the count is not divisible by ten the earliest blocks take
    the extra sample each.  Undated samples cannot be placed on the
    timeline and are left out of the split entirely.
    """
    dated = [s for s in dataset if s.report_date is not None]
    n = len(dated)
    if n < _PARTITION_COUNT:
        raise InsufficientDataError(
            f"temporal split needs at least {_PARTITION_COUNT} dated samples, got {n}"
        )
    dated.sort(key=lambda s: (s.report_date, s.id))
    base, extra = divmod(n, _PARTITION_COUNT)
    blocks: list[tuple[str, ...]] = []
    pos = 0
    for i in range(_PARTITION_COUNT):
        size = base + (1 if i < extra else 0)
        blocks.append(tuple(s.id for s in dated[pos : pos + size]))
        pos += size
    t_end = _TRAIN_PARTITIONS
    v_end = _TRAIN_PARTITIONS + _VALIDATION_PARTITIONS
    flat = lambda bs: tuple(i for b in bs for i in b)
    return SplitAssignment(
        protocol=SplitProtocol.TEMPORAL,
        train=flat(blocks[:t_end]),
        validation=flat(blocks[t_end:v_end]),
        test=flat(blocks[v_end:]),
        partitions=tuple(blocks),
    )


def save_split(split: SplitAssignment, path) -> None:
    doc = {
        "protocol": split.protocol.value,
        "seed": split.seed,
        "train": list(split.train),
        "validation": list(split.validation),
        "test": list(split.test),
        "partitions": None
        if split.partitions is None
        else [list(b) for b in split.partitions],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def load_split(path) -> SplitAssignment:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"split file is not valid JSON: {exc}") from exc
    try:
        parts = doc.get("partitions")
        return SplitAssignment(
            protocol=SplitProtocol(doc["protocol"]),
            train=tuple(doc["train"]),
            validation=tuple(doc["validation"]),
            test=tuple(doc["test"]),
            seed=doc.get("seed"),
            partitions=None if parts is None else tuple(tuple(b) for b in parts),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"malformed split file: {exc}") from exc


def remove_cross_set_duplicates(
    split: SplitAssignment,
    clusters: Sequence[CloneCluster],
) -> tuple[SplitAssignment, list[RemovalRecord]]:
    """Drop test ids that share a clone cluster with any train/validation id.

    Only meaningful for the random protocol; a temporal split keeps its
    leakage story in the timeline and is rejected here.
    """
    if split.protocol is SplitProtocol.TEMPORAL:
        raise ValueError("cross-set duplicate removal applies to random splits only")
    fit_ids = set(split.train) | set(split.validation)
    tainted: set[str] = set()
    for c in clusters:
        members = set(c.member_ids)
        if members & fit_ids:
            tainted |= members
    removed = sorted(i for i in split.test if i in tainted)
    records = [RemovalRecord(i, "cross_set_duplicate") for i in removed]
    return split.without(removed), records


def enforce_consistency(
    dataset: Dataset,
    scope: CleaningScope,
    split: Optional[SplitAssignment] = None,
    config: Optional[CloneConfig] = None,
) -> tuple[Dataset, list[RemovalRecord]]:
    """Resolve label conflicts among identical functions.

    Clusters exact duplicates across both labels; in every mixed-label
    cluster the non-vulnerable copies are removed, on the reading that the
    vulnerable label carries the evidence (a fix commit) while the
    non-vulnerable copy is the same code seen before the report.  With
    TEST_ONLY scope only ids in the split's test role are dropped.
    """
    if scope is CleaningScope.TEST_ONLY and split is None:
        raise ValueError("TEST_ONLY scope requires a split")
    clusters = cluster(dataset, CloneTier.TYPE1, same_label_only=False, config=config)
    test_ids = set(split.test) if scope is CleaningScope.TEST_ONLY else None
    doomed: set[str] = set()
    for c in clusters:
        if len(c.label_profile) < 2:
            continue
        for sid in c.member_ids:
            if dataset.get(sid).label is Label.NON_VULNERABLE:
                if test_ids is None or sid in test_ids:
                    doomed.add(sid)
    records = [RemovalRecord(i, "inconsistent_cluster") for i in sorted(doomed)]
    keep = [i for i in dataset.ids() if i not in doomed]
    return dataset.subset(keep), records


def _age_key(dataset: Dataset):
    far_future = date.max

    def key(sample_id: str):
        d = dataset.get(sample_id).report_date
        return (far_future if d is None else d, sample_id)

    return key


def deduplicate(
    dataset: Dataset,
    tier: CloneTier = CloneTier.TYPE3,
    same_label_only: bool = True,
    config: Optional[CloneConfig] = None,
) -> tuple[Dataset, list[RemovalRecord]]:
    """Collapse each clone cluster to its oldest member.

    The survivor is the member with the earliest report date (undated
    members sort last, ties break on id), so the copy closest to the
    original report is the one kept.
    """
    clusters = cluster(dataset, tier, same_label_only=same_label_only, config=config)
    key = _age_key(dataset)
    doomed: set[str] = set()
    for c in clusters:
        keeper = min(c.member_ids, key=key)
        doomed.update(i for i in c.member_ids if i != keeper)
    records = [RemovalRecord(i, "duplicate") for i in sorted(doomed)]
    keep = [i for i in dataset.ids() if i not in doomed]
    return dataset.subset(keep), records


def drop_incomplete(dataset: Dataset) -> tuple[Dataset, list[RemovalRecord]]:
    """Remove every sample whose code is not a single whole function."""
    doomed: list[str] = []
    for s in dataset:
        cls = classify_completeness(tokenize(s.code))
        if cls is not CompletenessClass.COMPLETE:
            doomed.append(s.id)
    records = [RemovalRecord(i, "incomplete") for i in sorted(doomed)]
    gone = set(doomed)
    keep = [i for i in dataset.ids() if i not in gone]
    return dataset.subset(keep), records


def save_removal_log(records: Sequence[RemovalRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({"id": r.sample_id, "reason": r.reason}))
            fh.write("\n")


def load_removal_log(path) -> list[RemovalRecord]:
    out: list[RemovalRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                out.append(RemovalRecord(str(doc["id"]), str(doc["reason"])))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DatasetFormatError(
                    f"malformed removal log entry: {exc}", line=lineno
                ) from exc
    return out
