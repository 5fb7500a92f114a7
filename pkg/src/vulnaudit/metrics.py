"""The five attribute measurements and the audit report that bundles them.

Accuracy needs human review input (see the review module); the other four
are computed directly from the corpus: near-miss clustering for uniqueness,
exact clone clustering for consistency, token-stream classification for
completeness, and a divergence between the older and newer half of the
corpus for currentness.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .clones import CloneCluster, CloneConfig, CloneTier, cluster
from .corpus import (
    Attribute,
    AttributeScore,
    Dataset,
    InsufficientDataError,
    Label,
    ScoreBasis,
    ScoreUndefinedError,
    attribute_score,
)
from .lexer import CompletenessClass, classify_completeness, tokenize
from .review import ReviewSheet, accuracy_score


class UniquenessConvention:
    """How clustered samples count against uniqueness.

    MEMBER (default): every member of a near-miss cluster is non-unique.
    REPRESENTATIVE: one member per cluster still counts as unique, i.e.
    only the redundant copies are penalised.
    """

    MEMBER = "member"
    REPRESENTATIVE = "representative"

    CHOICES = (MEMBER, REPRESENTATIVE)


def uniqueness(
    dataset: Dataset,
    config: Optional[CloneConfig] = None,
    convention: str = UniquenessConvention.MEMBER,
) -> AttributeScore:
    """Fraction of samples not caught in a same-label near-miss cluster."""
    score, _ = _uniqueness_parts(dataset, config, convention)
    return score


def _uniqueness_parts(
    dataset: Dataset,
    config: Optional[CloneConfig],
    convention: str,
) -> tuple[AttributeScore, list[CloneCluster]]:
    if convention not in UniquenessConvention.CHOICES:
        raise ValueError(f"unknown uniqueness convention {convention!r}")
    clusters = cluster(dataset, CloneTier.TYPE3, same_label_only=True, config=config)
    non_unique: set[str] = set()
    for c in clusters:
        members = c.member_ids
        if convention == UniquenessConvention.REPRESENTATIVE:
            members = members[1:]
        non_unique.update(members)
    flags = [s.id not in non_unique for s in dataset]
    return attribute_score(Attribute.UNIQUENESS, flags), clusters


def consistency(dataset: Dataset) -> AttributeScore:
    """Fraction of samples outside any exact-clone cluster with mixed labels."""
    score, _ = _consistency_parts(dataset)
    return score


def _consistency_parts(
    dataset: Dataset,
) -> tuple[AttributeScore, list[CloneCluster]]:
    clusters = cluster(dataset, CloneTier.TYPE1, same_label_only=False)
    inconsistent = [c for c in clusters if len(c.label_profile) > 1]
    affected: set[str] = set()
    for c in inconsistent:
        affected.update(c.member_ids)
    flags = [s.id not in affected for s in dataset]
    return attribute_score(Attribute.CONSISTENCY, flags), inconsistent


def completeness(
    dataset: Dataset,
) -> tuple[AttributeScore, dict[CompletenessClass, int]]:
    """Fraction of samples whose token stream classifies as a whole function."""
    if len(dataset) == 0:
        raise ScoreUndefinedError("completeness: no samples to score")
    breakdown = {c: 0 for c in CompletenessClass}
    flags = []
    for s in dataset:
        cls = classify_completeness(tokenize(s.code))
        breakdown[cls] += 1
        flags.append(cls is CompletenessClass.COMPLETE)
    return attribute_score(Attribute.COMPLETENESS, flags), breakdown


def jensen_shannon_divergence(
    p: Mapping[str, float], q: Mapping[str, float]
) -> float:
    """Base-2 Jensen-Shannon divergence between two distributions.

    Zero-probability terms contribute nothing.  The result is clamped to
    [0, 1] to absorb last-ulp float noise on normalised inputs; the clamp
    never moves a value by more than that.  Exactly symmetric: each token's
    two contributions are added in one expression, so swapping p and q
    reproduces the identical float.
    """
    total = 0.0
    for t in sorted(p.keys() | q.keys()):
        pi = p.get(t, 0.0)
        qi = q.get(t, 0.0)
        m = 0.5 * (pi + qi)
        term = 0.0
        if pi > 0.0:
            term += 0.5 * pi * math.log2(pi / m)
        if qi > 0.0:
            term += 0.5 * qi * math.log2(qi / m)
        total += term
    if total < 0.0:
        return 0.0
    if total > 1.0:
        return 1.0
    return total


def token_distribution(samples: Iterable) -> dict[str, float]:
    """Relative frequency of every token text across the samples' code."""
    counts: Counter = Counter()
    for s in samples:
        counts.update(tokenize(s.code).texts)
    total = sum(counts.values())
    if total == 0:
        raise InsufficientDataError("token distribution over zero tokens")
    return {t: counts[t] / total for t in sorted(counts)}


@dataclass(frozen=True)
class CurrentnessDetail:
    divergence: float
    older_count: int
    newer_count: int
    undated_count: int


def date_halves(dataset: Dataset) -> tuple[list, list]:
    """Dated samples split into the older and newer half.

    Sort key is (report_date, id); with an odd count the older half takes
    the extra sample.
    """
    dated = [s for s in dataset if s.report_date is not None]
    dated.sort(key=lambda s: (s.report_date, s.id))
    half = (len(dated) + 1) // 2
    return dated[:half], dated[half:]


def currentness(dataset: Dataset) -> tuple[AttributeScore, CurrentnessDetail]:
    """One minus the divergence between older-half and newer-half token bags.

    Needs at least two dated samples; raises InsufficientDataError below
    that (the halves would be degenerate).
    """
    older, newer = date_halves(dataset)
    n_dated = len(older) + len(newer)
    if n_dated < 2:
        raise InsufficientDataError(
            f"currentness needs >= 2 dated samples, found {n_dated}"
        )
    divergence = jensen_shannon_divergence(
        token_distribution(older), token_distribution(newer)
    )
    score = AttributeScore(
        attribute=Attribute.CURRENTNESS,
        value=1.0 - divergence,
        satisfied_count=0,
        total_count=0,
        basis=ScoreBasis.DISTRIBUTIONAL,
    )
    detail = CurrentnessDetail(
        divergence=divergence,
        older_count=len(older),
        newer_count=len(newer),
        undated_count=len(dataset) - n_dated,
    )
    return score, detail


@dataclass(frozen=True)
class QualityReport:
    """All computable attribute scores for one dataset, plus their context.

    ``accuracy`` is present only when a fully adjudicated review sheet was
    supplied; ``currentness`` only when the dataset has enough dated
    samples.  Every id listed exists in the audited dataset and the
    completeness breakdown sums to its size.
    """

    dataset_name: str
    size: int
    accuracy: Optional[AttributeScore]
    uniqueness: AttributeScore
    consistency: AttributeScore
    completeness: AttributeScore
    currentness: Optional[AttributeScore]
    completeness_breakdown: Mapping[CompletenessClass, int]
    uniqueness_cluster_count: int
    uniqueness_duplicate_count: int
    uniqueness_convention: str
    inconsistent_cluster_count: int
    inconsistent_ids: tuple[str, ...]
    currentness_detail: Optional[CurrentnessDetail]

    def scores(self) -> dict[Attribute, Optional[AttributeScore]]:
        return {
            Attribute.ACCURACY: self.accuracy,
            Attribute.UNIQUENESS: self.uniqueness,
            Attribute.CONSISTENCY: self.consistency,
            Attribute.COMPLETENESS: self.completeness,
            Attribute.CURRENTNESS: self.currentness,
        }

    def to_dict(self) -> dict:
        def score_dict(s: Optional[AttributeScore]):
            if s is None:
                return None
            return {
                "value": s.value,
                "satisfied": s.satisfied_count,
                "total": s.total_count,
                "basis": s.basis.value,
            }

        return {
            "dataset": self.dataset_name,
            "size": self.size,
            "scores": {
                a.value: score_dict(s) for a, s in self.scores().items()
            },
            "completeness_breakdown": {
                c.value: self.completeness_breakdown[c] for c in CompletenessClass
            },
            "uniqueness_detail": {
                "cluster_count": self.uniqueness_cluster_count,
                "duplicate_count": self.uniqueness_duplicate_count,
                "convention": self.uniqueness_convention,
            },
            "consistency_detail": {
                "inconsistent_cluster_count": self.inconsistent_cluster_count,
                "affected_ids": list(self.inconsistent_ids),
            },
            "currentness_detail": (
                None
                if self.currentness_detail is None
                else {
                    "divergence": self.currentness_detail.divergence,
                    "older_count": self.currentness_detail.older_count,
                    "newer_count": self.currentness_detail.newer_count,
                    "undated_count": self.currentness_detail.undated_count,
                }
            ),
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    def summary_lines(self) -> list[str]:
        lines = []
        for a, s in self.scores().items():
            if s is None:
                lines.append(f"{a.value:<12} -")
            elif s.basis is ScoreBasis.DISTRIBUTIONAL:
                lines.append(f"{a.value:<12} {s.value:.3f}")
            else:
                lines.append(
                    f"{a.value:<12} {s.value:.3f} ({s.satisfied_count}/{s.total_count})"
                )
        return lines


def audit(
    dataset: Dataset,
    config: Optional[CloneConfig] = None,
    review: Optional[ReviewSheet] = None,
    convention: str = UniquenessConvention.MEMBER,
) -> QualityReport:
    """Measure every computable attribute and assemble the report.

    Currentness is omitted (not an error) when fewer than two samples are
    dated, mirroring how undatable corpora are reported.  Accuracy is
    computed exactly when a review sheet is passed; the sheet must be fully
    adjudicated.
    """
    if len(dataset) == 0:
        raise ScoreUndefinedError("audit of an empty dataset")
    config = config or CloneConfig()

    uniq_score, uniq_clusters = _uniqueness_parts(
        dataset, config, convention
    )
    duplicate_count = (
        uniq_score.total_count - uniq_score.satisfied_count
    )
    cons_score, inconsistent = _consistency_parts(dataset)
    affected = sorted({i for c in inconsistent for i in c.member_ids})
    comp_score, breakdown = completeness(dataset)

    try:
        curr_score, curr_detail = currentness(dataset)
    except InsufficientDataError:
        curr_score, curr_detail = None, None

    acc_score = accuracy_score(review) if review is not None else None

    return QualityReport(
        dataset_name=dataset.name,
        size=len(dataset),
        accuracy=acc_score,
        uniqueness=uniq_score,
        consistency=cons_score,
        completeness=comp_score,
        currentness=curr_score,
        completeness_breakdown=breakdown,
        uniqueness_cluster_count=len(uniq_clusters),
        uniqueness_duplicate_count=duplicate_count,
        uniqueness_convention=convention,
        inconsistent_cluster_count=len(inconsistent),
        inconsistent_ids=tuple(affected),
        currentness_detail=curr_detail,
    )
