"""Manual label-review workflow: sampling, agreement, and the accuracy score.

The flow is: draw a statistically sized sample, have two raters mark each
sampled function's label as correct or incorrect, check inter-rater
agreement, adjudicate every disagreement, then score accuracy over the
adjudicated verdicts.  The sheet is a plain JSON document made to be
filled in by hand and re-imported.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .corpus import (
    Attribute,
    AttributeScore,
    AuditError,
    Dataset,
    DatasetFormatError,
    Label,
    ScoreBasis,
)
from .stats import normal_quantile


class Verdict(Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    UNSET = "unset"


class ReasonTag(Enum):
    IRRELEVANT = "irrelevant"
    CLEANUP = "cleanup"
    INACCURATE_FIX_ID = "inaccurate_fix_id"
    OTHER = "other"


class ReviewStateError(AuditError):
    """The sheet is not in the state an operation needs (e.g. unadjudicated)."""


def cochran_sample_size(
    confidence: float,
    margin: float,
    proportion: float = 0.5,
    population: int = 1,
) -> int:
    """Sample size for estimating a proportion, with finite-population correction.

    The base size is rounded up before the correction is applied, and the
    corrected size is rounded up again and capped at the population.
    Monotone: never increases with margin, never decreases with confidence
    or population.
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must be in (0, 1)")
    if not 0.0 < proportion < 1.0:
        raise ValueError("proportion must be in (0, 1)")
    if population < 1:
        raise ValueError("population must be >= 1")
    z = normal_quantile(0.5 + confidence / 2.0)
    n0 = z * z * proportion * (1.0 - proportion) / (margin * margin)
    n0_int = math.ceil(n0 - 1e-9)
    corrected = n0_int / (1.0 + (n0_int - 1.0) / population)
    return min(math.ceil(corrected - 1e-9), population)


@dataclass
class ReviewEntry:
    rater_a: Verdict = Verdict.UNSET
    rater_b: Verdict = Verdict.UNSET
    adjudicated: Optional[Verdict] = None
    reason: Optional[ReasonTag] = None


class ReviewSheet:
    """Sampled ids with per-rater verdicts and final adjudications.

    Entry order is the sampling order.  An adjudication may only be set
    once both rater verdicts exist; that invariant is enforced both by
    ``set_adjudication`` and on load.
    """

    def __init__(self, dataset_name: str, sampled_ids: list[str]):
        if len(set(sampled_ids)) != len(sampled_ids):
            raise ValueError("sampled ids must be distinct")
        self.dataset_name = dataset_name
        self.entries: dict[str, ReviewEntry] = {
            sid: ReviewEntry() for sid in sampled_ids
        }

    @property
    def sampled_ids(self) -> tuple[str, ...]:
        return tuple(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def _entry(self, sample_id: str) -> ReviewEntry:
        try:
            return self.entries[sample_id]
        except KeyError:
            raise KeyError(f"id {sample_id!r} is not part of this sheet") from None

    def set_verdict(self, sample_id: str, rater: str, verdict: Verdict) -> None:
        entry = self._entry(sample_id)
        if rater == "a":
            entry.rater_a = verdict
        elif rater == "b":
            entry.rater_b = verdict
        else:
            raise ValueError("rater must be 'a' or 'b'")

    def set_adjudication(
        self,
        sample_id: str,
        verdict: Verdict,
        reason: Optional[ReasonTag] = None,
    ) -> None:
        entry = self._entry(sample_id)
        if verdict not in (Verdict.CORRECT, Verdict.INCORRECT):
            raise ValueError("adjudication must be correct or incorrect")
        if Verdict.UNSET in (entry.rater_a, entry.rater_b):
            raise ReviewStateError(
                f"id {sample_id!r}: adjudication requires both rater verdicts first"
            )
        entry.adjudicated = verdict
        entry.reason = reason

    def save(self, path) -> None:
        doc = {
            "dataset": self.dataset_name,
            "entries": [
                {
                    "id": sid,
                    "rater_a": e.rater_a.value,
                    "rater_b": e.rater_b.value,
                    "adjudicated": None if e.adjudicated is None else e.adjudicated.value,
                    "reason": None if e.reason is None else e.reason.value,
                }
                for sid, e in self.entries.items()
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ReviewSheet":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(f"review sheet is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "entries" not in doc:
            raise DatasetFormatError("review sheet must be an object with 'entries'")
        try:
            ids = [entry["id"] for entry in doc["entries"]]
            sheet = cls(str(doc.get("dataset", "")), ids)
            for entry in doc["entries"]:
                e = sheet.entries[entry["id"]]
                e.rater_a = Verdict(entry.get("rater_a", "unset"))
                e.rater_b = Verdict(entry.get("rater_b", "unset"))
                adj = entry.get("adjudicated")
                if adj is not None:
                    if Verdict.UNSET in (e.rater_a, e.rater_b):
                        raise DatasetFormatError(
                            f"id {entry['id']!r}: adjudicated without both rater verdicts"
                        )
                    adj_v = Verdict(adj)
                    if adj_v not in (Verdict.CORRECT, Verdict.INCORRECT):
                        raise DatasetFormatError(
                            f"id {entry['id']!r}: adjudication must be correct/incorrect"
                        )
                    e.adjudicated = adj_v
                reason = entry.get("reason")
                if reason is not None:
                    e.reason = ReasonTag(reason)
        except DatasetFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"malformed review sheet: {exc}") from exc
        return sheet


def sample_for_review(
    dataset: Dataset,
    label: Optional[Label],
    n: int,
    seed: int,
) -> ReviewSheet:
    """Uniform sample of ``n`` ids (optionally label-filtered), seeded.

    The same seed over the same dataset always reproduces the same sheet.
    """
    matching = [
        s.id for s in dataset if label is None or s.label is label
    ]
    if n < 1:
        raise ValueError("sample size must be >= 1")
    if n > len(matching):
        raise ValueError(
            f"sample size {n} exceeds the {len(matching)} matching samples"
        )
    rng = random.Random(seed)
    return ReviewSheet(dataset.name, rng.sample(matching, n))


def _verdict_table(sheet: ReviewSheet) -> tuple[int, int, int, int]:
    """(both correct, a-only correct, b-only correct, both incorrect)."""
    cc = ci = ic = ii = 0
    for sid, e in sheet.entries.items():
        if Verdict.UNSET in (e.rater_a, e.rater_b):
            raise ReviewStateError(f"id {sid!r}: both rater verdicts are required")
        a_ok = e.rater_a is Verdict.CORRECT
        b_ok = e.rater_b is Verdict.CORRECT
        if a_ok and b_ok:
            cc += 1
        elif a_ok:
            ci += 1
        elif b_ok:
            ic += 1
        else:
            ii += 1
    return cc, ci, ic, ii


def cohen_kappa(sheet: ReviewSheet) -> float:
    """Chance-corrected two-rater agreement over the sheet's verdicts.

    Returns 1 in the degenerate case where expected agreement is 1, which
    only happens when both raters used a single shared category.
    """
    cc, ci, ic, ii = _verdict_table(sheet)
    n = cc + ci + ic + ii
    if n == 0:
        raise ReviewStateError("empty review sheet")
    observed = (cc + ii) / n
    a_correct = (cc + ci) / n
    b_correct = (cc + ic) / n
    expected = a_correct * b_correct + (1 - a_correct) * (1 - b_correct)
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


def accuracy_score(sheet: ReviewSheet) -> AttributeScore:
    """Fraction of adjudicated-correct labels among the reviewed sample."""
    if len(sheet) == 0:
        raise ReviewStateError("empty review sheet")
    satisfied = 0
    for sid, e in sheet.entries.items():
        if e.adjudicated is None:
            raise ReviewStateError(
                f"id {sid!r}: accuracy needs a fully adjudicated sheet"
            )
        if e.adjudicated is Verdict.CORRECT:
            satisfied += 1
    total = len(sheet)
    return AttributeScore(
        attribute=Attribute.ACCURACY,
        value=satisfied / total,
        satisfied_count=satisfied,
        total_count=total,
        basis=ScoreBasis.SAMPLE,
    )
