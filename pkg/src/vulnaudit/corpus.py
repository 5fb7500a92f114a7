"""Core value types shared by every stage of the audit pipeline.

A dataset is an ordered, immutable collection of labelled functions.  Every
measurement in the package reduces to an ``AttributeScore``: the fraction of
samples satisfying a predicate, except for distribution-level scores which
carry the value directly.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional


class AuditError(Exception):
    """Base class for data-state errors raised by this package."""


class ScoreUndefinedError(AuditError):
    """A score was requested for an empty collection (division by zero)."""


class InsufficientDataError(AuditError):
    """An operation needs more samples (or more dated samples) than exist."""


class DatasetFormatError(AuditError):
    """A serialized dataset or document failed validation.

    ``line`` is the 1-based line number of the offending record when the
    error came from a line-delimited file, else None.
    """

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Label(Enum):
    VULNERABLE = "vulnerable"
    NON_VULNERABLE = "non_vulnerable"


class Attribute(Enum):
    ACCURACY = "accuracy"
    UNIQUENESS = "uniqueness"
    CONSISTENCY = "consistency"
    COMPLETENESS = "completeness"
    CURRENTNESS = "currentness"


class ScoreBasis(Enum):
    # score computed over every sample in the dataset
    FULL_DATASET = "full_dataset"
    # score computed over a reviewed subset
    SAMPLE = "sample"
    # score derived from a distribution comparison, not a per-sample count
    DISTRIBUTIONAL = "distributional"


@dataclass(frozen=True)
class CodeSample:
    """One labelled function: the unit every measurement operates on."""

    id: str
    code: str
    label: Label
    project: Optional[str] = None
    commit_id: Optional[str] = None
    cve_id: Optional[str] = None
    report_date: Optional[dt.date] = None
    origin: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("sample id must be a non-empty string")
        if not isinstance(self.code, str):
            raise ValueError(f"sample {self.id!r}: code must be a string")
        if not isinstance(self.label, Label):
            raise ValueError(f"sample {self.id!r}: label must be a Label")
        if self.report_date is not None and not isinstance(self.report_date, dt.date):
            raise ValueError(f"sample {self.id!r}: report_date must be a date or None")


class Dataset:
    """Ordered collection of samples with unique ids.

    Iteration order is the construction order and never changes; every id
    lookup is O(1).
    """

    __slots__ = ("name", "_samples", "_by_id")

    def __init__(self, name: str, samples: Iterable[CodeSample]):
        self.name = name
        self._samples = tuple(samples)
        by_id: dict[str, CodeSample] = {}
        for s in self._samples:
            if s.id in by_id:
                raise ValueError(f"duplicate sample id {s.id!r}")
            by_id[s.id] = s
        self._by_id = by_id

    @property
    def samples(self) -> tuple[CodeSample, ...]:
        return self._samples

    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self._samples)

    def get(self, sample_id: str) -> CodeSample:
        return self._by_id[sample_id]

    def subset(self, keep_ids: Iterable[str], name: Optional[str] = None) -> "Dataset":
        """New dataset containing ``keep_ids`` in the original order."""
        keep = set(keep_ids)
        unknown = keep - self._by_id.keys()
        if unknown:
            raise KeyError(f"unknown sample ids: {sorted(unknown)[:5]}")
        return Dataset(name or self.name, (s for s in self._samples if s.id in keep))

    def __contains__(self, sample_id: str) -> bool:
        return sample_id in self._by_id

    def __len__(self) -> int:
        return len(self._samples)

    def __iter__(self) -> Iterator[CodeSample]:
        return iter(self._samples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.name == other.name and self._samples == other._samples

    def __hash__(self):
        return hash((self.name, self._samples))

    def __repr__(self) -> str:
        return f"Dataset({self.name!r}, {len(self._samples)} samples)"


@dataclass(frozen=True)
class AttributeScore:
    """Result of measuring one attribute.

    For counted bases, ``value`` is exactly ``satisfied_count / total_count``.
    Distribution-based scores carry 0/0 for the counts.
    """

    attribute: Attribute
    value: float
    satisfied_count: int
    total_count: int
    basis: ScoreBasis

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"score value {self.value!r} outside [0, 1]")
        if self.basis is ScoreBasis.DISTRIBUTIONAL:
            if (self.satisfied_count, self.total_count) != (0, 0):
                raise ValueError("distributional scores carry no counts")
            return
        if self.total_count <= 0:
            raise ValueError("counted scores need total_count > 0")
        if not 0 <= self.satisfied_count <= self.total_count:
            raise ValueError("satisfied_count outside [0, total_count]")
        if self.value != self.satisfied_count / self.total_count:
            raise ValueError("value does not equal satisfied_count / total_count")


def attribute_score(attribute: Attribute, flags: Iterable[bool]) -> AttributeScore:
    """Fraction of true flags, one flag per sample.

    Order of the flags does not matter.  Raises ScoreUndefinedError for an
    empty flag sequence, since the fraction would divide by zero.
    """
    flag_list = [bool(f) for f in flags]
    if not flag_list:
        raise ScoreUndefinedError(f"{attribute.value}: no samples to score")
    satisfied = sum(flag_list)
    total = len(flag_list)
    return AttributeScore(
        attribute=attribute,
        value=satisfied / total,
        satisfied_count=satisfied,
        total_count=total,
        basis=ScoreBasis.FULL_DATASET,
    )
