"""Reading and writing the JSON-lines dataset interchange format.

One function per line: ``{"id", "code", "label", ...}`` with optional
``project``, ``commit_id``, ``cve_id``, ``report_date`` (ISO yyyy-mm-dd)
and ``origin`` fields.  Blank lines are skipped so hand-edited files stay
loadable.  All format errors carry the 1-based line number.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import date
from typing import Optional

from .corpus import CodeSample, Dataset, DatasetFormatError, Label

_FIELD_ORDER = (
    "id",
    "code",
    "label",
    "project",
    "commit_id",
    "cve_id",
    "report_date",
    "origin",
)

_OPTIONAL_STR_FIELDS = ("project", "commit_id", "cve_id", "origin")


def _parse_record(doc, lineno: int) -> CodeSample:
    if not isinstance(doc, dict):
        raise DatasetFormatError("record must be a JSON object", line=lineno)
    for required in ("id", "code", "label"):
        if required not in doc:
            raise DatasetFormatError(f"missing field {required!r}", line=lineno)
    sid = doc["id"]
    code = doc["code"]
    if not isinstance(sid, str) or not sid:
        raise DatasetFormatError("'id' must be a non-empty string", line=lineno)
    if not isinstance(code, str):
        raise DatasetFormatError("'code' must be a string", line=lineno)
    try:
        label = Label(doc["label"])
    except ValueError:
        raise DatasetFormatError(
            f"unknown label {doc['label']!r} (expected 'vulnerable' or"
            " 'non_vulnerable')",
            line=lineno,
        ) from None
    extras = {}
    for fieldname in _OPTIONAL_STR_FIELDS:
        value = doc.get(fieldname)
        if value is None:
            continue
        if not isinstance(value, str):
            raise DatasetFormatError(f"{fieldname!r} must be a string", line=lineno)
        extras[fieldname] = value
    report_date: Optional[date] = None
    raw_date = doc.get("report_date")
    if raw_date is not None:
        if not isinstance(raw_date, str):
            raise DatasetFormatError(
                "'report_date' must be an ISO date string", line=lineno
            )
        try:
            report_date = date.fromisoformat(raw_date)
        except ValueError:
            raise DatasetFormatError(
                f"bad report_date {raw_date!r} (expected yyyy-mm-dd)", line=lineno
            ) from None
    try:
        return CodeSample(
            id=sid,
            code=code,
            label=label,
            project=extras.get("project"),
            commit_id=extras.get("commit_id"),
            cve_id=extras.get("cve_id"),
            report_date=report_date,
            origin=extras.get("origin", ""),
        )
    except (TypeError, ValueError) as exc:
        raise DatasetFormatError(str(exc), line=lineno) from exc


def load_dataset(path, name: Optional[str] = None) -> Dataset:
    """Load a JSONL dataset; the name defaults to the file's stem."""
    if name is None:
        name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    samples: list[CodeSample] = []
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            sample = _parse_record(doc, lineno)
            if sample.id in seen:
                raise DatasetFormatError(
                    f"duplicate id {sample.id!r} (first seen on line"
                    f" {seen[sample.id]})",
                    line=lineno,
                )
            seen[sample.id] = lineno
            samples.append(sample)
    return Dataset(name, samples)


def _record_dict(sample: CodeSample) -> dict:
    # insertion order below matches _FIELD_ORDER; json.dumps preserves it
    doc = {
        "id": sample.id,
        "code": sample.code,
        "label": sample.label.value,
    }
    if sample.project is not None:
        doc["project"] = sample.project
    if sample.commit_id is not None:
        doc["commit_id"] = sample.commit_id
    if sample.cve_id is not None:
        doc["cve_id"] = sample.cve_id
    if sample.report_date is not None:
        doc["report_date"] = sample.report_date.isoformat()
    if sample.origin:
        doc["origin"] = sample.origin
    return doc


def save_dataset(dataset: Dataset, path) -> None:
    """Write JSONL with a stable field order so output is byte-reproducible.

    ``load_dataset(save_dataset(d)) == d`` holds for every valid dataset.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for sample in dataset:
            fh.write(json.dumps(_record_dict(sample), ensure_ascii=False))
            fh.write("\n")


@dataclass(frozen=True)
class ValidationSummary:
    total: int
    vulnerable: int
    non_vulnerable: int
    missing_date: int
    empty_code: int

    def lines(self) -> list[str]:
        return [
            f"samples:        {self.total}",
            f"vulnerable:     {self.vulnerable}",
            f"non_vulnerable: {self.non_vulnerable}",
            f"missing date:   {self.missing_date}",
            f"empty code:     {self.empty_code}",
        ]


def validate(dataset: Dataset) -> ValidationSummary:
    """Count the basic hygiene facts a loaded dataset should be checked for."""
    vul = sum(1 for s in dataset if s.label is Label.VULNERABLE)
    missing_date = sum(1 for s in dataset if s.report_date is None)
    empty_code = sum(1 for s in dataset if not s.code.strip())
    return ValidationSummary(
        total=len(dataset),
        vulnerable=vul,
        non_vulnerable=len(dataset) - vul,
        missing_date=missing_date,
        empty_code=empty_code,
    )
