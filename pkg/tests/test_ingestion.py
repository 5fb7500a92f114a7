import json
from datetime import date

import pytest

from vulnaudit.corpus import DatasetFormatError, Label
from vulnaudit.ingestion import load_dataset, save_dataset, validate

from conftest import dataset, sample


def roundtrip(tmp_path, ds):
    path = tmp_path / "ds.jsonl"
    save_dataset(ds, path)
    return load_dataset(path, name=ds.name)


def test_roundtrip_preserves_everything(tmp_path):
    ds = dataset(
        sample("a", "int f() { return 0; }", Label.VULNERABLE,
               when=date(2019, 5, 4), project="kernel", commit_id="deadbeef",
               cve_id="CVE-2019-0001", origin="fix-commit"),
        sample("b", 'char *s = "uniçode\\n";', Label.NON_VULNERABLE),
        name="rt",
    )
    assert roundtrip(tmp_path, ds) == ds


def test_unicode_not_escaped(tmp_path):
    ds = dataset(sample("a", 'puts("héllo");'))
    path = tmp_path / "u.jsonl"
    save_dataset(ds, path)
    assert "héllo" in path.read_text(encoding="utf-8")


def test_optional_fields_omitted(tmp_path):
    path = tmp_path / "o.jsonl"
    save_dataset(dataset(sample("a", "x;")), path)
    doc = json.loads(path.read_text())
    assert set(doc) == {"id", "code", "label"}


def test_name_defaults_to_stem(tmp_path):
    path = tmp_path / "acme_corpus.jsonl"
    save_dataset(dataset(sample("a", "x;")), path)
    assert load_dataset(path).name == "acme_corpus"


def test_blank_lines_skipped(tmp_path):
    path = tmp_path / "b.jsonl"
    row = json.dumps({"id": "a", "code": "x;", "label": "vulnerable"})
    path.write_text(f"\n{row}\n\n  \n")
    assert load_dataset(path).ids() == ("a",)


def _write(tmp_path, *lines):
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return path


def good(sid="a"):
    return json.dumps({"id": sid, "code": "x;", "label": "vulnerable"})


class TestFormatErrors:
    def expect_line(self, tmp_path, lineno, match, *lines):
        with pytest.raises(DatasetFormatError, match=match) as exc:
            load_dataset(_write(tmp_path, *lines))
        assert exc.value.line == lineno

    def test_invalid_json(self, tmp_path):
        self.expect_line(tmp_path, 2, "invalid JSON", good(), "{not json")

    def test_missing_field(self, tmp_path):
        self.expect_line(tmp_path, 1, "missing field 'code'",
                         json.dumps({"id": "a", "label": "vulnerable"}))

    def test_unknown_label(self, tmp_path):
        self.expect_line(tmp_path, 1, "unknown label",
                         json.dumps({"id": "a", "code": "", "label": "buggy"}))

    def test_bad_date(self, tmp_path):
        self.expect_line(
            tmp_path, 1, "report_date",
            json.dumps({"id": "a", "code": "", "label": "vulnerable",
                        "report_date": "01/02/2020"}))

    def test_duplicate_id_names_both_lines(self, tmp_path):
        self.expect_line(tmp_path, 3, "duplicate id 'a'.*line 1",
                         good("a"), good("b"), good("a"))

    def test_non_object_record(self, tmp_path):
        self.expect_line(tmp_path, 1, "object", json.dumps([1, 2]))

    def test_non_string_code(self, tmp_path):
        self.expect_line(tmp_path, 1, "'code'",
                         json.dumps({"id": "a", "code": 3, "label": "vulnerable"}))

    def test_empty_id(self, tmp_path):
        self.expect_line(tmp_path, 1, "'id'",
                         json.dumps({"id": "", "code": "", "label": "vulnerable"}))


def test_validate_counts():
    ds = dataset(
        sample("a", "int x;", Label.VULNERABLE, when=date(2020, 1, 1)),
        sample("b", "  ", Label.NON_VULNERABLE),
        sample("c", "", Label.NON_VULNERABLE, when=date(2021, 2, 2)),
    )
    v = validate(ds)
    assert (v.total, v.vulnerable, v.non_vulnerable) == (3, 1, 2)
    assert v.missing_date == 1
    assert v.empty_code == 2
    assert any("3" in line for line in v.lines())
