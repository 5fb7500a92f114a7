from datetime import date

import pytest

from vulnaudit.corpus import (
    Attribute,
    AttributeScore,
    CodeSample,
    Dataset,
    DatasetFormatError,
    Label,
    ScoreBasis,
    ScoreUndefinedError,
    attribute_score,
)

from conftest import dataset, sample


class TestCodeSample:
    def test_minimal_construction(self):
        s = CodeSample(id="a", code="int x;", label=Label.VULNERABLE)
        assert s.report_date is None
        assert s.project is None
        assert s.origin == ""

    def test_empty_id_rejected(self):
        with pytest.raises(ValueError, match="id"):
            CodeSample(id="", code="x", label=Label.VULNERABLE)

    def test_non_string_code_rejected(self):
        with pytest.raises(ValueError, match="code"):
            CodeSample(id="a", code=b"x", label=Label.VULNERABLE)

    def test_label_must_be_enum(self):
        with pytest.raises(ValueError, match="label"):
            CodeSample(id="a", code="x", label="vulnerable")

    def test_date_must_be_date(self):
        with pytest.raises(ValueError, match="report_date"):
            CodeSample(id="a", code="x", label=Label.VULNERABLE,
                       report_date="2020-01-01")

    def test_frozen(self):
        s = sample("a", "x")
        with pytest.raises(AttributeError):
            s.code = "y"

    def test_empty_code_allowed(self):
        assert sample("a", "").code == ""


class TestDataset:
    def test_order_preserved(self):
        ds = dataset(sample("b", "x"), sample("a", "y"), sample("c", "z"))
        assert ds.ids() == ("b", "a", "c")

    def test_duplicate_id_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            dataset(sample("a", "x"), sample("a", "y"))

    def test_lookup(self):
        ds = dataset(sample("a", "x"), sample("b", "y"))
        assert ds.get("b").code == "y"
        assert "a" in ds
        assert "zz" not in ds
        with pytest.raises(KeyError):
            ds.get("zz")

    def test_subset_keeps_order_and_filters(self):
        ds = dataset(sample("a", "1"), sample("b", "2"), sample("c", "3"))
        sub = ds.subset(["c", "a"])
        assert sub.ids() == ("a", "c")
        assert sub.name == ds.name

    def test_subset_rename(self):
        ds = dataset(sample("a", "1"), name="orig")
        assert ds.subset(["a"], name="new").name == "new"

    def test_subset_unknown_id(self):
        ds = dataset(sample("a", "1"))
        with pytest.raises(KeyError):
            ds.subset(["nope"])

    def test_equality_and_hash(self):
        a = dataset(sample("a", "1"), sample("b", "2"))
        b = dataset(sample("a", "1"), sample("b", "2"))
        c = dataset(sample("b", "2"), sample("a", "1"))
        assert a == b
        assert hash(a) == hash(b)
        assert a != c  # order matters

    def test_len_iter(self):
        ds = dataset(sample("a", "1"), sample("b", "2"))
        assert len(ds) == 2
        assert [s.id for s in ds] == ["a", "b"]


class TestAttributeScore:
    def test_counted_score_consistency_enforced(self):
        with pytest.raises(ValueError, match="value"):
            AttributeScore(Attribute.UNIQUENESS, 0.9, 1, 2, ScoreBasis.FULL_DATASET)

    def test_range_enforced(self):
        with pytest.raises(ValueError, match="outside"):
            AttributeScore(Attribute.UNIQUENESS, 1.5, 3, 2, ScoreBasis.FULL_DATASET)

    def test_distributional_has_no_counts(self):
        with pytest.raises(ValueError, match="counts"):
            AttributeScore(Attribute.CURRENTNESS, 0.5, 1, 2, ScoreBasis.DISTRIBUTIONAL)
        s = AttributeScore(Attribute.CURRENTNESS, 0.5, 0, 0, ScoreBasis.DISTRIBUTIONAL)
        assert s.value == 0.5

    def test_attribute_score_builder(self):
        s = attribute_score(Attribute.COMPLETENESS, [True, True, False, True])
        assert s.value == 0.75
        assert (s.satisfied_count, s.total_count) == (3, 4)
        assert s.basis is ScoreBasis.FULL_DATASET

    def test_empty_flags_undefined(self):
        with pytest.raises(ScoreUndefinedError):
            attribute_score(Attribute.COMPLETENESS, [])


def test_format_error_line_prefix():
    e = DatasetFormatError("bad record", line=7)
    assert str(e).startswith("line 7: ")
    assert DatasetFormatError("oops").args[0] == "oops"
