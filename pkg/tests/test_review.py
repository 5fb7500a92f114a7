import math

import pytest
from scipy.stats import norm
from sklearn.metrics import cohen_kappa_score

from conftest import dataset, sample
from vulnaudit.corpus import Attribute, DatasetFormatError, Label, ScoreBasis
from vulnaudit.review import (
    ReasonTag,
    ReviewSheet,
    ReviewStateError,
    Verdict,
    accuracy_score,
    cochran_sample_size,
    cohen_kappa,
    sample_for_review,
)
from vulnaudit.stats import normal_quantile


class TestCochran:
    def test_canonical_large_population(self):
        # 90% confidence, 10% margin, p=0.5: n0 = 67.64 -> 68
        assert cochran_sample_size(0.90, 0.10, population=10**6) == 68

    def test_small_population_correction(self):
        assert cochran_sample_size(0.90, 0.10, population=50) == 30
        assert cochran_sample_size(0.90, 0.10, population=199) == 51

    def test_never_exceeds_population(self):
        assert cochran_sample_size(0.99, 0.01, population=20) == 20

    def test_monotone_in_confidence(self):
        sizes = [
            cochran_sample_size(c, 0.10, population=10**6)
            for c in (0.80, 0.90, 0.95, 0.99)
        ]
        assert sizes == sorted(sizes)

    def test_monotone_in_margin(self):
        wide = cochran_sample_size(0.90, 0.20, population=10**6)
        tight = cochran_sample_size(0.90, 0.05, population=10**6)
        assert tight > wide

    def test_matches_formula(self):
        z = norm.ppf(0.95)
        n0 = math.ceil(z * z * 0.25 / 0.1**2 - 1e-9)
        pop = 500
        want = math.ceil(n0 / (1 + (n0 - 1) / pop) - 1e-9)
        assert cochran_sample_size(0.90, 0.10, population=pop) == want

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(confidence=0.0, margin=0.1),
            dict(confidence=1.0, margin=0.1),
            dict(confidence=0.9, margin=0.0),
            dict(confidence=0.9, margin=1.0),
            dict(confidence=0.9, margin=0.1, proportion=0.0),
            dict(confidence=0.9, margin=0.1, population=0),
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            cochran_sample_size(**kwargs)


class TestNormalQuantile:
    def test_matches_scipy(self):
        for p in (0.01, 0.1, 0.5, 0.75, 0.9, 0.95, 0.975, 0.995):
            assert normal_quantile(p) == pytest.approx(norm.ppf(p), abs=1e-6)

    def test_symmetry(self):
        assert normal_quantile(0.25) == pytest.approx(-normal_quantile(0.75), abs=1e-12)

    def test_median_is_zero(self):
        assert normal_quantile(0.5) == 0.0

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 2.0])
    def test_open_interval_enforced(self, p):
        with pytest.raises(ValueError):
            normal_quantile(p)


def filled_sheet(pattern):
    """Sheet from (rater_a, rater_b, adjudicated) verdict triples."""
    ids = [f"s{i}" for i in range(len(pattern))]
    sheet = ReviewSheet("d", ids)
    for sid, (va, vb, adj) in zip(ids, pattern):
        sheet.set_verdict(sid, "a", va)
        sheet.set_verdict(sid, "b", vb)
        if adj is not None:
            sheet.set_adjudication(sid, adj)
    return sheet


CC = (Verdict.CORRECT, Verdict.CORRECT, Verdict.CORRECT)
II = (Verdict.INCORRECT, Verdict.INCORRECT, Verdict.INCORRECT)
CI = (Verdict.CORRECT, Verdict.INCORRECT, Verdict.CORRECT)
IC = (Verdict.INCORRECT, Verdict.CORRECT, Verdict.INCORRECT)


class TestSheet:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            ReviewSheet("d", ["a", "a"])

    def test_unknown_id_rejected(self):
        sheet = ReviewSheet("d", ["a"])
        with pytest.raises(KeyError):
            sheet.set_verdict("zz", "a", Verdict.CORRECT)

    def test_bad_rater_rejected(self):
        sheet = ReviewSheet("d", ["a"])
        with pytest.raises(ValueError, match="rater"):
            sheet.set_verdict("a", "c", Verdict.CORRECT)

    def test_adjudication_needs_both_verdicts(self):
        sheet = ReviewSheet("d", ["a"])
        sheet.set_verdict("a", "a", Verdict.CORRECT)
        with pytest.raises(ReviewStateError, match="both rater"):
            sheet.set_adjudication("a", Verdict.CORRECT)

    def test_adjudication_cannot_be_unset(self):
        sheet = filled_sheet([CC])
        with pytest.raises(ValueError):
            sheet.set_adjudication("s0", Verdict.UNSET)

    def test_roundtrip(self, tmp_path):
        sheet = filled_sheet([CC, CI, II])
        sheet.set_adjudication("s1", Verdict.CORRECT, ReasonTag.CLEANUP)
        path = tmp_path / "sheet.json"
        sheet.save(path)
        loaded = ReviewSheet.load(path)
        assert loaded.dataset_name == "d"
        assert loaded.sampled_ids == sheet.sampled_ids
        assert loaded.entries == sheet.entries

    def test_save_deterministic(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        filled_sheet([CC, IC]).save(p1)
        filled_sheet([CC, IC]).save(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_load_rejects_orphan_adjudication(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            '{"dataset": "d", "entries": [{"id": "x", "rater_a": "unset",'
            ' "rater_b": "unset", "adjudicated": "correct", "reason": null}]}'
        )
        with pytest.raises(DatasetFormatError):
            ReviewSheet.load(path)

    def test_load_rejects_non_object(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2]")
        with pytest.raises(DatasetFormatError):
            ReviewSheet.load(path)

    def test_load_rejects_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(DatasetFormatError, match="not valid JSON"):
            ReviewSheet.load(path)


class TestSampling:
    def corpus(self):
        rows = []
        for i in range(30):
            label = Label.VULNERABLE if i % 3 == 0 else Label.NON_VULNERABLE
            rows.append(sample(f"s{i:02d}", f"x = {i};", label))
        return dataset(*rows, name="corpus")

    def test_deterministic(self):
        a = sample_for_review(self.corpus(), None, 10, seed=7)
        b = sample_for_review(self.corpus(), None, 10, seed=7)
        assert a.sampled_ids == b.sampled_ids

    def test_seed_changes_selection(self):
        a = sample_for_review(self.corpus(), None, 10, seed=7)
        b = sample_for_review(self.corpus(), None, 10, seed=8)
        assert a.sampled_ids != b.sampled_ids

    def test_label_filter(self):
        sheet = sample_for_review(self.corpus(), Label.VULNERABLE, 5, seed=1)
        ds = self.corpus()
        assert all(ds.get(i).label is Label.VULNERABLE for i in sheet.sampled_ids)

    def test_takes_dataset_name(self):
        assert sample_for_review(self.corpus(), None, 3, seed=0).dataset_name == "corpus"

    def test_size_bounds(self):
        with pytest.raises(ValueError):
            sample_for_review(self.corpus(), None, 0, seed=0)
        with pytest.raises(ValueError, match="exceeds"):
            sample_for_review(self.corpus(), Label.VULNERABLE, 11, seed=0)


class TestKappa:
    def test_against_sklearn_on_worked_table(self):
        # agreement 40 correct-correct, 15 incorrect-incorrect, 10+5 split
        pattern = [CC] * 40 + [II] * 15 + [CI] * 10 + [IC] * 5
        sheet = filled_sheet([(a, b, None) for a, b, _ in pattern])
        ra = [1 if p[0] is Verdict.CORRECT else 0 for p in pattern]
        rb = [1 if p[1] is Verdict.CORRECT else 0 for p in pattern]
        want = cohen_kappa_score(ra, rb)
        assert cohen_kappa(sheet) == pytest.approx(want, abs=1e-6)
        assert cohen_kappa(sheet) == pytest.approx(22 / 43, abs=1e-12)

    def test_full_agreement_even_when_one_sided(self):
        # every sample judged correct by both: expected agreement is 1,
        # the usual estimator divides 0/0, reported as perfect agreement
        assert cohen_kappa(filled_sheet([CC, CC, CC])) == 1.0

    def test_random_tables_match_sklearn(self):
        import random

        rng = random.Random(5)
        verdicts = (Verdict.CORRECT, Verdict.INCORRECT)
        for _ in range(10):
            pattern = [
                (rng.choice(verdicts), rng.choice(verdicts), None)
                for _ in range(rng.randrange(4, 30))
            ]
            sheet = filled_sheet(pattern)
            ra = [1 if p[0] is Verdict.CORRECT else 0 for p in pattern]
            rb = [1 if p[1] is Verdict.CORRECT else 0 for p in pattern]
            want = cohen_kappa_score(ra, rb)
            if math.isnan(want):
                continue
            assert cohen_kappa(sheet) == pytest.approx(want, abs=1e-9)

    def test_requires_complete_verdicts(self):
        sheet = ReviewSheet("d", ["a"])
        sheet.set_verdict("a", "a", Verdict.CORRECT)
        with pytest.raises(ReviewStateError):
            cohen_kappa(sheet)

    def test_empty_sheet(self):
        with pytest.raises(ReviewStateError):
            cohen_kappa(ReviewSheet("d", []))


class TestAccuracy:
    def test_fraction_of_adjudicated_correct(self):
        pattern = [CC] * 56 + [(
            Verdict.CORRECT, Verdict.INCORRECT, Verdict.INCORRECT
        )] * 14
        score = accuracy_score(filled_sheet(pattern))
        assert score.value == 0.8
        assert (score.satisfied_count, score.total_count) == (56, 70)
        assert score.attribute is Attribute.ACCURACY
        assert score.basis is ScoreBasis.SAMPLE

    def test_requires_full_adjudication(self):
        sheet = filled_sheet([CC, (Verdict.CORRECT, Verdict.CORRECT, None)])
        with pytest.raises(ReviewStateError, match="fully adjudicated"):
            accuracy_score(sheet)

    def test_empty_sheet(self):
        with pytest.raises(ReviewStateError):
            accuracy_score(ReviewSheet("d", []))
