from datetime import date

import pytest

from vulnaudit.corpus import CodeSample, Dataset, Label


def sample(sid, code, label=Label.VULNERABLE, when=None, **kw):
    if isinstance(when, str):
        when = date.fromisoformat(when)
    return CodeSample(id=sid, code=code, label=label, report_date=when, **kw)


def dataset(*samples, name="t"):
    return Dataset(name, samples)


@pytest.fixture
def two_label_pair():
    """Identical code under both labels: the canonical inconsistency."""
    code = "int f(int a) { return a + 1; }"
    return dataset(
        sample("v1", code, Label.VULNERABLE, when=date(2020, 1, 1)),
        sample("n1", code, Label.NON_VULNERABLE, when=date(2021, 1, 1)),
    )
