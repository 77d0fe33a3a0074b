"""Tests for gallery corpus models and checks."""

import pytest
from pydantic import ValidationError

from src.classify import Rule, Verdict, VerdictClass
from src.cli.gallery import (
    EXPECTED_CORPUS_SIZE,
    GalleryEntry,
    Tolerance,
    check_verdict,
    load_corpus,
    same_up_to_scalar,
    select,
)
from src.expr import parse


def make_entry(**overrides) -> GalleryEntry:
    data = {
        "name": "cusp",
        "patches": [{"equation": "y^2 - x^3"}],
        "point": ["0", "0"],
        "source": "test",
        "expected": {"class": "Cusp", "rule": "planar-germ-dichotomy"},
    }
    data.update(overrides)
    return GalleryEntry.model_validate(data)


class TestCorpus:
    """Tests for the bundled corpus."""

    def test_size_and_unique_names(self):
        entries = load_corpus()
        assert len(entries) == EXPECTED_CORPUS_SIZE
        assert len({e.name for e in entries}) == len(entries)

    def test_every_entry_has_expectations(self):
        for entry in load_corpus():
            assert entry.expected.verdict_class is not None
            assert entry.provenance

    def test_select_by_substring(self):
        entries = load_corpus()
        assert [e.name for e in select(entries, "deltoid")] == ["deltoid-2", "deltoid-3", "deltoid-4"]
        assert select(entries, None) == entries


class TestGalleryEntry:
    """Tests for entry validation."""

    def test_variety_and_point(self):
        entry = make_entry(patches=[{"equation": "y"}, {"equation": "y - x^2", "constraints": ["x"]}])
        V = entry.variety()
        assert len(V.patches) == 2
        assert entry.exact_point() == (0, 0)

    def test_point_length_checked(self):
        with pytest.raises(ValidationError):
            make_entry(point=["0", "0", "0"])

    def test_unparsable_equation(self):
        with pytest.raises(ValidationError):
            make_entry(patches=[{"equation": "y^^2"}])


class TestChecks:
    """Tests for expectation comparisons."""

    def test_tolerance(self):
        tolerance = Tolerance(value=2.0, rel_tol=0.05)
        assert tolerance.accepts(2.09)
        assert not tolerance.accepts(2.2)

    def test_same_up_to_scalar(self):
        assert same_up_to_scalar(parse("x - y"), parse("2*y - 2*x"))
        assert not same_up_to_scalar(parse("x - y"), parse("x + y"))
        assert not same_up_to_scalar(parse("x - y"), parse("x - y + 1"))

    def test_check_verdict(self):
        entry = make_entry()
        verdict = Verdict(point=["0", "0"], verdict_class=VerdictClass.CUSP, rule=Rule.PLANAR_GERM)
        checks = check_verdict(entry, verdict)
        assert {c.name for c in checks} == {"class", "rule"}
        assert all(c.passed for c in checks)

    def test_check_verdict_mismatch(self):
        entry = make_entry()
        verdict = Verdict(point=["0", "0"], verdict_class=VerdictClass.MULTI_BRANCH, rule=Rule.PLANAR_GERM)
        failed = [c.name for c in check_verdict(entry, verdict) if not c.passed]
        assert failed == ["class"]
