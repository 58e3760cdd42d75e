"""Fixtures: hand-annotated sentences, bundled corpora, one trained bundle
per session, and the acceptance-criteria summary printed after the run."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from eqparse import cli
from eqparse.core import Span, VariableTrigger
from eqparse.corpus import (
    AnnotatedExample,
    AnnotatedSentence,
    load_corpus,
    sentence_to_json,
)
from eqparse.pipeline import ModelBundle

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


@pytest.fixture(scope="session")
def synthetic_corpus():
    return load_corpus(DATA / "synthetic_corpus.jsonl")


@pytest.fixture(scope="session")
def multiplier_corpus():
    return load_corpus(DATA / "multiplier_pairs.jsonl")


def make_twice_triple_sentence() -> AnnotatedSentence:
    """'Twice a number equals 25 less than triple the same number.'"""
    return AnnotatedSentence(
        text="Twice a number equals 25 less than triple the same number.",
        tokens=("Twice", "a", "number", "equals", "25", "less", "than",
                "triple", "the", "same", "number", "."),
        pos=("RB", "DT", "NN", "VBZ", "CD", "RBR", "IN", "RB", "DT", "JJ",
             "NN", "."),
        np_chunks=(Span(6, 14), Span(42, 57)),
    )


@pytest.fixture
def twice_triple_sentence() -> AnnotatedSentence:
    return make_twice_triple_sentence()


@pytest.fixture
def twice_triple_example(twice_triple_sentence) -> AnnotatedExample:
    return AnnotatedExample(
        twice_triple_sentence,
        "(= (* 2 V1) (- (* 3 V1) 25))",
        ((VariableTrigger("V1", Span(6, 14)),
          VariableTrigger("V1", Span(42, 57))),),
    )


@pytest.fixture
def sum_sentence() -> AnnotatedSentence:
    """'The sum of two numbers is 80.'"""
    return AnnotatedSentence(
        text="The sum of two numbers is 80.",
        tokens=("The", "sum", "of", "two", "numbers", "is", "80", "."),
        pos=("DT", "NN", "IN", "CD", "NNS", "VBZ", "CD", "."),
        np_chunks=(Span(0, 7), Span(11, 22)),
    )


@pytest.fixture
def sum_example(sum_sentence) -> AnnotatedExample:
    return AnnotatedExample(
        sum_sentence,
        "(= (+ V1 V2) 80)",
        ((VariableTrigger("V1", Span(11, 22)),
          VariableTrigger("V2", Span(11, 22))),),
    )


@pytest.fixture
def notes_sentence() -> AnnotatedSentence:
    """'There are 54 5-dollar and 10-dollar notes.'"""
    return AnnotatedSentence(
        text="There are 54 5-dollar and 10-dollar notes.",
        tokens=("There", "are", "54", "5-dollar", "and", "10-dollar",
                "notes", "."),
        pos=("EX", "VBP", "CD", "JJ", "CC", "JJ", "NNS", "."),
        np_chunks=(Span(13, 40),),
    )


@pytest.fixture
def contributions_sentence() -> AnnotatedSentence:
    """'Emanuel's campaign contributions total three times those of his
    opponents put together.'"""
    text = ("Emanuel's campaign contributions total three times those of "
            "his opponents put together.")
    np1 = Span(0, len("Emanuel's campaign contributions"))
    np2_start = text.index("those")
    np2 = Span(np2_start, text.index("together") + len("together"))
    return AnnotatedSentence(
        text=text,
        tokens=("Emanuel", "'s", "campaign", "contributions", "total",
                "three", "times", "those", "of", "his", "opponents", "put",
                "together", "."),
        pos=("NNP", "POS", "NN", "NNS", "VBP", "CD", "NNS", "DT", "IN",
             "PRP$", "NNS", "VBN", "RB", "."),
        np_chunks=(np1, np2),
    )


@pytest.fixture
def wind_bird_sentence() -> AnnotatedSentence:
    """'Flying with the wind , a bird was able to make 150 kilometers per
    hour.'"""
    text = "Flying with the wind , a bird was able to make 150 kilometers per hour."
    np1 = Span(text.index("the wind"), text.index("the wind") + len("the wind"))
    np2 = Span(text.index("a bird"), text.index("a bird") + len("a bird"))
    return AnnotatedSentence(
        text=text,
        tokens=("Flying", "with", "the", "wind", ",", "a", "bird", "was",
                "able", "to", "make", "150", "kilometers", "per", "hour", "."),
        pos=("VBG", "IN", "DT", "NN", ",", "DT", "NN", "VBD", "JJ", "TO",
             "VB", "CD", "NNS", "IN", "NN", "."),
        np_chunks=(np1, np2),
    )


@pytest.fixture(scope="session")
def train_corpus_path(tmp_path_factory) -> Path:
    """Synthetic corpus plus the hand-labeled multiplier sentences."""
    merged = tmp_path_factory.mktemp("corpus") / "train.jsonl"
    lines = (DATA / "synthetic_corpus.jsonl").read_text(encoding="utf-8")
    lines += (DATA / "multiplier_pairs.jsonl").read_text(encoding="utf-8")
    merged.write_text(lines, encoding="utf-8")
    return merged


@pytest.fixture(scope="session")
def bundle_path(train_corpus_path, tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("model") / "bundle.txt"
    rc = cli.main(["train", "--corpus", str(train_corpus_path),
                   "--model", str(out)])
    assert rc == 0
    return out


@pytest.fixture(scope="session")
def bundle(bundle_path) -> ModelBundle:
    return ModelBundle.load(bundle_path)


@pytest.fixture
def twice_triple_input_path(tmp_path, twice_triple_sentence) -> Path:
    path = tmp_path / "sentence.json"
    path.write_text(json.dumps(sentence_to_json(twice_triple_sentence)),
                    encoding="utf-8")
    return path


# --- acceptance criteria summary ---------------------------------------------

_CRITERIA = {
    "c01": "end-to-end parse of the annotated two-mention multiplier sentence",
    "c02": "lexicon rule suite: 11 rules plus 2 precedence overrides",
    "c03": "chart decoding matches exhaustive enumeration (200 instances)",
    "c04": "decoded trees projective, equality-rooted, leaf-order preserving",
    "c05": "superset training convergence and singleton degeneracy",
    "c06": "joint relevance argmax matches brute force (100 instances)",
    "c07": "5-fold CV on the synthetic corpus meets accuracy thresholds",
    "c08": "canonicalization idempotent and an equivalence relation",
    "c09": "identical seeds give byte-identical bundles and metrics",
    "c10": "cross-validation on an externally supplied corpus reports metrics",
}

_RESULTS: dict[str, list[int]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    crit = name.split("_")[1]
    if crit not in _CRITERIA:
        return
    counted = report.when == "call" or (report.when == "setup" and report.failed)
    if not counted:
        return
    entry = _RESULTS.setdefault(crit, [0, 0])
    entry[0] += 1
    if report.failed:
        entry[1] += 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_CRITERIA):
        if crit not in _RESULTS:
            continue
        total, failed = _RESULTS[crit]
        status = "PASS" if failed == 0 else "FAIL"
        terminalreporter.write_line(
            f"{status} {crit} ({total - failed}/{total}): {_CRITERIA[crit]}")
