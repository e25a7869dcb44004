import os
from pathlib import Path

import numpy as np
import pytest

from sentiweight.corpus import ReviewDocument, Sentence, TaggedToken, load_corpus
from sentiweight.dataset import Dataset
from sentiweight.lexicon import load_lexicon, parse_lexicon

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def swn():
    return load_lexicon(FIXTURES / "swn_fixture.txt")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(FIXTURES / "corpus_fixture.jsonl")


@pytest.fixture(scope="session")
def micro_lexicon():
    """good: a (0.75, 0), bad: a (0, 0.625), love: v (0.5, 0)."""
    return parse_lexicon(
        "a\t1\t0.75\t0\tgood#1\tg\n"
        "a\t2\t0\t0.625\tbad#1\tg\n"
        "v\t3\t0.5\t0\tlove#1\tg\n"
    )


def make_sentence(pairs, label="positive"):
    return Sentence(tuple(TaggedToken(w, t) for w, t in pairs), label)


def make_doc(sentences, label="positive", doc_id="d", domain="books"):
    return ReviewDocument(doc_id, domain, label, tuple(sentences))


def synthetic_dataset(n, seed, informative=1, scale=1.0, overlap=0.0, level="document"):
    """Label = sign of feature 0 (with a margin, blurred by ``overlap``); the
    remaining features are label-independent noise."""
    rng = np.random.default_rng(seed)
    y = np.where(np.arange(n) % 2 == 0, 1, -1)
    rng.shuffle(y)
    X = rng.normal(size=(n, 32))
    X[:, :informative] = y[:, None] * (0.5 + rng.uniform(0, 1, size=(n, informative))) * scale
    X[:, :informative] += overlap * rng.normal(size=(n, informative))
    return Dataset(X, y, tuple(f"r{i}" for i in range(n)), level)


def blobs(n, seed, gap=3.0):
    rng = np.random.default_rng(seed)
    y = np.where(np.arange(n) < n // 2, 1, -1)
    X = rng.normal(size=(n, 32))
    X[:, 0] += gap * y
    X[:, 1] -= gap * y
    return Dataset(X, y, tuple(f"b{i}" for i in range(n)))


def paper_data_paths():
    """Original corpus and SentiWordNet 3.0, if present."""
    base = os.environ.get("SENTIWEIGHT_DATA_DIR")
    corpus = os.environ.get("SENTIWEIGHT_CORPUS") or (base and os.path.join(base, "finegrained.jsonl"))
    lexicon = os.environ.get("SENTIWEIGHT_LEXICON") or (base and os.path.join(base, "SentiWordNet_3.0.0.txt"))
    if corpus and lexicon and os.path.exists(corpus) and os.path.exists(lexicon):
        return corpus, lexicon
    return None


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[1]) if s.split("_")[1].isdigit() else 99):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[_ACCEPTANCE[name]]
        terminalreporter.write_line(f"{outcome}  {name}")
