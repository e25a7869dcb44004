import numpy as np
import pytest

from conftest import make_doc, make_sentence
from sentiweight.baselines import (
    average_on_review,
    classify,
    sentence_average,
    sum_on_review,
    term_count_classify,
    threshold_sweep,
)
from sentiweight.corpus import Corpus
from sentiweight.features import featurize_document
from sentiweight.lexicon import parse_lexicon


def lex(entries):
    return parse_lexicon("".join(f"a\t{i}\t{p}\t{n}\t{w}#1\tg\n" for i, (w, p, n) in enumerate(entries)))


def test_term_count(micro_lexicon):
    doc = make_doc([make_sentence([("good", "JJ"), ("good", "JJ")]), make_sentence([("bad", "JJ")])])
    d = term_count_classify(doc, micro_lexicon)
    assert (d.pos_total, d.neg_total, d.predicted) == (2, 1, "positive")


def test_term_count_majority_and_tie():
    idx = lex([("p1", 0.5, 0), ("p2", 0.5, 0), ("p3", 0.5, 0), ("n1", 0, 0.5)])
    doc = make_doc([make_sentence([(w, "JJ") for w in ("p1", "p2", "p3", "n1")])])
    assert term_count_classify(doc, idx).predicted == "positive"
    doc = make_doc([make_sentence([("zzz", "JJ")])])
    d = term_count_classify(doc, idx)
    assert (d.pos_total, d.neg_total, d.predicted) == (0, 0, "positive")


def test_sum_on_review(micro_lexicon):
    doc = make_doc([make_sentence([("good", "JJ"), ("good", "JJ"), ("bad", "JJ")])])
    d = sum_on_review(doc, micro_lexicon, 0.0)
    assert (d.pos_total, d.neg_total, d.predicted) == (1.5, 0.625, "positive")


def test_sum_on_review_boundary_and_threshold():
    idx = lex([("a", 0.2, 0.2), ("b", 0.2, 0.1)])
    doc_a = make_doc([make_sentence([("a", "JJ")])])
    doc_b = make_doc([make_sentence([("b", "JJ")])])
    assert sum_on_review(doc_a, idx, 0.0).predicted == "positive"
    assert sum_on_review(doc_b, idx, 0.5).predicted == "negative"


def test_average_on_review():
    idx = lex([("good", 0.75, 0), ("up", 0.5, 0), ("down", 0, 0.7)])
    doc = make_doc([make_sentence([("good", "JJ")])])
    d = average_on_review(doc, idx, 0.0)
    assert d.statistic == 0.75 and d.predicted == "positive"
    doc = make_doc([make_sentence([("up", "JJ")]), make_sentence([("down", "JJ")])])
    d = average_on_review(doc, idx, 0.0)
    assert d.statistic == pytest.approx(-0.1, abs=1e-15) and d.predicted == "negative"
    doc = make_doc([make_sentence([("x", "NN")]), make_sentence([("y", "DT")])])
    d = average_on_review(doc, idx, 0.0)
    assert d.statistic == 0 and d.predicted == "positive"
    assert sentence_average(make_sentence([("x", "NN")]), idx) == 0


def test_unknown_rule(micro_lexicon):
    with pytest.raises(ValueError):
        classify("median", make_doc([make_sentence([("good", "JJ")])]), micro_lexicon)


def test_sweep_degenerate_thresholds(corpus, swn):
    n_pos = sum(d.label == "positive" for d in corpus)
    for rule in ("term-count", "sum", "average"):
        table = threshold_sweep(corpus, swn, rule, [-1e9, 1e9])
        assert table[0][1] == n_pos / len(corpus)
        assert table[1][1] == (len(corpus) - n_pos) / len(corpus)


def test_sweep_perfect_fixture():
    idx = lex([("good", 0.75, 0), ("bad", 0, 0.75)])
    docs = [make_doc([make_sentence([("good", "JJ")])], "positive", "a"),
            make_doc([make_sentence([("bad", "JJ")])], "negative", "b")]
    for rule in ("term-count", "sum", "average"):
        assert threshold_sweep(Corpus(docs), idx, rule, [0.0]) == [(0.0, 1.0)]


def test_sweep_sentence_level(corpus, swn):
    (t, acc), = threshold_sweep(corpus, swn, "sum", [0.0], level="sentence")
    assert 0 <= acc <= 1


def test_sweep_requires_thresholds(corpus, swn):
    with pytest.raises(ValueError):
        threshold_sweep(corpus, swn, "sum", [])


def test_sum_agrees_with_feature_vector(corpus, swn):
    for doc in corpus:
        v = featurize_document(doc, swn).values
        expected = "positive" if v[24] - v[25] >= 0 else "negative"
        assert sum_on_review(doc, swn, 0.0).predicted == expected


def test_monotone_in_threshold(corpus, swn):
    ths = np.linspace(-3, 3, 50)
    for rule in ("term-count", "sum", "average"):
        for doc in corpus:
            preds = [classify(rule, doc, swn, t).predicted == "positive" for t in ths]
            assert all(a >= b for a, b in zip(preds, preds[1:]))
