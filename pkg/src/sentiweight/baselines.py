"""Lexicon-only review classifiers: term counting, sum on review, average on review.

None of these has trained parameters, so they are scored on the whole
corpus without folding. Every rule predicts positive when its statistic is
greater than or equal to the threshold.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .corpus import Corpus, ReviewDocument, Sentence
from .features import sentence_stats
from .lexicon import LexiconIndex

RULES = ("term-count", "sum", "average")


@dataclass(frozen=True)
class BaselineDecision:
    predicted: str
    pos_total: float
    neg_total: float
    statistic: float


def _decide(stat: float, threshold: float, pos: float, neg: float) -> BaselineDecision:
    return BaselineDecision("positive" if stat >= threshold else "negative", pos, neg, stat)


def _doc_blocks(doc: ReviewDocument, index: LexiconIndex):
    for s in doc.sentences:
        yield sentence_stats(s, index)


def term_count_classify(doc: ReviewDocument, index: LexiconIndex, threshold: float = 0.0) -> BaselineDecision:
    pos = neg = 0.0
    for blocks, _ in _doc_blocks(doc, index):
        pos += blocks[:, 2].sum()
        neg += blocks[:, 3].sum()
    return _decide(pos - neg, threshold, pos, neg)


def sum_on_review(doc: ReviewDocument, index: LexiconIndex, threshold: float = 0.0) -> BaselineDecision:
    pos = neg = 0.0
    for blocks, _ in _doc_blocks(doc, index):
        pos += blocks[:, 0].sum()
        neg += blocks[:, 1].sum()
    return _decide(pos - neg, threshold, pos, neg)


def sentence_average(sentence: Sentence, index: LexiconIndex) -> float:
    """(pos sum - neg sum) / found terms, 0 when nothing is found."""
    blocks, found = sentence_stats(sentence, index)
    n = found.sum()
    if n == 0:
        return 0.0
    return float(blocks[:, 0].sum() - blocks[:, 1].sum()) / n


def average_on_review(doc: ReviewDocument, index: LexiconIndex, threshold: float = 0.0) -> BaselineDecision:
    pos = neg = 0.0
    avgs = []
    for s in doc.sentences:
        blocks, found = sentence_stats(s, index)
        pos += blocks[:, 0].sum()
        neg += blocks[:, 1].sum()
        n = found.sum()
        avgs.append(0.0 if n == 0 else float(blocks[:, 0].sum() - blocks[:, 1].sum()) / n)
    return _decide(float(np.mean(avgs)), threshold, pos, neg)


_RULE_FUNCS = {
    "term-count": term_count_classify,
    "sum": sum_on_review,
    "average": average_on_review,
}


def classify(rule: str, doc: ReviewDocument, index: LexiconIndex, threshold: float = 0.0) -> BaselineDecision:
    try:
        fn = _RULE_FUNCS[rule]
    except KeyError:
        raise ValueError(f"unknown baseline rule {rule!r}; expected one of {RULES}") from None
    return fn(doc, index, threshold)


def _sentence_docs(corpus: Corpus) -> list[ReviewDocument]:
    return [ReviewDocument(i, domain, s.label, (s,)) for i, domain, s in corpus.sentence_instances()]


def threshold_sweep(corpus: Corpus, index: LexiconIndex, rule: str,
                    thresholds: Iterable[float], level: str = "document") -> list[tuple[float, float]]:
    """Accuracy of ``rule`` over the whole corpus at each threshold.

    The statistic for each document is computed once; at sentence level each
    sentence is treated as a one-sentence review.
    """
    thresholds = list(thresholds)
    if not thresholds:
        raise ValueError("threshold list is empty")
    docs = corpus.documents if level == "document" else _sentence_docs(corpus)
    if not docs:
        raise ValueError("corpus is empty")
    stats = np.array([classify(rule, d, index, 0.0).statistic for d in docs])
    truth = np.array([d.label == "positive" for d in docs])
    return [(float(t), float(np.mean((stats >= t) == truth))) for t in thresholds]
