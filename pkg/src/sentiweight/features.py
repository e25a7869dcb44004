"""The 32-slot SentiWordNet feature vector.

Layout, with word classes in the order adjective, adverb, verb, noun:

====== ====================================================================
0-15   per class: positive score sum, negative score sum, positive term
       count, negative term count
16-23  per class: positive score sum / found terms, negative score sum /
       found terms
24-27  all classes: positive score sum, negative score sum, positive term
       count, negative term count
28-29  all classes: positive / negative score sum per found term
30     positive score sum : negative score sum
31     positive term count : negative term count
====== ====================================================================

A found token is a positive term when its positive score is strictly larger
than its negative score, a negative term in the opposite case and neither on
a tie. Every division goes through :func:`ratio`, so no slot is ever infinite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import ReviewDocument, Sentence
from .lexicon import LexiconIndex, lookup

N_FEATURES = 32
POS_ORDER = ("a", "r", "v", "n")
_POS_NAMES = {"a": "adj", "r": "adv", "v": "verb", "n": "noun"}

FEATURE_NAMES: tuple[str, ...] = tuple(
    [f"{_POS_NAMES[p]}_{s}" for p in POS_ORDER for s in ("pos_sum", "neg_sum", "pos_count", "neg_count")]
    + [f"{_POS_NAMES[p]}_{s}" for p in POS_ORDER for s in ("pos_per_found", "neg_per_found")]
    + ["all_pos_sum", "all_neg_sum", "all_pos_count", "all_neg_count",
       "all_pos_per_found", "all_neg_per_found", "pos_neg_score_ratio", "pos_neg_count_ratio"]
)
COUNT_SLOTS = tuple([4 * b + 2 for b in range(4)] + [4 * b + 3 for b in range(4)] + [26, 27])
# slots derived by division; see recompute_ratios
RATIO_SLOTS = tuple(range(16, 24)) + (28, 29, 30, 31)

LEVELS = ("sentence", "document")


def ratio(a: float, b: float) -> float:
    """``a / b``, or ``a`` when ``b`` is zero."""
    return a / b if b > 0 else a


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    level: str = "sentence"

    def __post_init__(self):
        if self.values.shape != (N_FEATURES,):
            raise ValueError(f"feature vector must have {N_FEATURES} slots, got {self.values.shape}")
        if self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}")

    def __len__(self) -> int:
        return N_FEATURES

    def __getitem__(self, i):
        return self.values[i]


def _fill_ratios(v: np.ndarray, found: Sequence[float], found_all: float) -> None:
    for b in range(4):
        v[16 + 2 * b] = ratio(v[4 * b], found[b])
        v[17 + 2 * b] = ratio(v[4 * b + 1], found[b])
    v[28] = ratio(v[24], found_all)
    v[29] = ratio(v[25], found_all)
    v[30] = ratio(v[24], v[25])
    v[31] = ratio(v[26], v[27])


def sentence_stats(sentence: Sentence, index: LexiconIndex) -> tuple[np.ndarray, np.ndarray]:
    """Raw per-class sums: ``(blocks[4, 4], found[4])``.

    ``blocks[b]`` holds pos sum, neg sum, pos count, neg count for class b.
    """
    blocks = np.zeros((4, 4))
    found = np.zeros(4)
    for tok in sentence.tokens:
        wn = tok.wn_pos
        if wn is None:
            continue
        ws = lookup(index, tok.surface, wn)
        if not ws.found:
            continue
        b = POS_ORDER.index(wn)
        found[b] += 1
        blocks[b, 0] += ws.pos_score
        blocks[b, 1] += ws.neg_score
        if ws.pos_score > ws.neg_score:
            blocks[b, 2] += 1
        elif ws.neg_score > ws.pos_score:
            blocks[b, 3] += 1
    return blocks, found


def sentence_features(sentence: Sentence, index: LexiconIndex) -> FeatureVector:
    blocks, found = sentence_stats(sentence, index)
    v = np.zeros(N_FEATURES)
    v[:16] = blocks.ravel()
    # summed block by block (not blocks.sum) so slots 24-27 equal v0+v4+v8+v12 bit for bit
    v[24:28] = ((blocks[0] + blocks[1]) + blocks[2]) + blocks[3]
    _fill_ratios(v, found, float(found.sum()))
    return FeatureVector(v, "sentence")


def recompute_ratios(v: np.ndarray, found: Sequence[float], found_all: float) -> np.ndarray:
    out = v.copy()
    _fill_ratios(out, found, found_all)
    return out


def document_features(sentence_vectors: Sequence[FeatureVector]) -> FeatureVector:
    """Slot-wise sum over a document's sentence vectors, ratio slots included."""
    if not sentence_vectors:
        raise ValueError("a document needs at least one sentence vector")
    total = np.zeros(N_FEATURES)
    for sv in sentence_vectors:
        if sv.level != "sentence":
            raise ValueError("document_features expects sentence-level vectors")
        total += sv.values
    return FeatureVector(total, "document")


def featurize_document(doc: ReviewDocument, index: LexiconIndex,
                       recompute_doc_ratios: bool = False) -> FeatureVector:
    """Document vector for ``doc``.

    With ``recompute_doc_ratios`` the ratio slots are rebuilt from the
    document-level sums instead of summing sentence ratios.
    """
    vectors = [sentence_features(s, index) for s in doc.sentences]
    fv = document_features(vectors)
    if not recompute_doc_ratios:
        return fv
    found = np.zeros(4)
    for s in doc.sentences:
        found += sentence_stats(s, index)[1]
    return FeatureVector(recompute_ratios(fv.values, found, float(found.sum())), "document")


def apply_weights(v: FeatureVector | np.ndarray, w: np.ndarray):
    """Slot-wise product. Works on a single vector or a row matrix."""
    if isinstance(v, FeatureVector):
        return FeatureVector(v.values * np.asarray(w, dtype=float), v.level)
    return np.asarray(v, dtype=float) * np.asarray(w, dtype=float)


@dataclass(frozen=True)
class StandardizationParams:
    mean: np.ndarray
    std: np.ndarray


def standardize_fit(vectors) -> StandardizationParams:
    """Per-slot mean and population standard deviation of the training rows."""
    X = _as_matrix(vectors)
    if X.shape[0] < 2:
        raise ValueError("standardization needs at least 2 training vectors")
    return StandardizationParams(X.mean(axis=0), X.std(axis=0))


def standardize_apply(params: StandardizationParams, v):
    """z-score ``v`` (a FeatureVector or row matrix); zero-deviation slots map to 0."""
    if isinstance(v, FeatureVector):
        return FeatureVector(standardize_apply(params, v.values[None, :])[0], v.level)
    X = np.asarray(v, dtype=float)
    safe = np.where(params.std > 0, params.std, 1.0)
    return np.where(params.std > 0, (X - params.mean) / safe, 0.0)


def _as_matrix(vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        return np.atleast_2d(vectors.astype(float))
    return np.vstack([fv.values if isinstance(fv, FeatureVector) else np.asarray(fv, float)
                      for fv in vectors])
