"""Feature matrices with labels, at sentence or document level."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .features import FEATURE_NAMES, N_FEATURES, featurize_document, sentence_features
from .lexicon import LexiconIndex

POSITIVE, NEGATIVE = 1, -1


def label_to_int(label: str) -> int:
    return POSITIVE if label == "positive" else NEGATIVE


def int_to_label(y: int) -> str:
    return "positive" if y == POSITIVE else "negative"


@dataclass(frozen=True)
class Dataset:
    """``X`` is ``(n, 32)``; ``y`` holds +1 (positive) / -1 (negative)."""

    X: np.ndarray
    y: np.ndarray
    ids: tuple[str, ...]
    level: str = "document"

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape[1] != N_FEATURES:
            raise ValueError(f"X must be (n, {N_FEATURES}), got {self.X.shape}")
        if len(self.y) != self.X.shape[0] or len(self.ids) != self.X.shape[0]:
            raise ValueError("X, y and ids disagree in length")

    def __len__(self) -> int:
        return self.X.shape[0]

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx], tuple(self.ids[i] for i in idx), self.level)

    @property
    def labels(self) -> list[str]:
        return [int_to_label(v) for v in self.y]


def build_dataset(corpus: Corpus, index: LexiconIndex, level: str = "document",
                  recompute_doc_ratios: bool = False) -> Dataset:
    """Featurize a corpus. Sentence level makes every sentence its own instance."""
    if level == "document":
        rows = [featurize_document(d, index, recompute_doc_ratios).values for d in corpus.documents]
        y = [label_to_int(d.label) for d in corpus.documents]
        ids = [d.id for d in corpus.documents]
    elif level == "sentence":
        inst = corpus.sentence_instances()
        rows = [sentence_features(s, index).values for _, _, s in inst]
        y = [label_to_int(s.label) for _, _, s in inst]
        ids = [i for i, _, _ in inst]
    else:
        raise ValueError(f"unknown level {level!r}")
    X = np.vstack(rows) if rows else np.zeros((0, N_FEATURES))
    return Dataset(X, np.asarray(y, dtype=np.int64), tuple(ids), level)


def write_matrix(data: Dataset, out, manifest_lines=()) -> None:
    """Comma-separated ``id,label,<32 feature columns>`` with a '#' manifest header."""
    for line in manifest_lines:
        out.write(f"# {line}\n")
    out.write(",".join(("id", "label") + FEATURE_NAMES) + "\n")
    for doc_id, y, row in zip(data.ids, data.y, data.X):
        out.write(",".join([doc_id, int_to_label(int(y))] + [repr(float(x)) for x in row]) + "\n")
