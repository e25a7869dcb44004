"""Labeled cross-domain review corpora.

Interchange format is JSON Lines, one document per line::

    {"id": "books-001", "domain": "books", "label": "positive",
     "sentences": [{"label": "positive", "text": "A gripping read ."},
                   {"label": "negative", "tokens": [["dull", "JJ"], ["ending", "NN"]]}]}

Sentences either carry ``tokens`` as ``[surface, ptb_tag]`` pairs (e.g. from
the Stanford tagger) or raw ``text``, which goes through :func:`fallback_tag`.
"""
from __future__ import annotations

import json
import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

log = logging.getLogger(__name__)

DOMAINS = ("books", "dvds", "electronics", "music", "videogames")
POLARITIES = ("positive", "negative")
NEUTRAL = "neutral"


class CorpusError(ValueError):
    """Bad corpus record. Carries the offending record id (or line) and field."""

    def __init__(self, record: str, fieldname: str, message: str):
        super().__init__(f"record {record}: field {fieldname!r}: {message}")
        self.record = record
        self.field = fieldname


# ---------------------------------------------------------------- tagging

_PTB_TO_WN = {
    "JJ": "a", "JJR": "a", "JJS": "a",
    "NN": "n", "NNS": "n", "NNP": "n", "NNPS": "n",
    "VB": "v", "VBD": "v", "VBG": "v", "VBN": "v", "VBP": "v", "VBZ": "v",
    "RB": "r", "RBR": "r", "RBS": "r",
}


def map_tag(ptb_tag: str) -> str | None:
    """Penn Treebank tag to WordNet word class (a, n, v, r), else None."""
    return _PTB_TO_WN.get(ptb_tag)


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    ptb_tag: str

    @property
    def wn_pos(self) -> str | None:
        return map_tag(self.ptb_tag)


_CLOSED_CLASS = {
    "DT": "a an the this that these those every each some any no another either neither",
    "PRP": "i me you he him she her it we us they them myself yourself itself themselves",
    "PRP$": "my your his its our their",
    "IN": "of in on at by for with about against between into through during before after "
          "above below from up down over under than because while although though if since "
          "until unless whether as like",
    "CC": "and or but nor yet so",
    "MD": "can could may might must shall should will would",
    "TO": "to",
    "WDT": "which whatever",
    "WP": "who whom what",
    "WRB": "when where why how",
    "EX": "there",
    "RB": "not n't never very too also just only really quite rather so almost always "
          "often still even here now then again",
    "VBZ": "is has does 's",
    "VBP": "am are have do 're 've 'm",
    "VBD": "was were had did",
    "VB": "be",
    "VBN": "been",
    "VBG": "being",
}
_CLOSED_LOOKUP = {w: tag for tag, words in _CLOSED_CLASS.items() for w in words.split()}
# ("suffix", tag), first match wins
_SUFFIX_RULES = (
    ("ly", "RB"),
    ("ing", "VBG"),
    ("ed", "VBD"),
    ("ous", "JJ"),
    ("ful", "JJ"),
    ("able", "JJ"),
    ("ive", "JJ"),
)
_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*|n't|'[a-z]+|[^\sA-Za-z0-9]")
_PUNCT_TAGS = {",": ",", ":": ":", ";": ":", "(": "-LRB-", ")": "-RRB-", "$": "$", "#": "#"}


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def _tag_word(word: str) -> str:
    low = word.lower()
    if low in _CLOSED_LOOKUP:
        return _CLOSED_LOOKUP[low]
    if not any(ch.isalnum() for ch in word):
        return _PUNCT_TAGS.get(word, ".")
    if low.replace(".", "").replace(",", "").isdigit():
        return "CD"
    for suffix, tag in _SUFFIX_RULES:
        # keep a stem of at least two letters so "red", "bed", "sing" stay nouns
        if low.endswith(suffix) and len(low) >= len(suffix) + 2:
            return tag
    return "NN"


def fallback_tag(sentence_text: str) -> list[TaggedToken]:
    """Crude rule-based tagger used when no tagger output is supplied."""
    return [TaggedToken(tok, _tag_word(tok)) for tok in tokenize(sentence_text)]


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class Sentence:
    tokens: tuple[TaggedToken, ...]
    label: str
    text: str | None = None


@dataclass(frozen=True)
class ReviewDocument:
    id: str
    domain: str
    label: str
    sentences: tuple[Sentence, ...]


@dataclass
class Corpus:
    documents: list[ReviewDocument] = field(default_factory=list)
    n_dropped_documents: int = 0
    n_dropped_sentences: int = 0

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def sentence_instances(self) -> list[tuple[str, str, Sentence]]:
        """(id, domain, sentence) for sentence-level experiments."""
        return [
            (f"{doc.id}#{i}", doc.domain, s)
            for doc in self.documents
            for i, s in enumerate(doc.sentences)
        ]


def _normalize_label(value, record: str, fieldname: str) -> str:
    if not isinstance(value, str) or value.lower() not in POLARITIES + (NEUTRAL,):
        raise CorpusError(record, fieldname, f"unknown label {value!r}")
    return value.lower()


def _parse_sentence(raw, record: str, idx: int) -> Sentence | None:
    where = f"sentences[{idx}]"
    if not isinstance(raw, dict):
        raise CorpusError(record, where, "expected an object")
    label = _normalize_label(raw.get("label"), record, f"{where}.label")
    text = raw.get("text")
    tokens_raw = raw.get("tokens")
    if tokens_raw is not None:
        try:
            tokens = tuple(TaggedToken(str(s), str(t)) for s, t in tokens_raw)
        except (TypeError, ValueError):
            raise CorpusError(record, f"{where}.tokens", "expected [surface, tag] pairs") from None
    elif isinstance(text, str):
        tokens = tuple(fallback_tag(text))
    else:
        raise CorpusError(record, where, "needs 'tokens' or 'text'")
    if not tokens:
        raise CorpusError(record, where, "empty sentence")
    if label == NEUTRAL:
        return None
    return Sentence(tokens, label, text if isinstance(text, str) else None)


def parse_record(obj: dict, lineno: int = 0) -> tuple[ReviewDocument | None, int]:
    """Parse one document record.

    Returns ``(document or None, number of neutral sentences dropped)``.
    The document is None when it is neutral or has no polar sentence left.
    """
    record = str(obj.get("id", f"<line {lineno}>")) if isinstance(obj, dict) else f"<line {lineno}>"
    if not isinstance(obj, dict):
        raise CorpusError(record, "*", "expected an object")
    doc_id = obj.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusError(record, "id", "missing or non-string id")
    domain = obj.get("domain")
    if not isinstance(domain, str) or domain.lower() not in DOMAINS:
        raise CorpusError(record, "domain", f"unknown domain {domain!r}")
    label = _normalize_label(obj.get("label"), record, "label")
    raw_sentences = obj.get("sentences")
    if not isinstance(raw_sentences, list) or not raw_sentences:
        raise CorpusError(record, "sentences", "missing or empty")
    parsed = [_parse_sentence(s, record, i) for i, s in enumerate(raw_sentences)]
    kept = tuple(s for s in parsed if s is not None)
    dropped = len(parsed) - len(kept)
    if label == NEUTRAL or not kept:
        return None, dropped
    return ReviewDocument(doc_id, domain.lower(), label, kept), dropped


def load_corpus(source: Iterable[str] | str | os.PathLike) -> Corpus:
    """Read a JSON Lines corpus from a path or an iterable of lines.

    Neutral documents and neutral sentences are dropped and counted.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return load_corpus(list(fh))
    corpus = Corpus()
    seen: set[str] = set()
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"<line {lineno}>", "*", f"invalid JSON: {exc.msg}") from None
        doc, dropped = parse_record(obj, lineno)
        corpus.n_dropped_sentences += dropped
        if doc is None:
            corpus.n_dropped_documents += 1
            continue
        if doc.id in seen:
            raise CorpusError(doc.id, "id", "duplicate id")
        seen.add(doc.id)
        corpus.documents.append(doc)
    if corpus.n_dropped_documents or corpus.n_dropped_sentences:
        log.warning(
            "corpus: dropped %d neutral documents and %d neutral sentences",
            corpus.n_dropped_documents, corpus.n_dropped_sentences,
        )
    return corpus


def document_record(doc: ReviewDocument) -> dict:
    return {
        "id": doc.id,
        "domain": doc.domain,
        "label": doc.label,
        "sentences": [
            {"label": s.label, "tokens": [[t.surface, t.ptb_tag] for t in s.tokens]}
            for s in doc.sentences
        ],
    }


def save_corpus(corpus: Corpus, out: TextIO) -> None:
    """Write the retained content back out, always with explicit tokens."""
    for doc in corpus.documents:
        out.write(json.dumps(document_record(doc), ensure_ascii=False) + "\n")


# Label codes of the original fine-grained release: pos/neg/neu, plus mix and
# nr (not relevant) which are not polar and are mapped to neutral.
_FG_LABELS = {"pos": "positive", "neg": "negative", "neu": NEUTRAL, "mix": NEUTRAL, "nr": NEUTRAL}
_FG_DOMAINS = {"books": "books", "dvd": "dvds", "dvds": "dvds", "electronics": "electronics",
               "music": "music", "videogames": "videogames", "video_games": "videogames"}


def convert_finegrained(lines: Iterable[str]) -> Iterable[dict]:
    """Best-effort converter from the original fine-grained text release.

    Expects blank-line separated blocks; the first line of a block is a
    header ``<domain>_<label>_<n>[...]:<label>`` and each following line is
    ``<label>\\t<sentence text>``. Yields interchange records.
    """
    block: list[str] = []

    def flush():
        if not block:
            return None
        header, *body = block
        name, _, doc_label = header.strip().rpartition(":")
        domain = _FG_DOMAINS.get(name.split("_")[0].lower())
        if domain is None:
            raise CorpusError(name or header, "domain", "cannot infer domain from header")
        sentences = []
        for line in body:
            lab, _, text = line.partition("\t")
            sentences.append({"label": _FG_LABELS.get(lab.strip().lower(), lab.strip()),
                              "text": text.strip()})
        return {"id": name, "domain": domain,
                "label": _FG_LABELS.get(doc_label.strip().lower(), doc_label.strip()),
                "sentences": sentences}

    for line in lines:
        if line.strip():
            block.append(line.rstrip("\n"))
            continue
        rec = flush()
        block = []
        if rec is not None:
            yield rec
    rec = flush()
    if rec is not None:
        yield rec


def corpus_stats(corpus: Corpus) -> dict[str, Counter]:
    """Document and sentence counts keyed by (label, domain)."""
    docs: Counter = Counter()
    sents: Counter = Counter()
    for doc in corpus.documents:
        docs[doc.label, doc.domain] += 1
        for s in doc.sentences:
            sents[s.label, doc.domain] += 1
    return {"documents": docs, "sentences": sents}


# ---------------------------------------------------------------- folds

def stratified_fold_indices(strata: Sequence, k: int, seed: int) -> np.ndarray:
    """Fold index in ``[0, k)`` for each position, stratified by ``strata``.

    Each stratum is shuffled with a generator seeded by ``seed`` and dealt
    round-robin. The dealing position carries over between strata so total
    fold sizes stay balanced too.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    strata = list(strata)
    rng = np.random.default_rng(seed)
    folds = np.empty(len(strata), dtype=np.int64)
    groups: dict = {}
    for i, s in enumerate(strata):
        groups.setdefault(s, []).append(i)
    offset = 0
    for key in sorted(groups, key=repr):
        members = np.asarray(groups[key])
        order = members[rng.permutation(len(members))]
        folds[order] = (offset + np.arange(len(order))) % k
        offset = (offset + len(order)) % k
    return folds


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    assignment: dict[str, int]

    def fold(self, i: int) -> list[str]:
        return [doc_id for doc_id, f in self.assignment.items() if f == i]


def stratified_folds(corpus: Corpus, k: int, seed: int, by_domain: bool = False) -> FoldAssignment:
    if by_domain:
        strata = [(d.label, d.domain) for d in corpus.documents]
    else:
        strata = [d.label for d in corpus.documents]
    folds = stratified_fold_indices(strata, k, seed)
    return FoldAssignment(k, {d.id: int(f) for d, f in zip(corpus.documents, folds)})
