"""SentiWordNet 3.0 reader and (lemma, POS) polarity lookup.

The distributed file is tab separated with six columns::

    POS  ID  PosScore  NegScore  SynsetTerms  Gloss

``SynsetTerms`` is a space separated list of ``lemma#sense_rank`` tokens.
Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

log = logging.getLogger(__name__)

WORD_CLASSES = ("a", "n", "v", "r")
AGGREGATION_MODES = ("rank-weighted", "first-sense", "uniform")

# SentiWordNet 3.0 also tags adjective satellites as "s" in some derived files.
_POS_ALIASES = {"s": "a"}
_SCORE_TOL = 1e-9


class LexiconParseError(ValueError):
    """Malformed lexicon line. ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class SynsetEntry:
    pos: str
    synset_id: int
    pos_score: float
    neg_score: float
    terms: tuple[tuple[str, int], ...]

    @property
    def obj_score(self) -> float:
        return 1.0 - self.pos_score - self.neg_score


@dataclass(frozen=True)
class WordSentiment:
    pos_score: float = 0.0
    neg_score: float = 0.0
    found: bool = False


NOT_FOUND = WordSentiment()


@dataclass
class LexiconIndex:
    """Sense-ranked polarity scores keyed by ``(lemma, pos)``.

    ``senses[(lemma, pos)]`` is a list of ``(sense_rank, pos_score, neg_score)``
    sorted by rank. The index is treated as immutable once built.
    """

    senses: dict[tuple[str, str], list[tuple[int, float, float]]] = field(default_factory=dict)
    aggregation_mode: str = "rank-weighted"
    n_entries: int = 0
    n_duplicates: int = 0

    def __post_init__(self):
        if self.aggregation_mode not in AGGREGATION_MODES:
            raise ValueError(f"unknown aggregation mode {self.aggregation_mode!r}")
        self._cache: dict[tuple[str, str], WordSentiment] = {}

    def __len__(self) -> int:
        return len(self.senses)

    def with_mode(self, mode: str) -> "LexiconIndex":
        """Same sense table, different aggregation."""
        return LexiconIndex(self.senses, mode, self.n_entries, self.n_duplicates)

    def scaled(self, factor: float) -> "LexiconIndex":
        """Copy with every score multiplied by ``factor`` (for invariance checks)."""
        senses = {
            key: [(r, p * factor, n * factor) for r, p, n in lst]
            for key, lst in self.senses.items()
        }
        return LexiconIndex(senses, self.aggregation_mode, self.n_entries, self.n_duplicates)

    def lookup(self, lemma: str, pos: str | None) -> WordSentiment:
        return lookup(self, lemma, pos)

    def records(self) -> Iterator[tuple[str, str, int, float, float]]:
        """Flatten back to ``(lemma, pos, rank, pos_score, neg_score)`` tuples."""
        for (lemma, pos), lst in sorted(self.senses.items()):
            for rank, p, n in lst:
                yield lemma, pos, rank, p, n


def _parse_score(text: str, lineno: int, name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise LexiconParseError(lineno, f"non-numeric {name} {text!r}") from None
    if not (0.0 <= value <= 1.0):
        raise LexiconParseError(lineno, f"{name} {value} outside [0, 1]")
    return value


def parse_line(line: str, lineno: int) -> SynsetEntry | None:
    """Parse one line. Returns None for comments and blank lines."""
    stripped = line.rstrip("\r\n")
    if not stripped.strip() or stripped.lstrip().startswith("#"):
        return None
    fields = stripped.split("\t")
    if len(fields) != 6:
        raise LexiconParseError(lineno, f"expected 6 tab-separated fields, got {len(fields)}")
    pos_tag, sid, ps, ns, terms_field, _gloss = fields
    pos_tag = _POS_ALIASES.get(pos_tag.strip(), pos_tag.strip())
    if pos_tag not in WORD_CLASSES:
        raise LexiconParseError(lineno, f"unknown POS {pos_tag!r}")
    try:
        synset_id = int(sid)
    except ValueError:
        raise LexiconParseError(lineno, f"non-integer synset id {sid!r}") from None
    pos_score = _parse_score(ps, lineno, "PosScore")
    neg_score = _parse_score(ns, lineno, "NegScore")
    if pos_score + neg_score > 1.0 + _SCORE_TOL:
        raise LexiconParseError(lineno, f"PosScore + NegScore = {pos_score + neg_score} > 1")

    terms = []
    for token in terms_field.split():
        lemma, sep, rank = token.rpartition("#")
        if not sep or not lemma:
            raise LexiconParseError(lineno, f"bad synset term {token!r}")
        try:
            sense_rank = int(rank)
        except ValueError:
            raise LexiconParseError(lineno, f"bad sense rank in {token!r}") from None
        if sense_rank < 1:
            raise LexiconParseError(lineno, f"sense rank {sense_rank} < 1 in {token!r}")
        terms.append((lemma.lower(), sense_rank))
    if not terms:
        raise LexiconParseError(lineno, "empty SynsetTerms")
    return SynsetEntry(pos_tag, synset_id, pos_score, neg_score, tuple(terms))


def iter_entries(source: Iterable[str]) -> Iterator[SynsetEntry]:
    for lineno, line in enumerate(source, start=1):
        entry = parse_line(line, lineno)
        if entry is not None:
            yield entry


def parse_lexicon(source: Iterable[str] | str, aggregation_mode: str = "rank-weighted") -> LexiconIndex:
    """Build a :class:`LexiconIndex` from SentiWordNet text.

    ``source`` is any iterable of lines (an open file works) or a whole
    document as a single string. Duplicate ``(lemma, pos, rank)`` triples keep
    the first occurrence; the number dropped is kept in ``n_duplicates``.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    table: dict[tuple[str, str], dict[int, tuple[float, float]]] = {}
    n_entries = n_dup = 0
    for entry in iter_entries(source):
        n_entries += 1
        for lemma, rank in entry.terms:
            ranks = table.setdefault((lemma, entry.pos), {})
            if rank in ranks:
                n_dup += 1
                continue
            ranks[rank] = (entry.pos_score, entry.neg_score)
    if n_dup:
        log.warning("lexicon: %d duplicate (lemma, pos, rank) records ignored", n_dup)
    senses = {
        key: [(r, p, n) for r, (p, n) in sorted(ranks.items())]
        for key, ranks in table.items()
    }
    return LexiconIndex(senses, aggregation_mode, n_entries, n_dup)


def load_lexicon(path: str | os.PathLike, aggregation_mode: str = "rank-weighted") -> LexiconIndex:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh, aggregation_mode)


def _aggregate(lst: list[tuple[int, float, float]], mode: str) -> tuple[float, float]:
    if mode == "first-sense":
        _, p, n = lst[0]
        return p, n
    if mode == "uniform":
        weights = [1.0] * len(lst)
    else:
        weights = [1.0 / r for r, _, _ in lst]
    total = sum(weights)
    pos = sum(w * p for w, (_, p, _) in zip(weights, lst)) / total
    neg = sum(w * n for w, (_, _, n) in zip(weights, lst)) / total
    return pos, neg


def lookup(index: LexiconIndex, lemma: str, pos: str | None) -> WordSentiment:
    """Aggregated polarity of ``lemma`` as word class ``pos``.

    Absent words (or ``pos is None``) give a zero, not-found result.
    """
    if pos is None:
        return NOT_FOUND
    key = (lemma.lower(), pos)
    hit = index._cache.get(key)
    if hit is not None:
        return hit
    lst = index.senses.get(key)
    if not lst:
        return NOT_FOUND
    p, n = _aggregate(lst, index.aggregation_mode)
    hit = WordSentiment(p, n, True)
    index._cache[key] = hit
    return hit


def validate(source: TextIO) -> tuple[int, list[LexiconParseError]]:
    """Scan every line and collect errors instead of stopping at the first.

    Returns ``(entry_count, errors)``.
    """
    count = 0
    errors = []
    for lineno, line in enumerate(source, start=1):
        try:
            if parse_line(line, lineno) is not None:
                count += 1
        except LexiconParseError as exc:
            errors.append(exc)
    return count, errors
