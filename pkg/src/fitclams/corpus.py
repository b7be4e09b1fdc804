"""Sentence-per-line corpora and their descriptive statistics."""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

__all__ = [
    "Sentence",
    "Corpus",
    "CorpusStats",
    "CorpusError",
    "load_corpus",
    "compute_stats",
    "word_frequencies",
    "write_frequencies_tsv",
    "read_frequencies_tsv",
]


class CorpusError(ValueError):
    """Raised for unreadable input or a corpus that is empty where a
    non-empty one is required."""


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[str, ...]
    is_interrogative: bool


@dataclass(frozen=True)
class Corpus:
    """An ordered list of sentences with a stable identity.

    Instances are immutable after load and safe to share across workers.
    """

    id: str
    sentences: tuple[Sentence, ...]
    language: str = "other"

    def __len__(self) -> int:
        return len(self.sentences)

    def token_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)


@dataclass(frozen=True)
class CorpusStats:
    token_count: int
    avg_sentence_length: float
    # ttr[n] is absent (None) when the corpus has no n-grams of that size.
    ttr: dict[int, Optional[float]] = field(default_factory=dict)
    interrogative_fraction: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "token_count": self.token_count,
            "avg_sentence_length": self.avg_sentence_length,
            "ttr_1": self.ttr.get(1),
            "ttr_2": self.ttr.get(2),
            "ttr_3": self.ttr.get(3),
            "interrogative_fraction": self.interrogative_fraction,
        }


def load_corpus(path: str | Path, case: str = "lower", corpus_id: str | None = None,
                language: str = "other") -> Corpus:
    """Read a UTF-8, one-sentence-per-line file into a Corpus.

    Blank lines are skipped, tokens are whitespace-split, and the
    interrogative flag is set when the line's final non-whitespace
    character is "?" (checked before any later punctuation stripping).
    `case` is "lower" or "preserve".
    """
    if case not in ("lower", "preserve"):
        raise ValueError(f"unknown case mode: {case!r}")
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    sentences = []
    for lineno, line_bytes in enumerate(raw.split(b"\n"), start=1):
        try:
            line = line_bytes.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusError(f"{path}:{lineno}: invalid UTF-8 ({exc})") from exc
        stripped = line.strip()
        if not stripped:
            continue
        is_q = stripped.endswith("?")
        if case == "lower":
            stripped = stripped.lower()
        sentences.append(Sentence(tokens=tuple(stripped.split()), is_interrogative=is_q))

    return Corpus(id=corpus_id or path.stem, sentences=tuple(sentences), language=language)


def _is_punctuation(token: str, punct: Optional[frozenset[str]]) -> bool:
    if punct is not None:
        return token in punct
    # Default set: tokens made entirely of Unicode punctuation characters.
    return all(unicodedata.category(ch).startswith("P") for ch in token)


def compute_stats(corpus: Corpus, punctuation_policy: str = "exclude",
                  punctuation: Optional[Iterable[str]] = None) -> CorpusStats:
    """Token count, average sentence length, 1/2/3-gram type-token ratios,
    and interrogative fraction.

    With ``punctuation_policy="exclude"`` punctuation tokens are removed
    before counting (default set: tokens consisting only of Unicode
    punctuation). N-grams never cross sentence boundaries. Sentences left
    empty by punctuation removal still count toward the sentence total.
    """
    if punctuation_policy not in ("include", "exclude"):
        raise ValueError(f"unknown punctuation policy: {punctuation_policy!r}")
    if not corpus.sentences:
        raise CorpusError(f"corpus {corpus.id!r} is empty")

    punct = frozenset(punctuation) if punctuation is not None else None
    exclude = punctuation_policy == "exclude"

    total_tokens = 0
    ngram_totals = {1: 0, 2: 0, 3: 0}
    ngram_types: dict[int, set] = {1: set(), 2: set(), 3: set()}
    n_interrogative = 0

    for sent in corpus.sentences:
        if sent.is_interrogative:
            n_interrogative += 1
        tokens = sent.tokens
        if exclude:
            tokens = tuple(t for t in tokens if not _is_punctuation(t, punct))
        total_tokens += len(tokens)
        for n in (1, 2, 3):
            count = len(tokens) - n + 1
            if count <= 0:
                continue
            ngram_totals[n] += count
            if n == 1:
                ngram_types[1].update(tokens)
            else:
                ngram_types[n].update(tokens[i:i + n] for i in range(count))

    if total_tokens == 0:
        raise CorpusError(
            f"corpus {corpus.id!r} has no tokens after punctuation removal")

    ttr: dict[int, Optional[float]] = {}
    for n in (1, 2, 3):
        if ngram_totals[n] == 0:
            ttr[n] = None
        else:
            ttr[n] = len(ngram_types[n]) / ngram_totals[n]

    return CorpusStats(
        token_count=total_tokens,
        avg_sentence_length=total_tokens / len(corpus.sentences),
        ttr=ttr,
        interrogative_fraction=n_interrogative / len(corpus.sentences),
    )


def word_frequencies(corpus: Corpus) -> dict[str, int]:
    """Exact surface-form counts. Iteration order is lexicographic so that
    serialization is deterministic."""
    counts = Counter()
    for sent in corpus.sentences:
        counts.update(sent.tokens)
    return dict(sorted(counts.items()))


def write_frequencies_tsv(freqs: dict[str, int], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for form in sorted(freqs):
            f.write(f"{form}\t{freqs[form]}\n")


def read_frequencies_tsv(path: str | Path) -> dict[str, int]:
    freqs: dict[str, int] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                form, count = line.split("\t")
                freqs[form] = int(count)
            except ValueError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed frequency line") from exc
    return freqs


def stats_to_json(stats: CorpusStats) -> str:
    return json.dumps(stats.to_json_dict(), sort_keys=True, ensure_ascii=False)
