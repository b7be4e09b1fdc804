"""Byte-pair-encoding tokenizer with beginning-of-word marking.

Words are split to characters behind a BOW marker symbol, then pairs are
merged greedily by frequency. The marker only ever occurs word-initially,
so every word span starts with exactly one BOW-marked subword, which is
what the boundary-mass correction in the scoring modules relies on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from ._kernels import bpe as _kernel
from .corpus import Corpus, Sentence

__all__ = [
    "BpeModel",
    "TokenizedSentence",
    "TokenizerError",
    "train_bpe",
    "Encoder",
    "decode",
    "save_model",
    "load_model",
]

DEFAULT_VOCAB_SIZE = 8192
BOW_MARKER = "▁"

MODEL_FORMAT = "bpe-v1"


class TokenizerError(ValueError):
    pass


@dataclass(frozen=True)
class BpeModel:
    vocab: tuple[str, ...]                 # id -> subword string, dense ids
    merges: tuple[tuple[str, str], ...]    # symbol pairs in training order
    bow_marker: str = BOW_MARKER

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def is_bow(self, subword_id: int) -> bool:
        return self.vocab[subword_id].startswith(self.bow_marker)


@dataclass(frozen=True)
class TokenizedSentence:
    subword_ids: tuple[int, ...]
    is_bow: tuple[bool, ...]
    word_spans: tuple[tuple[int, int], ...]  # [start, end) per word

    def __len__(self) -> int:
        return len(self.subword_ids)


def train_bpe(corpus: Corpus, vocab_size: int = DEFAULT_VOCAB_SIZE,
              bow_marker: str = BOW_MARKER) -> BpeModel:
    """Train a BPE model; `vocab_size` covers the base alphabet plus merges.

    Deterministic: merge ties break on (higher count, lexicographically
    smaller symbol pair). Raises TokenizerError when vocab_size cannot hold
    the base alphabet.
    """
    word_counts: dict[str, int] = {}
    for sent in corpus.sentences:
        for token in sent.tokens:
            word_counts[token] = word_counts.get(token, 0) + 1
    if not word_counts:
        raise TokenizerError(f"corpus {corpus.id!r} has no tokens")

    alphabet = {bow_marker}
    for word in word_counts:
        if bow_marker in word:
            raise TokenizerError(
                f"word {word!r} contains the BOW marker character {bow_marker!r}")
        alphabet.update(word)
    symbols = sorted(alphabet)
    if vocab_size < len(symbols):
        raise TokenizerError(
            f"vocab_size {vocab_size} is smaller than the base alphabet "
            f"({len(symbols)} symbols)")

    sym_id = {s: i for i, s in enumerate(symbols)}
    # One entry per word type, weighted by its corpus count.
    types = sorted(word_counts)
    words = [[sym_id[bow_marker]] + [sym_id[ch] for ch in word] for word in types]
    counts = [word_counts[word] for word in types]

    # The kernel appends merged symbol strings to `symbols` as it goes, so
    # merge operand ids resolve against the final table.
    merge_ids = _kernel.train_merges(words, counts, symbols, vocab_size - len(symbols))
    merges = tuple((symbols[a], symbols[b]) for a, b in merge_ids)
    return BpeModel(vocab=tuple(symbols), merges=merges, bow_marker=bow_marker)


class Encoder:
    """Applies a trained model to words and sentences.

    Reentrant; per-word results are cached since corpus vocabulary is
    small relative to token count.
    """

    def __init__(self, model: BpeModel):
        self.model = model
        # Symbols resolve by string; should two merges ever yield the same
        # string, the first id wins and stays consistent throughout.
        self._sym_id: dict[str, int] = {}
        for i, s in enumerate(model.vocab):
            self._sym_id.setdefault(s, i)
        self._ranks: dict[tuple[str, str], int] = {}
        for rank, pair in enumerate(model.merges):
            self._ranks.setdefault(pair, rank)
        self._encode_word = lru_cache(maxsize=65536)(self._encode_word_uncached)

    def _encode_word_uncached(self, word: str) -> tuple[int, ...]:
        marker = self.model.bow_marker
        if marker in word:
            raise TokenizerError(
                f"word {word!r} contains the BOW marker character {marker!r}")
        parts = [marker] + list(word)
        for ch in parts:
            if ch not in self._sym_id:
                raise TokenizerError(
                    f"symbol {ch!r} in word {word!r} is not representable; "
                    f"the tokenizer was trained on a different alphabet")
        # Repeatedly merge the lowest-ranked pair present; equivalent to
        # replaying the merge list in training order.
        while len(parts) > 1:
            best_rank = None
            for i in range(len(parts) - 1):
                rank = self._ranks.get((parts[i], parts[i + 1]))
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
            if best_rank is None:
                break
            a, b = self.model.merges[best_rank]
            merged = []
            i = 0
            while i < len(parts):
                if i < len(parts) - 1 and parts[i] == a and parts[i + 1] == b:
                    merged.append(a + b)
                    i += 2
                else:
                    merged.append(parts[i])
                    i += 1
            parts = merged
        return tuple(self._sym_id[p] for p in parts)

    def encode_word(self, word: str) -> tuple[int, ...]:
        return self._encode_word(word)

    def encode(self, sentence: Sentence | list[str] | tuple[str, ...]) -> TokenizedSentence:
        words = sentence.tokens if isinstance(sentence, Sentence) else tuple(sentence)
        ids: list[int] = []
        spans: list[tuple[int, int]] = []
        for word in words:
            piece = self._encode_word(word)
            spans.append((len(ids), len(ids) + len(piece)))
            ids.extend(piece)
        is_bow = tuple(self.model.is_bow(i) for i in ids)
        return TokenizedSentence(subword_ids=tuple(ids), is_bow=is_bow,
                                 word_spans=tuple(spans))


def decode(model: BpeModel, tokenized: TokenizedSentence) -> tuple[str, ...]:
    """Invert encode(); returns the word sequence."""
    words = []
    for start, end in tokenized.word_spans:
        text = "".join(model.vocab[i] for i in tokenized.subword_ids[start:end])
        if not text.startswith(model.bow_marker):
            raise TokenizerError("word span does not start with a BOW subword")
        words.append(text[len(model.bow_marker):])
    return tuple(words)


def save_model(model: BpeModel, path: str | Path, manifest: dict | None = None) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "vocab": list(model.vocab),
        "merges": [list(pair) for pair in model.merges],
        "bow_marker": model.bow_marker,
        "vocab_size": model.vocab_size,
    }
    if manifest is not None:
        payload["manifest"] = manifest
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, sort_keys=True)
        f.write("\n")


def load_model(path: str | Path) -> BpeModel:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != MODEL_FORMAT:
        raise TokenizerError(f"unsupported tokenizer model format in {path}")
    model = BpeModel(
        vocab=tuple(payload["vocab"]),
        merges=tuple((a, b) for a, b in payload["merges"]),
        bow_marker=payload["bow_marker"],
    )
    if model.vocab_size != payload["vocab_size"]:
        raise TokenizerError(f"vocab_size mismatch in {path}")
    return model
