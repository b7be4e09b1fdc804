"""Interpolated Kneser-Ney n-gram language model over BPE subwords.

Serves as the built-in causal scorer so the whole pipeline can run
without any neural model. The top order uses raw counts; lower orders
use continuation counts; a uniform distribution over the full vocabulary
(including EOS) anchors the recursion, so every id has strictly positive
probability and each context's distribution sums to one exactly.

A context whose count is zero backs off to the next-lower order
unchanged, which also covers arbitrary unseen contexts at score time.
"""

from __future__ import annotations

import gzip
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .bpe import BpeModel, Encoder, MODEL_FORMAT as BPE_FORMAT
from .corpus import Corpus

__all__ = [
    "NgramModel",
    "NgramError",
    "train_ngram",
    "save_ngram",
    "load_ngram",
]

MODEL_FORMAT = "ngram-v1"
DEFAULT_ORDER = 3
DEFAULT_DISCOUNT = 0.75


class NgramError(ValueError):
    pass


@dataclass
class NgramModel:
    order: int
    discount: float
    bpe: BpeModel
    # tables[level][context][next] -> count. Level == order holds raw
    # counts; lower levels hold continuation counts. Contexts are tuples
    # of level-1 ids.
    tables: dict[int, dict[tuple[int, ...], dict[int, int]]]
    _aggregates: dict[int, dict[tuple[int, ...], tuple[int, int]]] = field(repr=False, default_factory=dict)
    _bow_mass_cache: dict[tuple[int, ...], float] = field(repr=False, default_factory=dict)
    _bow_ids: frozenset[int] = field(repr=False, default_factory=frozenset)

    def __post_init__(self):
        if not self._aggregates:
            for level, contexts in self.tables.items():
                agg = {}
                for ctx, nexts in contexts.items():
                    agg[ctx] = (sum(nexts.values()), len(nexts))
                self._aggregates[level] = agg
        if not self._bow_ids:
            self._bow_ids = frozenset(
                i for i in range(self.bpe.vocab_size) if self.bpe.is_bow(i)
            ) | {self.eos_id}

    @property
    def vocab_size(self) -> int:
        """Subword vocabulary size, excluding EOS/BOS."""
        return self.bpe.vocab_size

    @property
    def eos_id(self) -> int:
        return self.bpe.vocab_size

    @property
    def bos_id(self) -> int:
        return self.bpe.vocab_size + 1

    @property
    def support_size(self) -> int:
        """Number of predictable outcomes: all subwords plus EOS."""
        return self.bpe.vocab_size + 1

    # -- probabilities ----------------------------------------------------

    def _prob(self, ctx: tuple[int, ...], next_id: int, level: int) -> float:
        if level == 0:
            return 1.0 / self.support_size
        contexts = self.tables[level]
        nexts = contexts.get(ctx)
        if nexts is None:
            return self._prob(ctx[1:], next_id, level - 1)
        denom, distinct = self._aggregates[level][ctx]
        lam = self.discount * distinct / denom
        disc = max(nexts.get(next_id, 0) - self.discount, 0.0) / denom
        return disc + lam * self._prob(ctx[1:], next_id, level - 1)

    def token_prob(self, context: tuple[int, ...] | list[int], next_id: int) -> float:
        if not 0 <= next_id <= self.eos_id:
            raise NgramError(f"next id {next_id} out of range")
        for i in context:
            if not 0 <= i <= self.bos_id:
                raise NgramError(f"context id {i} out of range")
        ctx = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        return self._prob(ctx, next_id, min(len(ctx) + 1, self.order))

    def token_logprob(self, context, next_id: int) -> float:
        return math.log(self.token_prob(context, next_id))

    def _mass(self, ctx: tuple[int, ...], level: int) -> float:
        if level == 0:
            return len(self._bow_ids) / self.support_size
        contexts = self.tables[level]
        nexts = contexts.get(ctx)
        if nexts is None:
            return self._mass(ctx[1:], level - 1)
        denom, distinct = self._aggregates[level][ctx]
        lam = self.discount * distinct / denom
        disc = sum(
            max(c - self.discount, 0.0)
            for w, c in nexts.items()
            if w in self._bow_ids
        ) / denom
        return disc + lam * self._mass(ctx[1:], level - 1)

    def bow_mass_prob(self, context) -> float:
        """Probability that the next token starts a new word or ends the
        sentence: the summed mass of BOW-marked ids plus EOS."""
        ctx = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        cached = self._bow_mass_cache.get(ctx)
        if cached is None:
            cached = self._mass(ctx, min(len(ctx) + 1, self.order))
            self._bow_mass_cache[ctx] = cached
        return cached

    def bow_mass_logprob(self, context) -> float:
        return math.log(self.bow_mass_prob(context))

    # -- sequence scoring --------------------------------------------------

    def padded_ids(self, subword_ids) -> list[int]:
        return [self.bos_id] * (self.order - 1) + list(subword_ids)

    def sentence_token_scores(self, subword_ids) -> list[dict]:
        """Per-position log-probability and trailing boundary mass for one
        sentence, the raw material of a causal ScoreRecord."""
        padded = self.padded_ids(subword_ids)
        n_pad = self.order - 1
        out = []
        for j, token in enumerate(subword_ids):
            ctx = padded[: n_pad + j]
            lp = self.token_logprob(ctx, token)
            bma = self.bow_mass_logprob(padded[: n_pad + j + 1])
            out.append({"lp": lp, "bow_mass_after": bma})
        return out

    def word_logprob(self, subword_ids, word_spans, word_index: int) -> float:
        """Boundary-corrected log-probability of one word: summed subword
        log-probabilities, plus the boundary mass after the word's last
        subword, minus the mass after the preceding subword (zero for the
        sentence-initial word). Direct in-model computation; the JSONL
        scoring path must agree with this to 1e-9."""
        start, end = word_spans[word_index]
        padded = self.padded_ids(subword_ids)
        n_pad = self.order - 1
        total = 0.0
        for t in range(start, end):
            total += self.token_logprob(padded[: n_pad + t], subword_ids[t])
        total += self.bow_mass_logprob(padded[: n_pad + end])
        if start > 0:
            total -= self.bow_mass_logprob(padded[: n_pad + start])
        return total


def train_ngram(corpus: Corpus, bpe: BpeModel, order: int = DEFAULT_ORDER,
                discount: float = DEFAULT_DISCOUNT) -> NgramModel:
    """Count n-grams over the BPE-encoded corpus and build the model.

    Deterministic for a given corpus, tokenizer, order, and discount.
    """
    if order < 1:
        raise NgramError(f"order must be >= 1, got {order}")
    if not 0.0 < discount < 1.0:
        raise NgramError(f"discount must be in (0, 1), got {discount}")
    if not corpus.sentences:
        raise NgramError(f"corpus {corpus.id!r} is empty")

    encoder = Encoder(bpe)
    eos = bpe.vocab_size
    bos = bpe.vocab_size + 1

    raw: dict[int, dict[tuple[int, ...], dict[int, int]]] = {
        m: {} for m in range(1, order + 1)
    }
    for sent in corpus.sentences:
        ids = list(encoder.encode(sent).subword_ids)
        padded = [bos] * (order - 1) + ids + [eos]
        for i in range(order - 1, len(padded)):
            for m in range(1, order + 1):
                ctx = tuple(padded[i - m + 1: i])
                bucket = raw[m].setdefault(ctx, {})
                bucket[padded[i]] = bucket.get(padded[i], 0) + 1

    tables: dict[int, dict[tuple[int, ...], dict[int, int]]] = {order: raw[order]}
    # Continuation counts: at level m, count the distinct predecessor types
    # of each (m)-gram, read off the distinct raw (m+1)-grams.
    for m in range(order - 1, 0, -1):
        cont: dict[tuple[int, ...], dict[int, int]] = {}
        for ctx, nexts in raw[m + 1].items():
            sub_ctx = ctx[1:]
            for w in nexts:
                bucket = cont.setdefault(sub_ctx, {})
                bucket[w] = bucket.get(w, 0) + 1
        tables[m] = cont

    return NgramModel(order=order, discount=discount, bpe=bpe, tables=tables)


# -- serialization ---------------------------------------------------------

def save_ngram(model: NgramModel, path: str | Path,
               manifest: dict | None = None) -> None:
    """Gzipped JSON dump; mtime pinned so identical models produce
    byte-identical files."""
    tables_enc = {}
    for level in sorted(model.tables):
        contexts = model.tables[level]
        tables_enc[str(level)] = {
            " ".join(map(str, ctx)): {str(w): c for w, c in sorted(nexts.items())}
            for ctx, nexts in sorted(contexts.items())
        }
    payload = {
        "format": MODEL_FORMAT,
        "order": model.order,
        "discount": model.discount,
        "tables": tables_enc,
        "tokenizer": {
            "format": BPE_FORMAT,
            "vocab": list(model.bpe.vocab),
            "merges": [list(p) for p in model.bpe.merges],
            "bow_marker": model.bpe.bow_marker,
            "vocab_size": model.bpe.vocab_size,
        },
    }
    if manifest is not None:
        payload["manifest"] = manifest
    data = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as f:
        # filename pinned empty and mtime zeroed: identical models must
        # serialize to byte-identical files regardless of path or clock.
        with gzip.GzipFile(filename="", fileobj=f, mode="wb", mtime=0) as gz:
            gz.write(data)


def load_ngram(path: str | Path) -> NgramModel:
    with open(path, "rb") as f:
        with gzip.GzipFile(fileobj=f, mode="rb") as gz:
            payload = json.loads(gz.read().decode("utf-8"))
    if payload.get("format") != MODEL_FORMAT:
        raise NgramError(f"unsupported n-gram model format in {path}")
    tok = payload["tokenizer"]
    bpe = BpeModel(
        vocab=tuple(tok["vocab"]),
        merges=tuple((a, b) for a, b in tok["merges"]),
        bow_marker=tok["bow_marker"],
    )
    tables: dict[int, dict[tuple[int, ...], dict[int, int]]] = {}
    for level_str, contexts in payload["tables"].items():
        level = int(level_str)
        tables[level] = {
            tuple(int(x) for x in ctx_str.split()) if ctx_str else (): {
                int(w): c for w, c in nexts.items()
            }
            for ctx_str, nexts in contexts.items()
        }
    return NgramModel(
        order=payload["order"],
        discount=payload["discount"],
        bpe=bpe,
        tables=tables,
    )
