"""Minimal-pair scoring and accuracy aggregation.

Two word-score aggregations over per-token log-probabilities:

* causal: summed subword log-probabilities with the word-boundary
  correction, shifting the mass of "the word ends here" from the next
  token's BOW marker onto the current word. For a word span, that is the
  span's token log-probabilities plus the boundary mass after its last
  subword minus the boundary mass after the subword just before the span
  (zero at the sentence start).
* mlm_pll_word_l2r: plain sum of conditional log-probabilities produced
  under within-word left-to-right masking; the exporter guarantees the
  masking regime, this module only aggregates.

A pair is correct when the grammatical variant scores strictly higher;
ties count as incorrect.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from .benchgen import MinimalPair
from .bpe import Encoder
from .ngram import NgramModel

__all__ = [
    "TokenScore",
    "ScoreRecord",
    "PairResult",
    "ScoringError",
    "word_score_causal",
    "word_score_pll",
    "ngram_score_record",
    "score_pairs",
    "aggregate",
    "read_score_records",
    "write_score_records",
    "validate_score_records",
    "read_results",
    "write_results",
]

MODES = ("causal", "mlm_pll_word_l2r")
REGIONS = ("sequence", "critical")
VARIANTS = ("gram", "ungram")

# Slack for exporters that round-trip through float32: log-probabilities
# must not be meaningfully positive.
LOGPROB_TOLERANCE = 1e-6


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class TokenScore:
    text: str
    is_bow: bool
    logprob: float
    bow_mass_after: Optional[float] = None


@dataclass(frozen=True)
class ScoreRecord:
    pair_id: str
    variant: str                      # "gram" | "ungram"
    mode: str                         # "causal" | "mlm_pll_word_l2r"
    tokens: tuple[TokenScore, ...]
    word_spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PairResult:
    pair_id: str
    delta_p: float
    correct: bool
    mode: str
    region: str
    paradigm: str = ""
    lexicon_source: str = ""


def _subword_range(record: ScoreRecord, word_lo: int, word_hi: int) -> tuple[int, int]:
    if not 0 <= word_lo < word_hi <= len(record.word_spans):
        raise ScoringError(
            f"{record.pair_id}/{record.variant}: word span [{word_lo}, "
            f"{word_hi}) outside {len(record.word_spans)} words")
    return record.word_spans[word_lo][0], record.word_spans[word_hi - 1][1]


def word_score_causal(record: ScoreRecord, word_lo: int, word_hi: int) -> float:
    """Boundary-corrected log-probability of words [word_lo, word_hi)."""
    if record.mode != "causal":
        raise ScoringError(
            f"{record.pair_id}/{record.variant}: causal aggregation on "
            f"{record.mode} record")
    lo, hi = _subword_range(record, word_lo, word_hi)
    total = 0.0
    for t in range(lo, hi):
        total += record.tokens[t].logprob
    trailing = record.tokens[hi - 1].bow_mass_after
    if trailing is None:
        raise ScoringError(
            f"{record.pair_id}/{record.variant}: missing bow_mass_after "
            f"at position {hi - 1}")
    total += trailing
    if lo > 0:
        leading = record.tokens[lo - 1].bow_mass_after
        if leading is None:
            raise ScoringError(
                f"{record.pair_id}/{record.variant}: missing bow_mass_after "
                f"at position {lo - 1}")
        total -= leading
    return total


def word_score_pll(record: ScoreRecord, word_lo: int, word_hi: int) -> float:
    """Pseudo-log-likelihood of words [word_lo, word_hi): plain sum."""
    if record.mode != "mlm_pll_word_l2r":
        raise ScoringError(
            f"{record.pair_id}/{record.variant}: PLL aggregation on "
            f"{record.mode} record")
    lo, hi = _subword_range(record, word_lo, word_hi)
    if lo == hi:
        raise ScoringError(f"{record.pair_id}/{record.variant}: empty span")
    return sum(record.tokens[t].logprob for t in range(lo, hi))


def ngram_score_record(model: NgramModel, encoder: Encoder,
                       pair_id: str, variant: str,
                       words: tuple[str, ...]) -> ScoreRecord:
    """Export one sentence variant from the built-in n-gram scorer."""
    tok = encoder.encode(words)
    scores = model.sentence_token_scores(tok.subword_ids)
    tokens = tuple(
        TokenScore(
            text=model.bpe.vocab[sid],
            is_bow=tok.is_bow[i],
            logprob=scores[i]["lp"],
            bow_mass_after=scores[i]["bow_mass_after"],
        )
        for i, sid in enumerate(tok.subword_ids)
    )
    return ScoreRecord(pair_id=pair_id, variant=variant, mode="causal",
                       tokens=tokens, word_spans=tok.word_spans)


def _score_one(pair: MinimalPair, gram: ScoreRecord, ungram: ScoreRecord,
               region: str, mode: str) -> PairResult:
    if region == "critical":
        lo, hi = pair.critical_start, pair.critical_end
    else:
        lo, hi = 0, len(pair.grammatical)
    if mode == "causal":
        s_gram = word_score_causal(gram, lo, hi)
        s_ungram = word_score_causal(ungram, lo, hi)
    else:
        s_gram = word_score_pll(gram, lo, hi)
        s_ungram = word_score_pll(ungram, lo, hi)
    delta = s_gram - s_ungram
    return PairResult(
        pair_id=pair.pair_id, delta_p=delta, correct=delta > 0.0,
        mode=mode, region=region, paradigm=pair.paradigm,
        lexicon_source=pair.lexicon_source,
    )


def _score_chunk(model: NgramModel, chunk: list[MinimalPair],
                 region: str) -> list[PairResult]:
    encoder = Encoder(model.bpe)
    out = []
    for pair in chunk:
        gram = ngram_score_record(model, encoder, pair.pair_id, "gram",
                                  pair.grammatical)
        ungram = ngram_score_record(model, encoder, pair.pair_id, "ungram",
                                    pair.ungrammatical)
        out.append(_score_one(pair, gram, ungram, region, "causal"))
    return out


def score_pairs(pairs: list[MinimalPair],
                source: Union[NgramModel, dict],
                region: str = "critical",
                mode: str = "causal",
                jobs: int = 1) -> list[PairResult]:
    """Score every pair either with the built-in n-gram model or from a
    mapping (pair_id, variant) -> ScoreRecord read from a score file."""
    if region not in REGIONS:
        raise ScoringError(f"unknown region {region!r}")
    if mode not in MODES:
        raise ScoringError(f"unknown mode {mode!r}")
    ordered = sorted(pairs, key=lambda p: (p.paradigm, p.pair_id))

    if isinstance(source, NgramModel):
        if mode != "causal":
            raise ScoringError(
                "the n-gram scorer is causal only; pseudo-likelihood "
                "records must come from a score file")
        if jobs > 1 and len(ordered) > 1:
            from multiprocessing import get_context

            chunks = [ordered[i::jobs] for i in range(jobs)]
            with get_context("spawn").Pool(jobs) as pool:
                parts = pool.starmap(
                    _score_chunk, [(source, ch, region) for ch in chunks])
            results = [r for part in parts for r in part]
            results.sort(key=lambda r: (r.paradigm, r.pair_id))
            return results
        return _score_chunk(source, ordered, region)

    results = []
    for pair in ordered:
        try:
            gram = source[(pair.pair_id, "gram")]
            ungram = source[(pair.pair_id, "ungram")]
        except KeyError as exc:
            raise ScoringError(
                f"pair {pair.pair_id}: missing scored variant {exc}") from exc
        if gram.mode != mode or ungram.mode != mode:
            raise ScoringError(
                f"pair {pair.pair_id}: records are {gram.mode}, requested {mode}")
        if (len(gram.word_spans) != len(pair.grammatical)
                or len(ungram.word_spans) != len(pair.ungrammatical)):
            raise ScoringError(
                f"pair {pair.pair_id}: word spans do not align with the "
                f"benchmark sentence")
        results.append(_score_one(pair, gram, ungram, region, mode))
    return results


def aggregate(seed_results: list[list[PairResult]]) -> dict:
    """Per-paradigm and overall accuracies with cross-seed mean and sample
    (n-1) standard deviation; the overall accuracy is pair-weighted."""
    if not seed_results:
        raise ScoringError("no result sets to aggregate")

    def _acc(values: list[bool]) -> float:
        return sum(values) / len(values)

    def _mean_std(xs: list[float]) -> tuple[float, float]:
        mean = sum(xs) / len(xs)
        if len(xs) < 2:
            return mean, 0.0
        var = sum((x - mean) ** 2 for x in xs) / (len(xs) - 1)
        return mean, math.sqrt(var)

    paradigms = sorted({r.paradigm for r in seed_results[0]})
    per_paradigm = {}
    for paradigm in paradigms:
        seed_accs = []
        n_pairs = 0
        for results in seed_results:
            flags = [r.correct for r in results if r.paradigm == paradigm]
            if not flags:
                raise ScoringError(
                    f"a seed has no results for paradigm {paradigm!r}")
            n_pairs = len(flags)
            seed_accs.append(_acc(flags))
        mean, std = _mean_std(seed_accs)
        per_paradigm[paradigm] = {
            "seeds": seed_accs, "mean": mean, "std": std, "n_pairs": n_pairs,
        }

    overall_seeds = []
    for results in seed_results:
        if not results:
            raise ScoringError("empty result set")
        overall_seeds.append(_acc([r.correct for r in results]))
    mean, std = _mean_std(overall_seeds)

    return {
        "per_paradigm": per_paradigm,
        "overall": mean,
        "seeds": overall_seeds,
        "mean": mean,
        "std": std,
        "n_seeds": len(seed_results),
    }


# -- score record wire format ------------------------------------------------

def _record_to_dict(r: ScoreRecord) -> dict:
    tokens = []
    for t in r.tokens:
        d = {"t": t.text, "bow": t.is_bow, "lp": t.logprob}
        if t.bow_mass_after is not None:
            d["bow_mass_after"] = t.bow_mass_after
        tokens.append(d)
    return {
        "pair_id": r.pair_id,
        "variant": r.variant,
        "mode": r.mode,
        "tokens": tokens,
        "word_spans": [list(s) for s in r.word_spans],
    }


def _record_from_dict(d: dict) -> ScoreRecord:
    return ScoreRecord(
        pair_id=d["pair_id"],
        variant=d["variant"],
        mode=d["mode"],
        tokens=tuple(
            TokenScore(text=t["t"], is_bow=bool(t["bow"]), logprob=t["lp"],
                       bow_mass_after=t.get("bow_mass_after"))
            for t in d["tokens"]
        ),
        word_spans=tuple((s[0], s[1]) for s in d["word_spans"]),
    )


def write_score_records(records: Iterable[ScoreRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(_record_to_dict(r), ensure_ascii=False,
                               sort_keys=True))
            f.write("\n")


def read_score_records(path: str | Path) -> dict[tuple[str, str], ScoreRecord]:
    records: dict[tuple[str, str], ScoreRecord] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = _record_from_dict(json.loads(line))
            except (KeyError, TypeError, json.JSONDecodeError) as exc:
                raise ScoringError(f"{path}:{lineno}: bad score record: {exc}") from exc
            key = (record.pair_id, record.variant)
            if key in records:
                raise ScoringError(f"{path}:{lineno}: duplicate record for {key}")
            records[key] = record
    return records


def validate_score_records(records: dict[tuple[str, str], ScoreRecord],
                           pairs: list[MinimalPair],
                           bow_marker: str = "▁") -> list[str]:
    """Schema and alignment checks for score files; returns a list of
    problems, empty when the file conforms."""
    problems = []
    for pair in pairs:
        for variant, words in (("gram", pair.grammatical),
                               ("ungram", pair.ungrammatical)):
            record = records.get((pair.pair_id, variant))
            if record is None:
                problems.append(f"{pair.pair_id}/{variant}: missing record")
                continue
            problems.extend(_validate_record(record, words, bow_marker))
    return problems


def _validate_record(record: ScoreRecord, words: tuple[str, ...],
                     bow_marker: str) -> list[str]:
    tag = f"{record.pair_id}/{record.variant}"
    problems = []
    if record.mode not in MODES:
        problems.append(f"{tag}: unknown mode {record.mode!r}")
    if not record.tokens:
        return problems + [f"{tag}: no tokens"]

    spans = record.word_spans
    if len(spans) != len(words):
        problems.append(
            f"{tag}: {len(spans)} word spans for {len(words)} words")
        return problems
    pos = 0
    for start, end in spans:
        if start != pos or end <= start:
            problems.append(f"{tag}: word spans do not partition the tokens")
            return problems
        pos = end
    if pos != len(record.tokens):
        problems.append(f"{tag}: word spans do not cover all tokens")
        return problems

    for i, t in enumerate(record.tokens):
        if t.logprob > LOGPROB_TOLERANCE:
            problems.append(f"{tag}: positive logprob at position {i}")
        if record.mode == "causal":
            if t.bow_mass_after is None:
                problems.append(f"{tag}: missing bow_mass_after at {i}")
            elif t.bow_mass_after > LOGPROB_TOLERANCE:
                problems.append(f"{tag}: positive bow_mass_after at {i}")

    for w, (start, end) in enumerate(spans):
        if not record.tokens[start].is_bow:
            problems.append(f"{tag}: word {w} does not start with a BOW token")
        if any(record.tokens[i].is_bow for i in range(start + 1, end)):
            problems.append(f"{tag}: BOW token inside word {w}")
        text = "".join(record.tokens[i].text for i in range(start, end))
        if text.startswith(bow_marker):
            text = text[len(bow_marker):]
        if text != words[w]:
            problems.append(
                f"{tag}: word {w} reassembles to {text!r}, expected "
                f"{words[w]!r}")
    return problems


# -- results wire format -----------------------------------------------------

def write_results(results: list[PairResult], path: str | Path,
                  manifest: Optional[dict] = None) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        for r in sorted(results, key=lambda r: (r.paradigm, r.pair_id)):
            f.write(json.dumps({
                "pair_id": r.pair_id,
                "paradigm": r.paradigm,
                "lexicon_source": r.lexicon_source,
                "delta_p": r.delta_p,
                "correct": r.correct,
                "mode": r.mode,
                "region": r.region,
            }, ensure_ascii=False, sort_keys=True))
            f.write("\n")
    if manifest is not None:
        with open(path.with_suffix(path.suffix + ".manifest.json"), "w",
                  encoding="utf-8") as f:
            json.dump(manifest, f, ensure_ascii=False, sort_keys=True, indent=1)
            f.write("\n")


def read_results(path: str | Path) -> list[PairResult]:
    results = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
                results.append(PairResult(
                    pair_id=d["pair_id"], delta_p=d["delta_p"],
                    correct=d["correct"], mode=d["mode"], region=d["region"],
                    paradigm=d.get("paradigm", ""),
                    lexicon_source=d.get("lexicon_source", ""),
                ))
            except (KeyError, json.JSONDecodeError) as exc:
                raise ScoringError(f"{path}:{lineno}: bad result line: {exc}") from exc
    return results
