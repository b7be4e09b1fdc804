/**
 * Turn benchmark pairs into score records.
 *
 * Causal mode walks the sentence once: each position's log-probability
 * plus bow_mass_after, the log-summed probability that the next token
 * starts a new word or ends the sentence. Masked mode scores each token
 * with itself and all later subwords of the same word masked, earlier
 * material visible (within-word left-to-right).
 */

import { AlignmentError, Tokenizer } from "./tokenizer.js";
import { logSoftmax, logSumExp, LoadedModel } from "./model.js";
import { BenchmarkPair, ScoreMode, ScoreRecord, TokenScore } from "./types.js";

export interface ExportOutcome {
  records: ScoreRecord[];
  skipped: { pair_id: string; reason: string }[];
}

function causalRecord(model: LoadedModel, pairId: string,
                      variant: "gram" | "ungram",
                      words: string[]): ScoreRecord {
  const tok = model.tokenizer;
  const { ids, isBow, wordSpans } = tok.encode(words);
  const boundary = tok.boundaryIds();
  const tokens: TokenScore[] = [];
  for (let j = 0; j < ids.length; j++) {
    const lp = logSoftmax(model.causal.logits(ids.slice(0, j)));
    const lpAfter = logSoftmax(model.causal.logits(ids.slice(0, j + 1)));
    tokens.push({
      t: tok.subword(ids[j]),
      bow: isBow[j],
      lp: lp[ids[j]],
      bow_mass_after: logSumExp(boundary.map((b) => lpAfter[b])),
    });
  }
  return { pair_id: pairId, variant, mode: "causal", tokens,
           word_spans: wordSpans };
}

function pllRecord(model: LoadedModel, pairId: string,
                   variant: "gram" | "ungram",
                   words: string[]): ScoreRecord {
  const tok = model.tokenizer;
  const { ids, isBow, wordSpans } = tok.encode(words);
  const lps = new Array<number>(ids.length);
  for (const [start, end] of wordSpans) {
    for (let t = start; t < end; t++) {
      // mask the target and everything after it inside this word
      const visible: (number | null)[] = ids.map((id, i) =>
        i >= t && i < end ? null : id);
      const lp = logSoftmax(model.masked.maskedLogits(visible, t));
      lps[t] = lp[ids[t]];
    }
  }
  return {
    pair_id: pairId,
    variant,
    mode: "mlm_pll_word_l2r",
    tokens: ids.map((id, i) => ({ t: tok.subword(id), bow: isBow[i], lp: lps[i] })),
    word_spans: wordSpans,
  };
}

export function exportPairs(model: LoadedModel, pairs: BenchmarkPair[],
                            mode: ScoreMode): ExportOutcome {
  const records: ScoreRecord[] = [];
  const skipped: { pair_id: string; reason: string }[] = [];
  const ordered = [...pairs].sort((a, b) =>
    a.paradigm.localeCompare(b.paradigm) || a.pair_id.localeCompare(b.pair_id));
  const build = mode === "causal" ? causalRecord : pllRecord;
  for (const pair of ordered) {
    try {
      const gram = build(model, pair.pair_id, "gram", pair.grammatical);
      const ungram = build(model, pair.pair_id, "ungram", pair.ungrammatical);
      records.push(gram, ungram);
    } catch (err) {
      if (err instanceof AlignmentError) {
        skipped.push({ pair_id: pair.pair_id, reason: err.message });
      } else {
        throw err;
      }
    }
  }
  return { records, skipped };
}

export function recordsToJsonl(records: ScoreRecord[]): string {
  return records
    .map((r) =>
      JSON.stringify({
        pair_id: r.pair_id,
        variant: r.variant,
        mode: r.mode,
        tokens: r.tokens,
        word_spans: r.word_spans,
      }),
    )
    .join("\n") + (records.length ? "\n" : "");
}

export function parseBenchmark(jsonl: string): BenchmarkPair[] {
  const pairs: BenchmarkPair[] = [];
  for (const [index, line] of jsonl.split("\n").entries()) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    let parsed: unknown;
    try {
      parsed = JSON.parse(trimmed);
    } catch {
      throw new Error(`benchmark line ${index + 1} is not valid JSON`);
    }
    const p = parsed as BenchmarkPair;
    if (!p.pair_id || !Array.isArray(p.grammatical) || !Array.isArray(p.ungrammatical)) {
      throw new Error(`benchmark line ${index + 1} is missing required fields`);
    }
    pairs.push(p);
  }
  return pairs;
}
