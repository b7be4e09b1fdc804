/**
 * Model backends producing next-token or masked-token logits.
 *
 * Two families ship with the exporter:
 *  - "table": explicit logit rows keyed by context id suffixes, with a
 *    default row. Handy for hand-set logits and tests.
 *  - "bigram": a (vocab_size + 2) x (vocab_size + 1) weight matrix; row i
 *    holds the logits after token i (last row: after begin-of-sequence).
 *
 * A model file bundles the tokenizer so exports are self-contained:
 * { format, family, tokenizer: {vocab, merges, bow_marker, vocab_size},
 *   params }.
 */

import { readFileSync } from "node:fs";

import { Tokenizer } from "./tokenizer.js";
import { CausalBackend, MaskedBackend, TokenizerSpec } from "./types.js";

export const MODEL_FORMAT = "exporter-model-v1";

export interface LoadedModel {
  tokenizer: Tokenizer;
  causal: CausalBackend;
  masked: MaskedBackend;
}

export function logSoftmax(logits: Float64Array): Float64Array {
  let max = -Infinity;
  for (const x of logits) if (x > max) max = x;
  let sum = 0;
  for (const x of logits) sum += Math.exp(x - max);
  const logZ = max + Math.log(sum);
  return Float64Array.from(logits, (x) => x - logZ);
}

export function logSumExp(values: number[]): number {
  let max = -Infinity;
  for (const x of values) if (x > max) max = x;
  if (max === -Infinity) return -Infinity;
  let sum = 0;
  for (const x of values) sum += Math.exp(x - max);
  return max + Math.log(sum);
}

interface TableParams {
  order: number;
  contexts: Record<string, number[]>;
  default: number[];
}

class TableModel implements CausalBackend, MaskedBackend {
  constructor(private params: TableParams, private supportSize: number) {
    for (const [key, row] of Object.entries(params.contexts)) {
      if (row.length !== supportSize) {
        throw new Error(`logit row for ${JSON.stringify(key)} has length ${row.length}, expected ${supportSize}`);
      }
    }
    if (params.default.length !== supportSize) {
      throw new Error(`default logit row has length ${params.default.length}, expected ${supportSize}`);
    }
  }

  private lookup(key: string[]): Float64Array {
    // longest matching suffix wins, then the default row
    for (let start = 0; start <= key.length; start++) {
      const row = this.params.contexts[key.slice(start).join(" ")];
      if (row) return Float64Array.from(row);
    }
    return Float64Array.from(this.params.default);
  }

  logits(context: number[]): Float64Array {
    const tail = context.slice(-this.params.order).map(String);
    return this.lookup(tail);
  }

  maskedLogits(visible: (number | null)[], position: number): Float64Array {
    const key: string[] = [];
    const from = Math.max(0, position - this.params.order);
    for (let i = from; i < position; i++) {
      key.push(visible[i] === null ? "M" : String(visible[i]));
    }
    return this.lookup(key);
  }
}

interface BigramParams {
  weights: number[][];
}

class BigramModel implements CausalBackend, MaskedBackend {
  constructor(private params: BigramParams, private bosId: number,
              private supportSize: number) {
    if (params.weights.length !== bosId + 1) {
      throw new Error(`bigram matrix needs ${bosId + 1} rows, got ${params.weights.length}`);
    }
    for (const row of params.weights) {
      if (row.length !== supportSize) {
        throw new Error(`bigram rows must have length ${supportSize}`);
      }
    }
  }

  logits(context: number[]): Float64Array {
    const prev = context.length ? context[context.length - 1] : this.bosId;
    return Float64Array.from(this.params.weights[prev]);
  }

  maskedLogits(visible: (number | null)[], position: number): Float64Array {
    // within-word left-to-right masking keeps every earlier token visible
    const prev = position > 0 ? visible[position - 1] : this.bosId;
    if (prev === null) {
      throw new Error("masked token immediately before the target; masking regime violated");
    }
    return Float64Array.from(this.params.weights[prev]);
  }
}

export function loadModel(path: string): LoadedModel {
  const payload = JSON.parse(readFileSync(path, "utf-8"));
  if (payload.format !== MODEL_FORMAT) {
    throw new Error(`unsupported model format in ${path}`);
  }
  const spec = payload.tokenizer as TokenizerSpec;
  const tokenizer = new Tokenizer(spec);
  const supportSize = tokenizer.vocabSize + 1;
  let backend: TableModel | BigramModel;
  if (payload.family === "table") {
    backend = new TableModel(payload.params as TableParams, supportSize);
  } else if (payload.family === "bigram") {
    backend = new BigramModel(payload.params as BigramParams,
                              tokenizer.bosId, supportSize);
  } else {
    throw new Error(`unknown model family ${JSON.stringify(payload.family)}`);
  }
  return { tokenizer, causal: backend, masked: backend };
}
