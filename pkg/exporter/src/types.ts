export interface BenchmarkPair {
  pair_id: string;
  paradigm: string;
  lexicon_source: string;
  grammatical: string[];
  ungrammatical: string[];
  critical_start: number;
  critical_end: number;
}

export interface TokenScore {
  t: string;
  bow: boolean;
  lp: number;
  bow_mass_after?: number;
}

export type ScoreMode = "causal" | "mlm_pll_word_l2r";

export interface ScoreRecord {
  pair_id: string;
  variant: "gram" | "ungram";
  mode: ScoreMode;
  tokens: TokenScore[];
  word_spans: [number, number][];
}

export interface TokenizerSpec {
  vocab: string[];
  merges: [string, string][];
  bow_marker: string;
  vocab_size: number;
}

/** Token-level logit sources. Ids run over the subword vocabulary; the
 * id vocab_size is end-of-sentence, vocab_size+1 is the begin padding. */
export interface CausalBackend {
  /** Logits over [0, vocab_size] (subwords plus EOS) given the context. */
  logits(context: number[]): Float64Array;
}

export interface MaskedBackend {
  /**
   * Logits for the masked position. `visible` holds token ids with masked
   * positions set to null; `position` is the target index.
   */
  maskedLogits(visible: (number | null)[], position: number): Float64Array;
}
