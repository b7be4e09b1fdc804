#!/usr/bin/env node
/**
 * fitclams-export: score a benchmark with a model file and emit the
 * harness's score JSONL.
 *
 *   fitclams-export --benchmark pairs.jsonl --model model.json \
 *       --mode causal --out scores.jsonl
 *
 * Unalignable pairs are skipped and reported on stderr with their
 * pair_id; the harness then fails fast on the missing variants instead
 * of silently shrinking counts.
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { exportPairs, parseBenchmark, recordsToJsonl } from "./export.js";
import { loadModel } from "./model.js";
import { ScoreMode } from "./types.js";

function parseArgs(argv: string[]): Map<string, string> {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad argument ${key}`);
    }
    args.set(key.slice(2), argv[i + 1]);
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Map<string, string>;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  const benchmark = args.get("benchmark");
  const modelPath = args.get("model");
  const out = args.get("out");
  const mode = (args.get("mode") ?? "causal") as ScoreMode;
  if (!benchmark || !modelPath || !out) {
    console.error(
      "usage: fitclams-export --benchmark B.jsonl --model M.json " +
      "[--mode causal|mlm_pll_word_l2r] --out S.jsonl");
    return 2;
  }
  if (mode !== "causal" && mode !== "mlm_pll_word_l2r") {
    console.error(`unknown mode ${mode}`);
    return 2;
  }
  try {
    const model = loadModel(modelPath);
    const pairs = parseBenchmark(readFileSync(benchmark, "utf-8"));
    const { records, skipped } = exportPairs(model, pairs, mode);
    writeFileSync(out, recordsToJsonl(records), "utf-8");
    for (const s of skipped) {
      console.error(`skipped ${s.pair_id}: ${s.reason}`);
    }
    console.log(JSON.stringify({
      pairs: pairs.length,
      records: records.length,
      skipped: skipped.length,
    }));
    return 0;
  } catch (err) {
    console.error(JSON.stringify({ stage: "export", error: String(err) }));
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
