export { Tokenizer, AlignmentError } from "./tokenizer.js";
export { loadModel, logSoftmax, logSumExp, MODEL_FORMAT } from "./model.js";
export { exportPairs, parseBenchmark, recordsToJsonl } from "./export.js";
export * from "./types.js";
