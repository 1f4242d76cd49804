export { initBackend } from "./backend.js";
export * from "./encoding.js";
export * from "./jsonl.js";
export * from "./config.js";
export { Seq2SeqModel } from "./model.js";
export { train, encodeExamples } from "./train.js";
export type { TrainResult } from "./train.js";
export { decodeDataset, decodeGreedy, decodeBeam } from "./decode.js";
export { saveCheckpoint, loadCheckpoint } from "./checkpoint.js";
