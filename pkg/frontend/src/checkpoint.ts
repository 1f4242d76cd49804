/**
 * Checkpoint directory layout:
 *   <dir>/config.json   — training config, model size, vocabulary size
 *   <dir>/weights.json  — named flat weight arrays with shapes
 */

import * as tf from "@tensorflow/tfjs";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { ModelSize, TrainConfig } from "./config.js";
import { VOCAB_SIZE } from "./encoding.js";
import { Seq2SeqModel } from "./model.js";

const WEIGHT_NAMES = [
  "embedding",
  "encoder.w", "encoder.u", "encoder.b",
  "decoder.w", "decoder.u", "decoder.b",
  "combine", "combineBias",
  "output", "outputBias",
];

interface StoredWeight {
  shape: number[];
  data: number[];
}

export function saveCheckpoint(
  dir: string,
  model: Seq2SeqModel,
  config: TrainConfig
): void {
  mkdirSync(dir, { recursive: true });
  const weights: Record<string, StoredWeight> = {};
  model.variables().forEach((variable, i) => {
    weights[WEIGHT_NAMES[i]] = {
      shape: variable.shape.slice(),
      data: Array.from(variable.dataSync()),
    };
  });
  writeFileSync(
    join(dir, "config.json"),
    JSON.stringify({ config, modelSize: model.size, vocabSize: VOCAB_SIZE }, null, 2)
  );
  writeFileSync(join(dir, "weights.json"), JSON.stringify(weights));
}

export interface LoadedCheckpoint {
  model: Seq2SeqModel;
  config: TrainConfig;
}

export function loadCheckpoint(dir: string): LoadedCheckpoint {
  const meta = JSON.parse(readFileSync(join(dir, "config.json"), "utf-8")) as {
    config: TrainConfig;
    modelSize: ModelSize;
    vocabSize: number;
  };
  if (meta.vocabSize !== VOCAB_SIZE) {
    throw new Error(
      `checkpoint vocabulary size ${meta.vocabSize} does not match ${VOCAB_SIZE}`
    );
  }
  const weights = JSON.parse(readFileSync(join(dir, "weights.json"), "utf-8")) as Record<
    string,
    StoredWeight
  >;
  const model = new Seq2SeqModel(meta.modelSize);
  model.variables().forEach((variable, i) => {
    const stored = weights[WEIGHT_NAMES[i]];
    if (!stored || stored.shape.join(",") !== variable.shape.join(",")) {
      throw new Error(`checkpoint weight ${WEIGHT_NAMES[i]} missing or wrong shape`);
    }
    variable.assign(tf.tensor(stored.data, stored.shape));
  });
  return { model, config: meta.config };
}
