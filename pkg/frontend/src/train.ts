/** Training loop: teacher forcing with the staged learning-rate schedule. */

import * as tf from "@tensorflow/tfjs";
import { ModelSize, TrainConfig, learningRate, validateConfig } from "./config.js";
import { EOS_ID, encodeText } from "./encoding.js";
import { TrainExample } from "./jsonl.js";
import { Seq2SeqModel } from "./model.js";

export interface TrainResult {
  model: Seq2SeqModel;
  losses: number[];
  steps: number;
}

export interface EncodedExample {
  inputIds: number[];
  targetIds: number[];
}

export function encodeExamples(examples: TrainExample[]): EncodedExample[] {
  return examples.map((example) => ({
    inputIds: encodeText(example.input),
    targetIds: encodeText(example.target).concat([EOS_ID]),
  }));
}

export function train(
  examples: TrainExample[],
  config: TrainConfig,
  modelSize: ModelSize = "tiny",
  log: (line: string) => void = () => {}
): TrainResult {
  validateConfig(config);
  if (examples.length === 0) {
    throw new Error("cannot train on zero examples");
  }
  const encoded = encodeExamples(examples);
  const model = new Seq2SeqModel(modelSize, config.seed);
  const variables = model.variables();
  const optimizer = tf.train.adam(learningRate(config, 1));

  const stepsPerEpoch = Math.ceil(encoded.length / config.batchSize);
  const totalSteps = Math.max(config.epochs * stepsPerEpoch, config.minSteps);

  const order = encoded.map((_, i) => i);
  const shuffle = mulberryShuffle(config.seed + 1);
  const losses: number[] = [];
  let step = 0;
  while (step < totalSteps) {
    shuffle(order);
    for (let start = 0; start < order.length && step < totalSteps; start += config.batchSize) {
      step += 1;
      const batch = order
        .slice(start, start + config.batchSize)
        .map((i) => encoded[i]);
      (optimizer as unknown as { learningRate: number }).learningRate =
        learningRate(config, step);
      const loss = optimizer.minimize(
        () =>
          model.loss(
            batch.map((b) => b.inputIds),
            batch.map((b) => b.targetIds),
            config.dropout
          ),
        true,
        variables
      ) as tf.Scalar;
      const value = loss.dataSync()[0];
      loss.dispose();
      losses.push(value);
      log(`step ${step}/${totalSteps} lr ${learningRate(config, step).toExponential(3)} loss ${value.toFixed(4)}`);
    }
  }
  return { model, losses, steps: step };
}

function mulberryShuffle(seed: number): (order: number[]) => void {
  let a = seed >>> 0;
  const rand = () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  return (order: number[]) => {
    for (let i = order.length - 1; i > 0; i--) {
      const j = Math.floor(rand() * (i + 1));
      [order[i], order[j]] = [order[j], order[i]];
    }
  };
}
