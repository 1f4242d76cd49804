/** Training configuration and learning-rate schedules. */

export type Stage = "pretrain" | "finetune";
export type Schedule = "inverse_sqrt" | "constant";
export type ModelSize = "tiny" | "small";

export interface TrainConfig {
  stage: Stage;
  schedule: Schedule;
  peakLr: number;
  warmupSteps: number;
  finetuneLr: number;
  epochs: number;
  batchSize: number;
  dropout: number;
  minSteps: number;
  seed: number;
}

export const PRETRAIN_DEFAULTS: TrainConfig = {
  stage: "pretrain",
  schedule: "inverse_sqrt",
  peakLr: 5e-4,
  warmupSteps: 4000,
  finetuneLr: 1e-4,
  epochs: 50,
  batchSize: 128,
  dropout: 0.1,
  minSteps: 100_000,
  seed: 0,
};

export const FINETUNE_DEFAULTS: TrainConfig = {
  ...PRETRAIN_DEFAULTS,
  stage: "finetune",
  schedule: "constant",
  minSteps: 0,
};

export function makeConfig(
  stage: Stage,
  overrides: Partial<TrainConfig> = {}
): TrainConfig {
  const base = stage === "pretrain" ? PRETRAIN_DEFAULTS : FINETUNE_DEFAULTS;
  const config = { ...base, ...overrides, stage };
  validateConfig(config);
  return config;
}

export function validateConfig(config: TrainConfig): void {
  if (config.stage === "pretrain" && config.schedule !== "inverse_sqrt") {
    throw new Error("pretraining requires the inverse_sqrt schedule");
  }
  if (config.stage === "finetune" && config.schedule !== "constant") {
    throw new Error("fine-tuning requires the constant schedule");
  }
  if (config.batchSize < 1 || config.epochs < 1) {
    throw new Error("batchSize and epochs must be positive");
  }
  if (config.dropout < 0 || config.dropout >= 1) {
    throw new Error("dropout must be in [0, 1)");
  }
}

/** Learning rate at a 1-based optimizer step. */
export function learningRate(config: TrainConfig, step: number): number {
  if (config.schedule === "constant") {
    return config.finetuneLr;
  }
  // linear warmup to the peak, then decay with 1/sqrt(step)
  if (step <= config.warmupSteps) {
    return (config.peakLr * step) / Math.max(1, config.warmupSteps);
  }
  return config.peakLr * Math.sqrt(config.warmupSteps / step);
}

export interface ModelDims {
  embedding: number;
  hidden: number;
}

export const MODEL_DIMS: Record<ModelSize, ModelDims> = {
  tiny: { embedding: 48, hidden: 64 },
  small: { embedding: 96, hidden: 192 },
};
