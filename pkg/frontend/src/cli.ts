/**
 * CLI: train on an examples JSONL file, decode a JSONL file of inputs into
 * a candidate file consumable by the evaluation toolkit.
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { initBackend } from "./backend.js";
import { loadCheckpoint, saveCheckpoint } from "./checkpoint.js";
import { ModelSize, Stage, TrainConfig, makeConfig } from "./config.js";
import { readExamples, writeCandidates } from "./jsonl.js";
import { decodeDataset } from "./decode.js";
import { train } from "./train.js";

export async function main(argv: string[]): Promise<void> {
  await initBackend();
  await yargs(argv)
    .command(
      "train",
      "train a model on JSONL examples",
      (y) =>
        y
          .option("examples", { type: "string", demandOption: true })
          .option("checkpoint", { type: "string", demandOption: true })
          .option("stage", { choices: ["pretrain", "finetune"] as const, default: "finetune" as Stage })
          .option("model-size", { choices: ["tiny", "small"] as const, default: "tiny" as ModelSize })
          .option("epochs", { type: "number" })
          .option("batch-size", { type: "number" })
          .option("min-steps", { type: "number" })
          .option("lr", { type: "number", describe: "override the stage learning rate" })
          .option("seed", { type: "number", default: 0 }),
      (args) => {
        const overrides: Partial<TrainConfig> = { seed: args.seed };
        if (args.epochs !== undefined) overrides.epochs = args.epochs;
        if (args.batchSize !== undefined) overrides.batchSize = args.batchSize;
        if (args.minSteps !== undefined) overrides.minSteps = args.minSteps;
        if (args.lr !== undefined) {
          overrides.finetuneLr = args.lr;
          overrides.peakLr = args.lr;
        }
        const config = makeConfig(args.stage, overrides);
        const examples = readExamples(args.examples);
        const result = train(examples, config, args.modelSize, (line) =>
          console.error(line)
        );
        saveCheckpoint(args.checkpoint, result.model, config);
        console.error(`saved checkpoint to ${args.checkpoint} after ${result.steps} steps`);
      }
    )
    .command(
      "decode",
      "decode JSONL inputs into a candidate file",
      (y) =>
        y
          .option("checkpoint", { type: "string", demandOption: true })
          .option("examples", { type: "string", demandOption: true })
          .option("out", { type: "string", demandOption: true })
          .option("beams", { type: "number", default: 1 }),
      (args) => {
        const { model } = loadCheckpoint(args.checkpoint);
        const inputs = readExamples(args.examples).map((e) => e.input);
        const candidates = decodeDataset(model, inputs, { beams: args.beams });
        writeCandidates(args.out, candidates);
        console.error(`wrote ${candidates.length} candidate records to ${args.out}`);
      }
    )
    .demandCommand(1)
    .strict()
    .parseAsync();
}

const invokedDirectly =
  process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  main(hideBin(process.argv)).catch((error) => {
    console.error(String(error));
    process.exit(1);
  });
}
