/** JSONL interchange: training examples in, scored candidates out. */

import { readFileSync, writeFileSync } from "node:fs";

export interface TrainExample {
  input: string;
  target: string;
}

/** One token's scored candidates, sorted by descending log-probability. */
export type TokenCandidates = Array<[string, number]>;

export function parseExamples(text: string): TrainExample[] {
  const examples: TrainExample[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch (e) {
      throw new Error(`examples line ${i + 1}: ${(e as Error).message}`);
    }
    const { input, target } = record as Record<string, unknown>;
    if (typeof input !== "string" || typeof target !== "string") {
      throw new Error(`examples line ${i + 1}: expected string input/target`);
    }
    examples.push({ input, target });
  }
  return examples;
}

export function readExamples(path: string): TrainExample[] {
  return parseExamples(readFileSync(path, "utf-8"));
}

export function formatCandidates(candidates: TokenCandidates[]): string {
  validateCandidates(candidates);
  return (
    candidates
      .map((c, i) => JSON.stringify({ i, c }))
      .join("\n") + "\n"
  );
}

export function writeCandidates(path: string, candidates: TokenCandidates[]): void {
  writeFileSync(path, formatCandidates(candidates), "utf-8");
}

/** Mirror of the evaluator's candidate-file invariants, checked before writing. */
export function validateCandidates(candidates: TokenCandidates[]): void {
  candidates.forEach((tokenCandidates, i) => {
    const seen = new Set<string>();
    let prev = Infinity;
    for (const [candidate, logprob] of tokenCandidates) {
      if (!Number.isFinite(logprob)) {
        throw new Error(`token ${i}: non-finite logprob for ${JSON.stringify(candidate)}`);
      }
      if (logprob > prev) {
        throw new Error(`token ${i}: candidates not sorted by logprob`);
      }
      if (seen.has(candidate)) {
        throw new Error(`token ${i}: duplicate candidate ${JSON.stringify(candidate)}`);
      }
      seen.add(candidate);
      prev = logprob;
    }
  });
}
