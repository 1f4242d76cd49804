/** Greedy and beam-search decoding into scored candidate lists. */

import * as tf from "@tensorflow/tfjs";
import { EOS_ID, PAD_ID, decodeText, encodeText } from "./encoding.js";
import { TokenCandidates } from "./jsonl.js";
import { Seq2SeqModel } from "./model.js";

const MAX_CANDIDATES = 16;

export interface DecodeOptions {
  beams: number;
  maxCandidates?: number;
}

export function decodeDataset(
  model: Seq2SeqModel,
  inputs: string[],
  options: DecodeOptions
): TokenCandidates[] {
  if (options.beams < 1) {
    throw new Error("beams must be >= 1");
  }
  return inputs.map((input) =>
    options.beams === 1
      ? [decodeGreedy(model, input)]
      : decodeBeam(model, input, options.beams, options.maxCandidates ?? MAX_CANDIDATES)
  );
}

function maxLength(inputLen: number): number {
  return 2 * inputLen + 8;
}

/** Follow the per-step argmax; returns the text and its total logprob. */
export function decodeGreedy(model: Seq2SeqModel, input: string): [string, number] {
  const inputIds = encodeText(input);
  return tf.tidy(() => {
    const { states, last, mask } = model.encode([inputIds]);
    let state = last;
    let prev = PAD_ID;
    let logprob = 0;
    const out: number[] = [];
    for (let t = 0; t < maxLength(inputIds.length); t++) {
      const step = model.decodeStep([prev], state, states, mask);
      state = step.state;
      const logProbs = tf.logSoftmax(step.logits);
      const { values, indices } = tf.topk(logProbs, 1);
      const token = indices.dataSync()[0];
      logprob += values.dataSync()[0];
      if (token === EOS_ID) {
        break;
      }
      out.push(token);
      prev = token;
    }
    return [decodeText(out), logprob] as [string, number];
  });
}

interface Beam {
  ids: number[];
  state: tf.Tensor2D;
  logprob: number;
}

/**
 * Length-unnormalized beam search; finished hypotheses accumulate until
 * enough candidates exist.  With one beam this follows exactly the greedy
 * argmax path.
 */
export function decodeBeam(
  model: Seq2SeqModel,
  input: string,
  beams: number,
  maxCandidates = MAX_CANDIDATES
): TokenCandidates {
  const inputIds = encodeText(input);
  return tf.tidy(() => {
    const { states, last, mask } = model.encode([inputIds]);
    let alive: Beam[] = [{ ids: [], state: last, logprob: 0 }];
    const finished: Array<{ text: string; logprob: number }> = [];
    for (let t = 0; t < maxLength(inputIds.length) && alive.length; t++) {
      const expansions: Array<{ beam: Beam; token: number; logprob: number; state: tf.Tensor2D }> = [];
      for (const beam of alive) {
        const prev = beam.ids.length ? beam.ids[beam.ids.length - 1] : PAD_ID;
        const step = model.decodeStep([prev], beam.state, states, mask);
        const logProbs = tf.logSoftmax(step.logits);
        const { values, indices } = tf.topk(logProbs, beams);
        const vs = values.dataSync();
        const is = indices.dataSync();
        for (let k = 0; k < beams; k++) {
          expansions.push({
            beam,
            token: is[k],
            logprob: beam.logprob + vs[k],
            state: step.state,
          });
        }
      }
      expansions.sort((a, b) => b.logprob - a.logprob);
      alive = [];
      for (const expansion of expansions.slice(0, beams)) {
        if (expansion.token === EOS_ID) {
          finished.push({
            text: decodeText(expansion.beam.ids),
            logprob: expansion.logprob,
          });
        } else {
          alive.push({
            ids: expansion.beam.ids.concat([expansion.token]),
            state: expansion.state,
            logprob: expansion.logprob,
          });
        }
      }
      if (finished.length >= maxCandidates) {
        break;
      }
    }
    if (finished.length === 0) {
      // no hypothesis emitted EOS within the length budget; fall back to
      // the still-alive beams so every token gets at least one candidate
      for (const beam of alive) {
        finished.push({ text: decodeText(beam.ids), logprob: beam.logprob });
      }
    }
    // keep the best score per distinct text; deterministic ordering
    const best = new Map<string, number>();
    for (const { text, logprob } of finished) {
      const existing = best.get(text);
      if (existing === undefined || logprob > existing) {
        best.set(text, logprob);
      }
    }
    return [...best.entries()]
      .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
      .slice(0, maxCandidates)
      .map(([text, logprob]) => [text, logprob] as [string, number]);
  });
}
