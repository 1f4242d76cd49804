/**
 * Tiny byte-level encoder-decoder: a GRU encoder, a GRU decoder with dot
 * attention over encoder states, and a softmax over the shared byte
 * vocabulary.  One forward-step implementation serves both teacher-forced
 * training and incremental decoding.
 */

import * as tf from "@tensorflow/tfjs";
import { MODEL_DIMS, ModelDims, ModelSize } from "./config.js";
import { PAD_ID, VOCAB_SIZE, checkIds } from "./encoding.js";

/** Deterministic PRNG for reproducible weight initialization. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function uniformInit(shape: number[], rand: () => number): tf.Variable {
  const fanIn = shape.length > 1 ? shape[0] : shape[0] || 1;
  const scale = Math.sqrt(3 / Math.max(1, fanIn));
  const size = shape.reduce((a, b) => a * b, 1);
  const data = new Float32Array(size);
  for (let i = 0; i < size; i++) {
    data[i] = (rand() * 2 - 1) * scale;
  }
  return tf.variable(tf.tensor(data, shape));
}

interface GruParams {
  w: tf.Variable; // [inputDim, 3 * hidden]
  u: tf.Variable; // [hidden, 3 * hidden]
  b: tf.Variable; // [3 * hidden]
}

export class Seq2SeqModel {
  readonly size: ModelSize;
  readonly dims: ModelDims;
  readonly embedding: tf.Variable; // [vocab, emb]
  readonly encoder: GruParams;
  readonly decoder: GruParams;
  readonly combine: tf.Variable; // [2 * hidden, hidden]
  readonly combineBias: tf.Variable; // [hidden]
  readonly output: tf.Variable; // [hidden, vocab]
  readonly outputBias: tf.Variable; // [vocab]

  constructor(size: ModelSize, seed = 0) {
    this.size = size;
    this.dims = MODEL_DIMS[size];
    const { embedding: e, hidden: h } = this.dims;
    const rand = mulberry32(seed * 2654435761 + 1);
    const gru = (inputDim: number): GruParams => ({
      w: uniformInit([inputDim, 3 * h], rand),
      u: uniformInit([h, 3 * h], rand),
      b: tf.variable(tf.zeros([3 * h])),
    });
    this.embedding = uniformInit([VOCAB_SIZE, e], rand);
    this.encoder = gru(e);
    this.decoder = gru(e);
    this.combine = uniformInit([2 * h, h], rand);
    this.combineBias = tf.variable(tf.zeros([h]));
    this.output = uniformInit([h, VOCAB_SIZE], rand);
    this.outputBias = tf.variable(tf.zeros([VOCAB_SIZE]));
  }

  variables(): tf.Variable[] {
    return [
      this.embedding,
      this.encoder.w, this.encoder.u, this.encoder.b,
      this.decoder.w, this.decoder.u, this.decoder.b,
      this.combine, this.combineBias,
      this.output, this.outputBias,
    ];
  }

  private gruStep(
    params: GruParams,
    x: tf.Tensor2D, // [B, inputDim]
    state: tf.Tensor2D // [B, h]
  ): tf.Tensor2D {
    const h = this.dims.hidden;
    const gates = tf.add(
      tf.add(tf.matMul(x, params.w), tf.matMul(state, params.u)),
      params.b
    );
    const z = tf.sigmoid(tf.slice(gates, [0, 0], [-1, h]));
    const r = tf.sigmoid(tf.slice(gates, [0, h], [-1, h]));
    // candidate uses the reset-gated state through the recurrent matrix slice
    const uh = tf.slice(params.u, [0, 2 * h], [-1, h]);
    const wh = tf.slice(params.w, [0, 2 * h], [-1, h]);
    const bh = tf.slice(params.b, [2 * h], [h]);
    const candidate = tf.tanh(
      tf.add(tf.add(tf.matMul(x, wh), tf.matMul(tf.mul(r, state), uh)), bh)
    );
    return tf.add(tf.mul(z, state), tf.mul(tf.sub(tf.scalar(1), z), candidate)) as tf.Tensor2D;
  }

  private embed(ids: tf.Tensor, dropout: number): tf.Tensor {
    // one-hot matmul lookup: differentiable on every backend
    const oneHot = tf.oneHot(ids.flatten().toInt(), VOCAB_SIZE);
    let e: tf.Tensor = tf.matMul(oneHot, this.embedding);
    if (dropout > 0) {
      e = tf.dropout(e, dropout);
    }
    return e;
  }

  /**
   * Run the encoder over padded id rows.  Returns per-step states
   * [B, T, h] and the final state [B, h]; pad steps repeat the previous
   * state and are masked out of attention by the caller.
   */
  encode(
    ids: number[][],
    dropout = 0
  ): { states: tf.Tensor3D; last: tf.Tensor2D; mask: tf.Tensor2D } {
    const batch = ids.length;
    const maxLen = Math.max(...ids.map((row) => row.length));
    const padded = ids.map((row) =>
      row.concat(Array(maxLen - row.length).fill(PAD_ID))
    );
    const maskData = padded.map((row) => row.map((id) => (id === PAD_ID ? 0 : 1)));
    const mask = tf.tensor2d(maskData, [batch, maxLen]);
    let state = tf.zeros([batch, this.dims.hidden]) as tf.Tensor2D;
    const states: tf.Tensor2D[] = [];
    for (let t = 0; t < maxLen; t++) {
      const stepIds = tf.tensor1d(padded.map((row) => row[t]), "int32");
      const x = this.embed(stepIds, dropout) as tf.Tensor2D;
      const next = this.gruStep(this.encoder, x, state);
      const stepMask = tf.slice(mask, [0, t], [-1, 1]);
      state = tf.add(
        tf.mul(next, stepMask),
        tf.mul(state, tf.sub(tf.scalar(1), stepMask))
      ) as tf.Tensor2D;
      states.push(state);
    }
    return { states: tf.stack(states, 1) as tf.Tensor3D, last: state, mask };
  }

  /**
   * One decoder step: previous output ids -> next-token logits and state.
   */
  decodeStep(
    prevIds: number[],
    state: tf.Tensor2D,
    encStates: tf.Tensor3D,
    encMask: tf.Tensor2D,
    dropout = 0
  ): { logits: tf.Tensor2D; state: tf.Tensor2D } {
    const x = this.embed(tf.tensor1d(prevIds, "int32"), dropout) as tf.Tensor2D;
    const next = this.gruStep(this.decoder, x, state);
    // dot attention over encoder states
    const scores = tf.squeeze(
      tf.matMul(encStates, tf.expandDims(next, 2)),
      [2]
    ) as tf.Tensor2D; // [B, T]
    const masked = tf.add(scores, tf.mul(tf.sub(encMask, tf.scalar(1)), tf.scalar(1e9)));
    const weights = tf.softmax(masked); // [B, T]
    const context = tf.squeeze(
      tf.matMul(tf.expandDims(weights, 1), encStates),
      [1]
    ) as tf.Tensor2D; // [B, h]
    let fused = tf.tanh(
      tf.add(tf.matMul(tf.concat([next, context], 1), this.combine), this.combineBias)
    );
    if (dropout > 0) {
      fused = tf.dropout(fused, dropout);
    }
    const logits = tf.add(tf.matMul(fused, this.output), this.outputBias) as tf.Tensor2D;
    return { logits, state: next };
  }

  /** Mean teacher-forced cross-entropy over non-pad target positions. */
  loss(inputIds: number[][], targetIds: number[][], dropout = 0): tf.Scalar {
    inputIds.forEach(checkIds);
    targetIds.forEach(checkIds);
    const batch = inputIds.length;
    const maxLen = Math.max(...targetIds.map((row) => row.length));
    const padded = targetIds.map((row) =>
      row.concat(Array(maxLen - row.length).fill(PAD_ID))
    );
    const { states, last, mask } = this.encode(inputIds, dropout);
    let state = last;
    let total = tf.scalar(0);
    let count = 0;
    for (let t = 0; t < maxLen; t++) {
      const prev = padded.map((row) => (t === 0 ? PAD_ID : row[t - 1]));
      const step = this.decodeStep(prev, state, states, mask, dropout);
      state = step.state;
      const targets = padded.map((row) => row[t]);
      const stepMask = tf.tensor1d(targets.map((id) => (id === PAD_ID ? 0 : 1)));
      count += targets.filter((id) => id !== PAD_ID).length;
      const logProbs = tf.logSoftmax(step.logits);
      const picked = tf.sum(
        tf.mul(logProbs, tf.oneHot(tf.tensor1d(targets, "int32"), VOCAB_SIZE)),
        1
      );
      total = tf.add(total, tf.neg(tf.sum(tf.mul(picked, stepMask)))) as tf.Scalar;
    }
    return tf.div(total, tf.scalar(Math.max(1, count))) as tf.Scalar;
  }
}
