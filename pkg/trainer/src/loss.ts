/** Multi-caption cross-entropy.
 *
 * For records with caption sets {C_0..C_k} the loss is the mean over all
 * (record, caption) pairs of the sequence negative log-likelihood:
 * generation direction scores p(smiles | caption), captioning direction
 * p(caption | smiles). At k = 0 this is exactly the single-caption
 * objective. Token log-probs are summed per sequence before averaging,
 * so the value is in nats per sequence.
 */

import { AugmentedRecord, captionSet } from "./data.js";
import { Seq2Seq } from "./nn.js";
import { Vocab } from "./vocab.js";

export type Task = "gen" | "cap";

export interface LossValue {
  value: number;
  /** per-record, per-caption sequence NLL, shape [n][k+1] */
  perCaption: number[][];
  /** total target tokens scored (including end-of-sequence) */
  tokens: number;
}

export interface EncodeOptions {
  maxSourceLen?: number;
  maxTargetLen?: number;
}

export function encodePair(
  vocab: Vocab,
  source: string,
  target: string,
  opts: EncodeOptions = {},
): { src: number[]; tgt: number[] } {
  let src = vocab.encode(source);
  let tgt = vocab.encode(target);
  if (opts.maxSourceLen !== undefined) src = src.slice(0, opts.maxSourceLen);
  if (opts.maxTargetLen !== undefined) tgt = tgt.slice(0, opts.maxTargetLen);
  return { src, tgt };
}

export function multiCaptionLoss(
  model: Seq2Seq,
  vocab: Vocab,
  records: AugmentedRecord[],
  k: number,
  task: Task,
  opts: EncodeOptions = {},
  withGrad = false,
): LossValue {
  if (records.length === 0) throw new Error("empty batch");
  const perCaption: number[][] = [];
  const scale = 1.0 / ((k + 1) * records.length);
  let total = 0.0;
  let tokens = 0;
  for (const record of records) {
    const row: number[] = [];
    for (const caption of captionSet(record, k)) {
      const source = task === "gen" ? caption : record.smiles;
      const target = task === "gen" ? record.smiles : caption;
      const { src, tgt } = encodePair(vocab, source, target, opts);
      const state = model.forward(src, tgt);
      row.push(state.nll);
      total += state.nll;
      tokens += tgt.length + 1; // end marker is scored too
      if (withGrad) model.backward(state, scale);
    }
    perCaption.push(row);
  }
  return { value: total * scale, perCaption, tokens };
}

/** Independent single-caption objective (original caption only), written
 * without the multi-caption machinery so the k = 0 identity is checked
 * against a separate code path. */
export function singleCaptionLoss(
  model: Seq2Seq,
  vocab: Vocab,
  records: AugmentedRecord[],
  task: Task,
  opts: EncodeOptions = {},
): number {
  let total = 0.0;
  for (const record of records) {
    const source = task === "gen" ? record.caption : record.smiles;
    const target = task === "gen" ? record.smiles : record.caption;
    const { src, tgt } = encodePair(vocab, source, target, opts);
    total += model.loss(src, tgt);
  }
  return total / records.length;
}
