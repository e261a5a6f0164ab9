/** Central-difference validation of the analytic gradient.
 *
 * The per-coordinate error is measured relative to
 * max(|numeric|, |analytic|, gradient scale), where the scale is the
 * largest sampled |analytic| value: coordinates whose true gradient sits
 * below the finite-difference truncation noise (~step^2 of a loss worth
 * tens of nats) are judged against the gradient's characteristic
 * magnitude instead of their own vanishing one, which is what keeps the
 * check meaningful at the stated step size.
 */

import { AugmentedRecord } from "./data.js";
import { EncodeOptions, multiCaptionLoss, Task } from "./loss.js";
import { Seq2Seq } from "./nn.js";
import { Rng } from "./rng.js";
import { Vocab } from "./vocab.js";

export interface GradCheckResult {
  maxRelError: number;
  checked: number;
}

export function gradCheck(
  model: Seq2Seq,
  vocab: Vocab,
  records: AugmentedRecord[],
  k: number,
  task: Task,
  opts: EncodeOptions = {},
  samples = 60,
  step = 1e-4,
  seed = 7,
): GradCheckResult {
  model.ps.zeroGrads();
  multiCaptionLoss(model, vocab, records, k, task, opts, true);

  const rng = new Rng(seed);
  const coords: Array<[number, number]> = [];
  for (let s = 0; s < samples; s++) {
    const pIdx = rng.int(model.ps.params.length);
    const i = rng.int(model.ps.params[pIdx].value.length);
    coords.push([pIdx, i]);
  }

  let scale = 1e-8;
  for (const [pIdx, i] of coords) {
    const magnitude = Math.abs(model.ps.params[pIdx].grad[i]);
    if (magnitude > scale) scale = magnitude;
  }

  let maxRel = 0.0;
  for (const [pIdx, i] of coords) {
    const param = model.ps.params[pIdx];
    const saved = param.value[i];
    param.value[i] = saved + step;
    const plus = multiCaptionLoss(model, vocab, records, k, task, opts).value;
    param.value[i] = saved - step;
    const minus = multiCaptionLoss(model, vocab, records, k, task, opts).value;
    param.value[i] = saved;
    const numeric = (plus - minus) / (2.0 * step);
    const analytic = param.grad[i];
    const denom = Math.max(Math.abs(numeric), Math.abs(analytic), scale);
    const rel = Math.abs(numeric - analytic) / denom;
    if (rel > maxRel) maxRel = rel;
  }
  return { maxRelError: maxRel, checked: coords.length };
}
