import { describe, expect, it } from "vitest";

import { AugmentedRecord, RaggedCaptions, loadAugmented } from "../src/data.js";
import { multiCaptionLoss, singleCaptionLoss } from "../src/loss.js";
import { Seq2Seq } from "../src/nn.js";
import { buildVocab } from "../src/train.js";

const RECORDS = loadAugmented("fixtures/train_aug.jsonl").slice(0, 8);
const VOCAB = buildVocab([RECORDS]);

function tinyModel(seed = 3): Seq2Seq {
  return new Seq2Seq({ width: 24, layers: 2, vocabSize: VOCAB.size, seed });
}

const OPTS = { maxSourceLen: 40, maxTargetLen: 24 };

describe("multi-caption loss", () => {
  it("reduces exactly to the single-caption objective at k = 0", () => {
    const model = tinyModel();
    for (const task of ["gen", "cap"] as const) {
      const multi = multiCaptionLoss(model, VOCAB, RECORDS, 0, task, OPTS);
      const single = singleCaptionLoss(model, VOCAB, RECORDS, task, OPTS);
      expect(Math.abs(multi.value - single)).toBeLessThan(1e-6);
    }
  });

  it("equals the k = 0 loss when every extra caption is a duplicate", () => {
    const model = tinyModel(11);
    const duplicated: AugmentedRecord[] = RECORDS.map((r) => ({
      ...r,
      rewrites: [r.caption],
    }));
    const base = multiCaptionLoss(model, VOCAB, RECORDS, 0, "gen", OPTS);
    const dup = multiCaptionLoss(model, VOCAB, duplicated, 1, "gen", OPTS);
    expect(Math.abs(dup.value - base.value)).toBeLessThan(1e-6);
  });

  it("equals the k = 0 loss with m copies of one caption", () => {
    const model = tinyModel(12);
    const copied: AugmentedRecord[] = RECORDS.map((r) => ({
      ...r,
      rewrites: [r.caption, r.caption, r.caption],
    }));
    const base = multiCaptionLoss(model, VOCAB, RECORDS, 0, "gen", OPTS);
    const multi = multiCaptionLoss(model, VOCAB, copied, 3, "gen", OPTS);
    expect(Math.abs(multi.value - base.value)).toBeLessThan(1e-9);
  });

  it("is invariant under permuting the caption order", () => {
    const model = tinyModel(13);
    const forward = multiCaptionLoss(model, VOCAB, RECORDS, 2, "gen", OPTS);
    const reversed: AugmentedRecord[] = RECORDS.map((r) => ({
      ...r,
      caption: r.rewrites[1],
      rewrites: [r.rewrites[0], r.caption],
    }));
    const swapped = multiCaptionLoss(model, VOCAB, reversed, 2, "gen", OPTS);
    expect(Math.abs(forward.value - swapped.value)).toBeLessThan(1e-9);
  });

  it("scores exactly ln V per token under the uniform model", () => {
    const model = tinyModel(14);
    model.zero(); // all-zero logits -> uniform distribution
    const lnV = Math.log(VOCAB.size);
    for (const k of [0, 2]) {
      const loss = multiCaptionLoss(model, VOCAB, RECORDS, k, "gen", OPTS);
      expect(Math.abs(loss.value * (k + 1) * RECORDS.length - lnV * loss.tokens)).toBeLessThan(1e-9);
      for (const row of loss.perCaption) {
        for (const nll of row) {
          const quotient = nll / lnV;
          expect(Math.abs(quotient - Math.round(quotient))).toBeLessThan(1e-9);
        }
      }
    }
  });

  it("rejects records with fewer rewrites than k", () => {
    const model = tinyModel(15);
    expect(() => multiCaptionLoss(model, VOCAB, RECORDS, 3, "gen", OPTS)).toThrow(RaggedCaptions);
  });
});
