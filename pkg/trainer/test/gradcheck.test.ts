import { describe, expect, it } from "vitest";

import { loadAugmented } from "../src/data.js";
import { gradCheck } from "../src/gradcheck.js";
import { multiCaptionLoss } from "../src/loss.js";
import { Seq2Seq } from "../src/nn.js";
import { buildVocab } from "../src/train.js";

const RECORDS = loadAugmented("fixtures/train_aug.jsonl").slice(0, 2);
const VOCAB = buildVocab([RECORDS]);
const OPTS = { maxSourceLen: 24, maxTargetLen: 16 };

describe("gradient check", () => {
  it("analytic gradient matches central differences (k = 1)", () => {
    const model = new Seq2Seq({ width: 12, layers: 2, vocabSize: VOCAB.size, seed: 5 });
    const result = gradCheck(model, VOCAB, RECORDS, 1, "gen", OPTS, 80, 1e-4);
    expect(result.checked).toBe(80);
    expect(result.maxRelError).toBeLessThan(1e-4);
  });

  it("matches in the captioning direction too", () => {
    const model = new Seq2Seq({ width: 10, layers: 2, vocabSize: VOCAB.size, seed: 6 });
    const result = gradCheck(model, VOCAB, RECORDS, 1, "cap", OPTS, 40, 1e-4);
    expect(result.maxRelError).toBeLessThan(1e-4);
  });

  it("k = 0 and duplicated-caption k = 1 produce identical gradients", () => {
    const duplicated = RECORDS.map((r) => ({ ...r, rewrites: [r.caption] }));
    const a = new Seq2Seq({ width: 12, layers: 2, vocabSize: VOCAB.size, seed: 9 });
    a.ps.zeroGrads();
    multiCaptionLoss(a, VOCAB, RECORDS, 0, "gen", OPTS, true);
    const gradsA = a.ps.params.map((p) => Float64Array.from(p.grad));
    a.ps.zeroGrads();
    multiCaptionLoss(a, VOCAB, duplicated, 1, "gen", OPTS, true);
    a.ps.params.forEach((p, idx) => {
      for (let i = 0; i < p.grad.length; i++) {
        expect(Math.abs(p.grad[i] - gradsA[idx][i])).toBeLessThan(1e-6);
      }
    });
  });

  it("zero perturbation set reports zero error by construction", () => {
    const model = new Seq2Seq({ width: 8, layers: 2, vocabSize: VOCAB.size, seed: 10 });
    const result = gradCheck(model, VOCAB, RECORDS, 0, "gen", OPTS, 0, 1e-4);
    expect(result.checked).toBe(0);
    expect(result.maxRelError).toBe(0);
  });
});
