import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { loadAugmented, savePredictionsTsv } from "../src/data.js";
import { DEFAULT_CONFIG, TrainConfig, predict, saveTrace, train } from "../src/train.js";

const TRAIN = loadAugmented("fixtures/train_aug.jsonl");
const VALID = loadAugmented("fixtures/valid.jsonl");

function quickConfig(overrides: Partial<TrainConfig> = {}): TrainConfig {
  return {
    ...DEFAULT_CONFIG,
    width: 32,
    steps: 160,
    evalEvery: 40,
    maxSourceLen: 60,
    maxTargetLen: 24,
    ...overrides,
  };
}

describe("training loop", () => {
  it("is deterministic for a fixed seed", () => {
    const cfg = quickConfig({ seed: 21, steps: 80, evalEvery: 20 });
    const subset = TRAIN.slice(0, 24);
    const first = train(cfg, subset, VALID.slice(0, 8));
    const second = train(cfg, subset, VALID.slice(0, 8));
    const lastA = first.trace[first.trace.length - 1];
    const lastB = second.trace[second.trace.length - 1];
    expect(Math.abs(lastA.train_loss - lastB.train_loss)).toBeLessThan(1e-6);
    expect(Math.abs(lastA.valid_loss - lastB.valid_loss)).toBeLessThan(1e-6);
  }, 240_000);

  it("smoothed training loss decreases over the run", () => {
    const cfg = quickConfig({ seed: 22 });
    const result = train(cfg, TRAIN.slice(0, 40), VALID.slice(0, 8));
    const first = result.trace[0].train_loss;
    const last = result.trace[result.trace.length - 1].train_loss;
    expect(last).toBeLessThan(first);
  }, 240_000);

  it("writes the trace JSON schema and prediction TSV", () => {
    const cfg = quickConfig({ seed: 23, steps: 40, evalEvery: 20 });
    const result = train(cfg, TRAIN.slice(0, 12), VALID.slice(0, 4));
    const tracePath = path.join(os.tmpdir(), `trace-${Date.now()}.json`);
    saveTrace(result.trace, tracePath);
    const rows = JSON.parse(fs.readFileSync(tracePath, "utf-8"));
    expect(Array.isArray(rows)).toBe(true);
    for (const row of rows) {
      expect(Object.keys(row).sort()).toEqual(["epoch", "train_loss", "valid_loss"]);
    }
    const preds = predict(result, VALID.slice(0, 4), cfg);
    expect(preds).toHaveLength(4);
    const predPath = path.join(os.tmpdir(), `pred-${Date.now()}.tsv`);
    savePredictionsTsv(preds, predPath);
    const lines = fs.readFileSync(predPath, "utf-8").trim().split("\n");
    expect(lines[0].split("\t")[0]).toBe(VALID[0].id);
  }, 240_000);
});
