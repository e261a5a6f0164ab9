/** CLI: train on an augmented JSONL corpus, write the loss trace and
 * greedy-decoded predictions; or run a gradient check.
 *
 *   node dist/cli.js train --train-file t.jsonl --valid-file v.jsonl \
 *       --task gen --k 2 --steps 1200 --seed 1 \
 *       --trace trace.json --pred pred.tsv
 *   node dist/cli.js gradcheck --train-file t.jsonl --k 1
 */

import { loadAugmented, savePredictionsTsv } from "./data.js";
import { gradCheck } from "./gradcheck.js";
import { Seq2Seq } from "./nn.js";
import { DEFAULT_CONFIG, TrainConfig, buildVocab, predict, saveTrace, train } from "./train.js";

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad argument ${key}`);
    }
    out.set(key.slice(2), argv[i + 1]);
  }
  return out;
}

function configFrom(args: Map<string, string>): TrainConfig {
  const cfg = { ...DEFAULT_CONFIG };
  const num = (name: string, current: number) =>
    args.has(name) ? Number(args.get(name)) : current;
  cfg.task = (args.get("task") ?? cfg.task) as TrainConfig["task"];
  cfg.k = num("k", cfg.k);
  cfg.width = num("width", cfg.width);
  cfg.layers = num("layers", cfg.layers);
  cfg.steps = num("steps", cfg.steps);
  cfg.evalEvery = num("eval-every", cfg.evalEvery);
  cfg.lr = num("lr", cfg.lr);
  cfg.seed = num("seed", cfg.seed);
  cfg.maxSourceLen = num("max-source-len", cfg.maxSourceLen);
  cfg.maxTargetLen = num("max-target-len", cfg.maxTargetLen);
  return cfg;
}

function main(): number {
  const [command, ...rest] = process.argv.slice(2);
  if (command !== "train" && command !== "gradcheck") {
    console.error("usage: cli.js train|gradcheck --train-file ... [options]");
    return 1;
  }
  const args = parseArgs(rest);
  const trainFile = args.get("train-file");
  if (!trainFile) {
    console.error("--train-file is required");
    return 1;
  }
  const trainRecords = loadAugmented(trainFile);
  const cfg = configFrom(args);

  if (command === "gradcheck") {
    const subset = trainRecords.slice(0, Number(args.get("records") ?? 2));
    const vocab = buildVocab([subset]);
    const model = new Seq2Seq({
      width: Number(args.get("width") ?? 16),
      layers: cfg.layers,
      vocabSize: vocab.size,
      seed: cfg.seed,
    });
    const result = gradCheck(model, vocab, subset, cfg.k, cfg.task, {
      maxSourceLen: 24,
      maxTargetLen: 16,
    });
    console.log(JSON.stringify(result));
    return result.maxRelError < 1e-4 ? 0 : 2;
  }

  const validFile = args.get("valid-file");
  const validRecords = validFile ? loadAugmented(validFile) : [];
  const started = Date.now();
  const result = train(cfg, trainRecords, validRecords);
  const elapsed = ((Date.now() - started) / 1000).toFixed(1);
  console.error(
    `trained ${cfg.steps} steps in ${elapsed}s; best valid loss ${result.bestValidLoss.toFixed(4)}`,
  );
  if (args.has("trace")) saveTrace(result.trace, args.get("trace")!);
  if (args.has("pred")) {
    const target = validRecords.length ? validRecords : trainRecords;
    savePredictionsTsv(predict(result, target, cfg), args.get("pred")!);
  }
  return 0;
}

process.exit(main());
