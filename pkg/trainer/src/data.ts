/** Reading the augmented-corpus JSONL interchange format.
 *
 * One record per line: {id, smiles, caption, rewrites: [{text, provider,
 * round, created_at}]}. Rewrites beyond the requested k are ignored;
 * records with fewer than k rewrites raise RaggedCaptions.
 */

import * as fs from "node:fs";

export interface AugmentedRecord {
  id: string;
  smiles: string;
  caption: string;
  rewrites: string[];
}

export class RaggedCaptions extends Error {
  constructor(recordId: string, have: number, want: number) {
    super(`record ${recordId}: has ${have} rewrites, need ${want}`);
    this.name = "RaggedCaptions";
  }
}

export function loadAugmented(path: string): AugmentedRecord[] {
  const out: AugmentedRecord[] = [];
  const text = fs.readFileSync(path, "utf-8");
  let lineNo = 0;
  for (const line of text.split("\n")) {
    lineNo += 1;
    if (line.trim() === "") continue;
    let obj: any;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new Error(`${path}:${lineNo}: not JSON (${err})`);
    }
    if (
      typeof obj.id !== "string" ||
      typeof obj.smiles !== "string" ||
      typeof obj.caption !== "string" ||
      !Array.isArray(obj.rewrites)
    ) {
      throw new Error(`${path}:${lineNo}: missing id/smiles/caption/rewrites`);
    }
    out.push({
      id: obj.id,
      smiles: obj.smiles,
      caption: obj.caption,
      rewrites: obj.rewrites.map((rw: any) => String(rw.text)),
    });
  }
  return out;
}

/** The k+1 caption set of a record (original first). */
export function captionSet(record: AugmentedRecord, k: number): string[] {
  if (record.rewrites.length < k) {
    throw new RaggedCaptions(record.id, record.rewrites.length, k);
  }
  return [record.caption, ...record.rewrites.slice(0, k)];
}

export interface SeqPair {
  recordId: string;
  source: string;
  target: string;
}

/** Flattened (input, output) pairs for a direction; gen maps caption to
 * SMILES, cap maps SMILES to caption. */
export function flattenPairs(
  records: AugmentedRecord[],
  k: number,
  task: "gen" | "cap",
): SeqPair[] {
  const pairs: SeqPair[] = [];
  for (const record of records) {
    for (const caption of captionSet(record, k)) {
      if (task === "gen") {
        pairs.push({ recordId: record.id, source: caption, target: record.smiles });
      } else {
        pairs.push({ recordId: record.id, source: record.smiles, target: caption });
      }
    }
  }
  return pairs;
}

export function savePredictionsTsv(rows: Array<[string, string]>, path: string): void {
  const text = rows.map(([id, pred]) => `${id}\t${pred}`).join("\n");
  fs.writeFileSync(path, text.length ? text + "\n" : "", "utf-8");
}
