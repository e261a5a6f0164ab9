/** Character vocabulary shared by SMILES and captions. */

export const BOS = 0;
export const EOS = 1;
export const UNK = 2;
const SPECIALS = 3;

export class Vocab {
  readonly charToId: Map<string, number>;
  readonly idToChar: string[];

  constructor(chars: Iterable<string>) {
    const unique = Array.from(new Set(chars)).sort();
    this.charToId = new Map();
    this.idToChar = ["<s>", "</s>", "<unk>"];
    unique.forEach((ch, i) => {
      this.charToId.set(ch, SPECIALS + i);
      this.idToChar.push(ch);
    });
  }

  get size(): number {
    return this.idToChar.length;
  }

  static fromTexts(texts: Iterable<string>): Vocab {
    const chars = new Set<string>();
    for (const text of texts) {
      for (const ch of text) chars.add(ch);
    }
    return new Vocab(chars);
  }

  encode(text: string): number[] {
    const ids: number[] = [];
    for (const ch of text) ids.push(this.charToId.get(ch) ?? UNK);
    return ids;
  }

  decode(ids: number[]): string {
    return ids
      .filter((id) => id >= SPECIALS)
      .map((id) => this.idToChar[id])
      .join("");
  }
}
