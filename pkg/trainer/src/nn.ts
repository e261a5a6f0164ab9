/** Character-level seq2seq: embedding, stacked GRU encoder, stacked GRU
 * decoder initialized from the encoder's final hidden states, and a
 * softmax projection. Forward passes cache activations so the exact
 * analytic gradient can be accumulated by backpropagation through time;
 * everything runs in float64 so finite-difference checks are meaningful.
 */

import { Rng } from "./rng.js";
import { BOS, EOS } from "./vocab.js";

export class Param {
  grad: Float64Array;

  constructor(
    readonly name: string,
    readonly value: Float64Array,
  ) {
    this.grad = new Float64Array(value.length);
  }
}

export class ParamSet {
  readonly params: Param[] = [];

  add(name: string, size: number): Param {
    const param = new Param(name, new Float64Array(size));
    this.params.push(param);
    return param;
  }

  zeroGrads(): void {
    for (const p of this.params) p.grad.fill(0);
  }

  totalSize(): number {
    return this.params.reduce((acc, p) => acc + p.value.length, 0);
  }
}

function mv(out: Float64Array, w: Float64Array, x: Float64Array, rows: number, cols: number): void {
  for (let i = 0; i < rows; i++) {
    let acc = 0.0;
    const base = i * cols;
    for (let j = 0; j < cols; j++) acc += w[base + j] * x[j];
    out[i] = acc;
  }
}

function mvAcc(out: Float64Array, w: Float64Array, x: Float64Array, rows: number, cols: number): void {
  for (let i = 0; i < rows; i++) {
    let acc = 0.0;
    const base = i * cols;
    for (let j = 0; j < cols; j++) acc += w[base + j] * x[j];
    out[i] += acc;
  }
}

/** out += transpose(w) * d */
function mvTAcc(out: Float64Array, w: Float64Array, d: Float64Array, rows: number, cols: number): void {
  for (let i = 0; i < rows; i++) {
    const di = d[i];
    if (di === 0.0) continue;
    const base = i * cols;
    for (let j = 0; j < cols; j++) out[j] += w[base + j] * di;
  }
}

/** dW += d (outer) x */
function outerAcc(dw: Float64Array, d: Float64Array, x: Float64Array, rows: number, cols: number): void {
  for (let i = 0; i < rows; i++) {
    const di = d[i];
    if (di === 0.0) continue;
    const base = i * cols;
    for (let j = 0; j < cols; j++) dw[base + j] += di * x[j];
  }
}

const sigmoid = (v: number) => 1.0 / (1.0 + Math.exp(-v));

interface GruWeights {
  wz: Param; wr: Param; wn: Param;
  uz: Param; ur: Param; un: Param;
  bz: Param; br: Param; bn: Param;
}

interface GruStep {
  x: Float64Array;
  hPrev: Float64Array;
  z: Float64Array;
  r: Float64Array;
  rh: Float64Array;
  c: Float64Array;
  h: Float64Array;
}

export interface ModelConfig {
  width: number;
  layers: number;
  vocabSize: number;
  seed: number;
}

export class Seq2Seq {
  readonly ps = new ParamSet();
  readonly emb: Param;
  readonly enc: GruWeights[];
  readonly dec: GruWeights[];
  readonly wOut: Param;
  readonly bOut: Param;

  constructor(readonly cfg: ModelConfig) {
    const d = cfg.width;
    const v = cfg.vocabSize;
    this.emb = this.ps.add("emb", v * d);
    this.enc = [];
    this.dec = [];
    for (let l = 0; l < cfg.layers; l++) {
      this.enc.push(this.gruWeights(`enc${l}`, d));
      this.dec.push(this.gruWeights(`dec${l}`, d));
    }
    this.wOut = this.ps.add("wOut", v * d);
    this.bOut = this.ps.add("bOut", v);
    this.initWeights(new Rng(cfg.seed));
  }

  private gruWeights(prefix: string, d: number): GruWeights {
    return {
      wz: this.ps.add(`${prefix}.wz`, d * d),
      wr: this.ps.add(`${prefix}.wr`, d * d),
      wn: this.ps.add(`${prefix}.wn`, d * d),
      uz: this.ps.add(`${prefix}.uz`, d * d),
      ur: this.ps.add(`${prefix}.ur`, d * d),
      un: this.ps.add(`${prefix}.un`, d * d),
      bz: this.ps.add(`${prefix}.bz`, d),
      br: this.ps.add(`${prefix}.br`, d),
      bn: this.ps.add(`${prefix}.bn`, d),
    };
  }

  private initWeights(rng: Rng): void {
    const scale = 1.0 / Math.sqrt(this.cfg.width);
    for (const p of this.ps.params) {
      if (p.name.startsWith("b")) continue;
      if (p.name.endsWith("bz") || p.name.endsWith("br") || p.name.endsWith("bn")) continue;
      const s = p.name === "emb" ? 0.1 : scale;
      for (let i = 0; i < p.value.length; i++) p.value[i] = (rng.next() * 2 - 1) * s;
    }
  }

  zero(): void {
    for (const p of this.ps.params) p.value.fill(0);
  }

  private gruForward(w: GruWeights, x: Float64Array, hPrev: Float64Array): GruStep {
    const d = this.cfg.width;
    const z = new Float64Array(d);
    const r = new Float64Array(d);
    const rh = new Float64Array(d);
    const c = new Float64Array(d);
    const h = new Float64Array(d);
    mv(z, w.wz.value, x, d, d);
    mvAcc(z, w.uz.value, hPrev, d, d);
    mv(r, w.wr.value, x, d, d);
    mvAcc(r, w.ur.value, hPrev, d, d);
    for (let i = 0; i < d; i++) {
      z[i] = sigmoid(z[i] + w.bz.value[i]);
      r[i] = sigmoid(r[i] + w.br.value[i]);
      rh[i] = r[i] * hPrev[i];
    }
    mv(c, w.wn.value, x, d, d);
    mvAcc(c, w.un.value, rh, d, d);
    for (let i = 0; i < d; i++) {
      c[i] = Math.tanh(c[i] + w.bn.value[i]);
      h[i] = (1.0 - z[i]) * c[i] + z[i] * hPrev[i];
    }
    return { x, hPrev, z, r, rh, c, h };
  }

  /** dh flows in; returns nothing, accumulates dx into dxOut and dhPrev
   * into dhPrevOut (both added to). */
  private gruBackward(
    w: GruWeights,
    step: GruStep,
    dh: Float64Array,
    dxOut: Float64Array,
    dhPrevOut: Float64Array,
  ): void {
    const d = this.cfg.width;
    const daC = new Float64Array(d);
    const daZ = new Float64Array(d);
    const daR = new Float64Array(d);
    const dRh = new Float64Array(d);
    for (let i = 0; i < d; i++) {
      const dc = dh[i] * (1.0 - step.z[i]);
      const dz = dh[i] * (step.hPrev[i] - step.c[i]);
      dhPrevOut[i] += dh[i] * step.z[i];
      daC[i] = dc * (1.0 - step.c[i] * step.c[i]);
      daZ[i] = dz * step.z[i] * (1.0 - step.z[i]);
    }
    outerAcc(w.wn.grad, daC, step.x, d, d);
    outerAcc(w.un.grad, daC, step.rh, d, d);
    mvTAcc(dxOut, w.wn.value, daC, d, d);
    mvTAcc(dRh, w.un.value, daC, d, d);
    for (let i = 0; i < d; i++) {
      w.bn.grad[i] += daC[i];
      const dr = dRh[i] * step.hPrev[i];
      dhPrevOut[i] += dRh[i] * step.r[i];
      daR[i] = dr * step.r[i] * (1.0 - step.r[i]);
      w.bz.grad[i] += daZ[i];
      w.br.grad[i] += daR[i];
    }
    outerAcc(w.wz.grad, daZ, step.x, d, d);
    outerAcc(w.uz.grad, daZ, step.hPrev, d, d);
    mvTAcc(dxOut, w.wz.value, daZ, d, d);
    mvTAcc(dhPrevOut, w.uz.value, daZ, d, d);
    outerAcc(w.wr.grad, daR, step.x, d, d);
    outerAcc(w.ur.grad, daR, step.hPrev, d, d);
    mvTAcc(dxOut, w.wr.value, daR, d, d);
    mvTAcc(dhPrevOut, w.ur.value, daR, d, d);
  }

  private embed(id: number): Float64Array {
    const d = this.cfg.width;
    return this.emb.value.subarray(id * d, id * d + d) as Float64Array;
  }

  /** Teacher-forced negative log-likelihood of the target sequence
   * (token log-probs summed over the sequence, base e). */
  forward(srcIds: number[], tgtIds: number[]): ForwardState {
    const d = this.cfg.width;
    const v = this.cfg.vocabSize;
    const layers = this.cfg.layers;
    const encSteps: GruStep[][] = [];
    let hidden: Float64Array[] = Array.from({ length: layers }, () => new Float64Array(d));
    for (const id of srcIds) {
      let below = this.embed(id);
      const column: GruStep[] = [];
      for (let l = 0; l < layers; l++) {
        const step = this.gruForward(this.enc[l], below, hidden[l]);
        column.push(step);
        hidden[l] = step.h;
        below = step.h;
      }
      encSteps.push(column);
    }
    const decInputs = [BOS, ...tgtIds];
    const targets = [...tgtIds, EOS];
    const decSteps: GruStep[][] = [];
    const probRows: Float64Array[] = [];
    let nll = 0.0;
    let decHidden = hidden.map((h) => h); // decoder starts from encoder finals
    for (let t = 0; t < decInputs.length; t++) {
      let below = this.embed(decInputs[t]);
      const column: GruStep[] = [];
      for (let l = 0; l < layers; l++) {
        const step = this.gruForward(this.dec[l], below, decHidden[l]);
        column.push(step);
        decHidden[l] = step.h;
        below = step.h;
      }
      decSteps.push(column);
      const logits = new Float64Array(v);
      mv(logits, this.wOut.value, below, v, d);
      let max = -Infinity;
      for (let i = 0; i < v; i++) {
        logits[i] += this.bOut.value[i];
        if (logits[i] > max) max = logits[i];
      }
      let sum = 0.0;
      const probs = new Float64Array(v);
      for (let i = 0; i < v; i++) {
        probs[i] = Math.exp(logits[i] - max);
        sum += probs[i];
      }
      for (let i = 0; i < v; i++) probs[i] /= sum;
      nll -= Math.log(probs[targets[t]]);
      probRows.push(probs);
    }
    return { srcIds, tgtIds, encSteps, decSteps, probRows, targets, decInputs, nll };
  }

  /** Accumulates d(nll * scale)/d(params) into the grads. */
  backward(state: ForwardState, scale: number): void {
    const d = this.cfg.width;
    const v = this.cfg.vocabSize;
    const layers = this.cfg.layers;
    const decT = state.decInputs.length;
    const dDecCarry: Float64Array[] = Array.from({ length: layers }, () => new Float64Array(d));
    for (let t = decT - 1; t >= 0; t--) {
      const probs = state.probRows[t];
      const dLogits = new Float64Array(v);
      for (let i = 0; i < v; i++) dLogits[i] = probs[i] * scale;
      dLogits[state.targets[t]] -= scale;
      const top = state.decSteps[t][layers - 1].h;
      outerAcc(this.wOut.grad, dLogits, top, v, d);
      for (let i = 0; i < v; i++) this.bOut.grad[i] += dLogits[i];
      const dTop = new Float64Array(d);
      mvTAcc(dTop, this.wOut.value, dLogits, v, d);

      let dFromAbove = dTop;
      for (let l = layers - 1; l >= 0; l--) {
        const dh = dDecCarry[l];
        for (let i = 0; i < d; i++) dh[i] += dFromAbove[i];
        const dx = new Float64Array(d);
        const dhPrev = new Float64Array(d);
        this.gruBackward(this.dec[l], state.decSteps[t][l], dh, dx, dhPrev);
        dDecCarry[l] = dhPrev;
        dFromAbove = dx;
      }
      this.accumulateEmbGrad(state.decInputs[t], dFromAbove);
    }
    // decoder initial hiddens are the encoder finals
    const dEncCarry = dDecCarry;
    const encT = state.srcIds.length;
    for (let t = encT - 1; t >= 0; t--) {
      let dFromAbove: Float64Array | null = null;
      for (let l = layers - 1; l >= 0; l--) {
        const dh = dEncCarry[l];
        if (dFromAbove !== null) {
          for (let i = 0; i < d; i++) dh[i] += dFromAbove[i];
        }
        const dx = new Float64Array(d);
        const dhPrev = new Float64Array(d);
        this.gruBackward(this.enc[l], state.encSteps[t][l], dh, dx, dhPrev);
        dEncCarry[l] = dhPrev;
        dFromAbove = dx;
      }
      this.accumulateEmbGrad(state.srcIds[t], dFromAbove!);
    }
  }

  private accumulateEmbGrad(id: number, dx: Float64Array): void {
    const d = this.cfg.width;
    const base = id * d;
    for (let i = 0; i < d; i++) this.emb.grad[base + i] += dx[i];
  }

  loss(srcIds: number[], tgtIds: number[]): number {
    return this.forward(srcIds, tgtIds).nll;
  }

  greedyDecode(srcIds: number[], maxLen: number): number[] {
    const d = this.cfg.width;
    const v = this.cfg.vocabSize;
    const layers = this.cfg.layers;
    let hidden: Float64Array[] = Array.from({ length: layers }, () => new Float64Array(d));
    for (const id of srcIds) {
      let below = this.embed(id);
      for (let l = 0; l < layers; l++) {
        const step = this.gruForward(this.enc[l], below, hidden[l]);
        hidden[l] = step.h;
        below = step.h;
      }
    }
    const out: number[] = [];
    let prev = BOS;
    const logits = new Float64Array(v);
    for (let t = 0; t < maxLen; t++) {
      let below = this.embed(prev);
      for (let l = 0; l < layers; l++) {
        const step = this.gruForward(this.dec[l], below, hidden[l]);
        hidden[l] = step.h;
        below = step.h;
      }
      mv(logits, this.wOut.value, below, v, d);
      let best = 0;
      let bestVal = -Infinity;
      for (let i = 0; i < v; i++) {
        const val = logits[i] + this.bOut.value[i];
        if (val > bestVal) {
          bestVal = val;
          best = i;
        }
      }
      if (best === EOS) break;
      out.push(best);
      prev = best;
    }
    return out;
  }
}

export interface ForwardState {
  srcIds: number[];
  tgtIds: number[];
  encSteps: GruStep[][];
  decSteps: GruStep[][];
  probRows: Float64Array[];
  targets: number[];
  decInputs: number[];
  nll: number;
}

export class Adam {
  private m: Float64Array[];
  private v: Float64Array[];
  private t = 0;

  constructor(
    private readonly ps: ParamSet,
    private readonly lr: number,
    private readonly beta1 = 0.9,
    private readonly beta2 = 0.999,
    private readonly eps = 1e-8,
  ) {
    this.m = ps.params.map((p) => new Float64Array(p.value.length));
    this.v = ps.params.map((p) => new Float64Array(p.value.length));
  }

  step(): void {
    this.t += 1;
    const c1 = 1.0 - Math.pow(this.beta1, this.t);
    const c2 = 1.0 - Math.pow(this.beta2, this.t);
    this.ps.params.forEach((p, idx) => {
      const m = this.m[idx];
      const v = this.v[idx];
      for (let i = 0; i < p.value.length; i++) {
        const g = p.grad[i];
        m[i] = this.beta1 * m[i] + (1.0 - this.beta1) * g;
        v[i] = this.beta2 * v[i] + (1.0 - this.beta2) * g * g;
        p.value[i] -= (this.lr * (m[i] / c1)) / (Math.sqrt(v[i] / c2) + this.eps);
      }
    });
  }
}
