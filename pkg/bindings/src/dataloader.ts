/**
 * A small batching dataloader over a folder of raw tensor files, with
 * optional augmentation applied per batch through the binding.
 */

import { readFileSync } from 'node:fs';
import { join } from 'node:path';

import { BoundBatch, validateBatch } from './batch.js';
import { AugmentConfigInput, Mode, boundAugmentBatch, listHatFiles } from './binding.js';
import { decodeHat } from './hat.js';
import { decodeLabelCsv } from './labels.js';

export interface DataloaderOptions {
  batchSize?: number;
  /** Drop a trailing batch smaller than batchSize. */
  dropLast?: boolean;
  /** Shuffle deterministically with this seed; omit to keep file order. */
  shuffleSeed?: number;
  /** Augment every batch with this mode through the binding. */
  augment?: {
    mode: Mode;
    config?: AugmentConfigInput;
    /** Batch b uses augmentation seed `seed + b`. */
    seed?: number;
  };
}

/** An in-memory dataset loaded from `<dir>/*.hat` plus `<dir>/labels.csv`. */
export class HatFolderDataset {
  readonly batch: BoundBatch;
  readonly ids: string[];

  private constructor(batch: BoundBatch, ids: string[]) {
    this.batch = batch;
    this.ids = ids;
  }

  get length(): number {
    return this.batch.n;
  }

  /**
   * Load every tensor file in sorted filename order. All images must
   * share one shape and appear in the label CSV under their stem.
   */
  static load(dir: string): HatFolderDataset {
    const files = listHatFiles(dir);
    if (files.length === 0) {
      throw new Error(`${dir}: no .hat files found`);
    }
    const labels = decodeLabelCsv(readFileSync(join(dir, 'labels.csv'), 'utf8'));
    const first = decodeHat(readBytes(join(dir, files[0])));
    const size = first.data.length;
    const data = new Float32Array(files.length * size);
    const labelArray = new Int32Array(files.length);
    const ids: string[] = [];
    for (let i = 0; i < files.length; i++) {
      const image = decodeHat(readBytes(join(dir, files[i])));
      if (
        image.height !== first.height ||
        image.width !== first.width ||
        image.channels !== first.channels
      ) {
        throw new Error(`${files[i]}: shape differs from ${files[0]}`);
      }
      data.set(image.data, i * size);
      const id = files[i].replace(/\.hat$/, '');
      const label = labels.get(id);
      if (label === undefined) {
        throw new Error(`labels.csv: no label for ${JSON.stringify(id)}`);
      }
      labelArray[i] = label;
      ids.push(id);
    }
    const batch: BoundBatch = {
      data,
      labels: labelArray,
      n: files.length,
      height: first.height,
      width: first.width,
      channels: first.channels,
    };
    validateBatch(batch);
    return new HatFolderDataset(batch, ids);
  }

  /** Copy the given indices into a fresh batch. */
  subset(indices: number[]): BoundBatch {
    const size = this.batch.height * this.batch.width * this.batch.channels;
    const data = new Float32Array(indices.length * size);
    const labels = new Int32Array(indices.length);
    for (let i = 0; i < indices.length; i++) {
      const src = indices[i];
      data.set(this.batch.data.subarray(src * size, (src + 1) * size), i * size);
      labels[i] = this.batch.labels[src];
    }
    return {
      data,
      labels,
      n: indices.length,
      height: this.batch.height,
      width: this.batch.width,
      channels: this.batch.channels,
    };
  }
}

/** xorshift32: tiny, seeded, reproducible. Zero seeds are re-mapped. */
function makeXorshift(seed: number): () => number {
  let state = seed >>> 0;
  if (state === 0) {
    state = 0x9e3779b9;
  }
  return () => {
    state ^= state << 13;
    state >>>= 0;
    state ^= state >>> 17;
    state ^= state << 5;
    state >>>= 0;
    return state / 0x100000000;
  };
}

function orderedIndices(n: number, shuffleSeed?: number): number[] {
  const indices = Array.from({ length: n }, (_, i) => i);
  if (shuffleSeed !== undefined) {
    const next = makeXorshift(shuffleSeed);
    for (let i = n - 1; i > 0; i--) {
      const j = Math.floor(next() * (i + 1));
      [indices[i], indices[j]] = [indices[j], indices[i]];
    }
  }
  return indices;
}

/**
 * Iterate the dataset in batches, augmenting each one when asked.
 * Batch b of an augmented loader uses augmentation seed `seed + b`, so
 * one loader configuration is fully reproducible.
 */
export function* iterBatches(
  dataset: HatFolderDataset,
  options: DataloaderOptions = {},
): Generator<BoundBatch> {
  const batchSize = options.batchSize ?? dataset.length;
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new Error(`batchSize must be a positive integer, got ${batchSize}`);
  }
  const indices = orderedIndices(dataset.length, options.shuffleSeed);
  let batchIndex = 0;
  for (let start = 0; start < indices.length; start += batchSize) {
    const slice = indices.slice(start, start + batchSize);
    if (options.dropLast && slice.length < batchSize) {
      return;
    }
    let batch = dataset.subset(slice);
    if (options.augment) {
      batch = boundAugmentBatch(
        batch,
        options.augment.mode,
        options.augment.config ?? {},
        (options.augment.seed ?? 0) + batchIndex,
      );
    }
    yield batch;
    batchIndex += 1;
  }
}

function readBytes(path: string): Uint8Array {
  const buf = readFileSync(path);
  return new Uint8Array(buf.buffer, buf.byteOffset, buf.byteLength);
}
