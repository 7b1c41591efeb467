/**
 * End-to-end demonstration: build a small tensor-file folder, wrap it
 * in an augmentation-backed dataloader, and print per-batch statistics.
 *
 * Run with `npm run example`.
 */

import { mkdtempSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { pathToFileURL } from 'node:url';

import { BoundBatch } from './batch.js';
import { encodeHat } from './hat.js';
import { encodeLabelCsv } from './labels.js';
import { HatFolderDataset, iterBatches } from './dataloader.js';

export interface BatchStats {
  batchIndex: number;
  n: number;
  mean: number;
  std: number;
  changedFraction: number;
  labelCounts: Record<number, number>;
}

/** Deterministic uniform floats for the demo images (LCG, 2^31-1). */
function makeLcg(seed: number): () => number {
  let state = seed % 2147483647;
  if (state <= 0) {
    state += 2147483646;
  }
  return () => {
    state = (state * 16807) % 2147483647;
    return (state - 1) / 2147483646;
  };
}

/** Write `count` random images plus labels.csv into a fresh temp folder. */
export function writeDemoFolder(count: number, side: number, channels: number, seed = 1): string {
  const dir = mkdtempSync(join(tmpdir(), 'freqaug-demo-'));
  const next = makeLcg(seed);
  const labels = new Map<string, number>();
  for (let i = 0; i < count; i++) {
    const data = new Float32Array(side * side * channels);
    for (let j = 0; j < data.length; j++) {
      data[j] = Math.fround(next());
    }
    const id = `img_${String(i).padStart(5, '0')}`;
    writeFileSync(join(dir, `${id}.hat`), encodeHat({ data, height: side, width: side, channels }));
    labels.set(id, i % 4);
  }
  writeFileSync(join(dir, 'labels.csv'), encodeLabelCsv(labels));
  return dir;
}

function statsFor(batchIndex: number, plain: BoundBatch, augmented: BoundBatch): BatchStats {
  let sum = 0;
  let sumSq = 0;
  let changed = 0;
  for (let i = 0; i < augmented.data.length; i++) {
    const v = augmented.data[i];
    sum += v;
    sumSq += v * v;
    if (v !== plain.data[i]) {
      changed += 1;
    }
  }
  const mean = sum / augmented.data.length;
  const variance = Math.max(sumSq / augmented.data.length - mean * mean, 0);
  const labelCounts: Record<number, number> = {};
  for (const label of augmented.labels) {
    labelCounts[label] = (labelCounts[label] ?? 0) + 1;
  }
  return {
    batchIndex,
    n: augmented.n,
    mean,
    std: Math.sqrt(variance),
    changedFraction: changed / augmented.data.length,
    labelCounts,
  };
}

/**
 * The demo: load the folder, iterate augmented batches, collect stats.
 * Kept side-effect free (no printing) so tests can call it directly.
 */
export function runExample(imageCount = 64, batchSize = 16): BatchStats[] {
  const dir = writeDemoFolder(imageCount, 16, 3);
  try {
    const dataset = HatFolderDataset.load(dir);
    const plainBatches = Array.from(iterBatches(dataset, { batchSize }));
    const stats: BatchStats[] = [];
    let index = 0;
    for (const batch of iterBatches(dataset, {
      batchSize,
      augment: { mode: 'ha_pp_ps', seed: 7, config: { pPaired: 1.0, pSingle: 1.0 } },
    })) {
      stats.push(statsFor(index, plainBatches[index], batch));
      index += 1;
    }
    return stats;
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function main(): void {
  const started = Date.now();
  const stats = runExample();
  for (const s of stats) {
    const labels = Object.entries(s.labelCounts)
      .map(([label, count]) => `${label}:${count}`)
      .join(' ');
    console.log(
      `batch ${s.batchIndex}: n=${s.n} mean=${s.mean.toFixed(4)} std=${s.std.toFixed(4)} ` +
        `changed=${(100 * s.changedFraction).toFixed(1)}% labels={${labels}}`,
    );
  }
  console.log(`done in ${((Date.now() - started) / 1000).toFixed(1)}s`);
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main();
}
