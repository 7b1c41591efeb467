/**
 * The binding itself: hand a typed batch to the augmentation CLI and
 * read the result back, bit-exact.
 *
 * The process boundary is the whole point. Inputs go out as raw tensor
 * files plus a label CSV, one `augment` invocation runs with the batch
 * size pinned to the batch length (so the run is a single batch and its
 * random stream is fully determined by the seed), and the outputs come
 * back as freshly allocated buffers. No state survives a call, so
 * concurrent callers with different configs cannot interfere.
 */

import { spawnSync } from 'node:child_process';
import { mkdirSync, mkdtempSync, readFileSync, readdirSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { BoundBatch, BoundaryError, imageSize, validateBatch } from './batch.js';
import { decodeHat, encodeHat } from './hat.js';
import { decodeLabelCsv, encodeLabelCsv } from './labels.js';

/** The nine augmentation modes the CLI accepts. */
export const MODES = [
  'apr_p',
  'apr_s',
  'apr_ps',
  'ha_p',
  'ha_s',
  'ha_ps',
  'ha_pp_p',
  'ha_pp_s',
  'ha_pp_ps',
] as const;

export type Mode = (typeof MODES)[number];

/** Optional augmentation parameters; omitted fields use CLI defaults. */
export interface AugmentConfigInput {
  kernelSize?: number;
  sigma?: number;
  pPaired?: number;
  pSingle?: number;
  pInnerApr?: number;
}

const CONFIG_FLAGS: Record<keyof AugmentConfigInput, string> = {
  kernelSize: '--kernel-size',
  sigma: '--sigma',
  pPaired: '--p-paired',
  pSingle: '--p-single',
  pInnerApr: '--p-inner-apr',
};

/** Raised when the CLI process fails or emits something unreadable. */
export class AugmentProcessError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'AugmentProcessError';
  }
}

function pythonExecutable(): string {
  return process.env.FREQAUG_PYTHON ?? 'python3';
}

function imageId(index: number): string {
  return `img_${String(index).padStart(5, '0')}`;
}

function configFlags(config: AugmentConfigInput): string[] {
  const flags: string[] = [];
  for (const key of Object.keys(config)) {
    const flag = CONFIG_FLAGS[key as keyof AugmentConfigInput];
    if (flag === undefined) {
      throw new BoundaryError(key, 'unknown config field');
    }
    const value = config[key as keyof AugmentConfigInput];
    if (value === undefined) {
      continue;
    }
    if (typeof value !== 'number' || !Number.isFinite(value)) {
      throw new BoundaryError(key, `must be a finite number, got ${String(value)}`);
    }
    flags.push(flag, String(value));
  }
  return flags;
}

/**
 * Augment one batch through the CLI and return a fresh batch.
 *
 * Output image i is the augmentation of input image i and keeps label
 * i; the buffers are newly allocated, never views into the input.
 *
 * @param batch - Validated at the boundary; the input is never mutated
 * @param mode - One of the nine augmentation modes
 * @param config - Kernel and probability overrides
 * @param seed - Seed for the augmentation's random stream
 */
export function boundAugmentBatch(
  batch: BoundBatch,
  mode: Mode | string,
  config: AugmentConfigInput = {},
  seed = 0,
): BoundBatch {
  validateBatch(batch);
  if (!(MODES as readonly string[]).includes(mode)) {
    throw new BoundaryError('mode', `unknown mode ${JSON.stringify(mode)}`);
  }
  if (!Number.isInteger(seed) || seed < 0) {
    throw new BoundaryError('seed', `must be a non-negative integer, got ${seed}`);
  }
  const flags = configFlags(config);

  const workDir = mkdtempSync(join(tmpdir(), 'freqaug-bind-'));
  try {
    const inputDir = join(workDir, 'in');
    const outputDir = join(workDir, 'out');
    mkdirSync(inputDir);
    const size = imageSize(batch);
    const labels = new Map<string, number>();
    for (let i = 0; i < batch.n; i++) {
      const image = {
        data: batch.data.subarray(i * size, (i + 1) * size),
        height: batch.height,
        width: batch.width,
        channels: batch.channels,
      };
      writeFileSync(join(inputDir, `${imageId(i)}.hat`), encodeHat(image));
      labels.set(imageId(i), batch.labels[i]);
    }
    const labelsPath = join(workDir, 'labels.csv');
    writeFileSync(labelsPath, encodeLabelCsv(labels));

    const args = [
      '-m',
      'freqaug',
      'augment',
      '--mode',
      mode,
      '--input-dir',
      inputDir,
      '--labels',
      labelsPath,
      '--output-dir',
      outputDir,
      '--seed',
      String(seed),
      '--batch-size',
      String(batch.n),
      ...flags,
    ];
    const result = spawnSync(pythonExecutable(), args, { encoding: 'utf8' });
    if (result.error) {
      throw new AugmentProcessError(`failed to start ${pythonExecutable()}: ${result.error.message}`);
    }
    if (result.status !== 0) {
      const stderr = (result.stderr ?? '').trim();
      throw new AugmentProcessError(
        `augment exited with status ${result.status}${stderr ? `: ${stderr}` : ''}`,
      );
    }

    const outLabels = decodeLabelCsv(readFileSync(join(outputDir, 'labels.csv'), 'utf8'));
    const data = new Float32Array(batch.n * size);
    const outLabelArray = new Int32Array(batch.n);
    for (let i = 0; i < batch.n; i++) {
      const bytes = readFileSync(join(outputDir, `aug_${imageId(i)}.hat`));
      const image = decodeHat(new Uint8Array(bytes.buffer, bytes.byteOffset, bytes.byteLength));
      if (
        image.height !== batch.height ||
        image.width !== batch.width ||
        image.channels !== batch.channels
      ) {
        throw new AugmentProcessError(
          `output image ${i} is ${image.height}x${image.width}x${image.channels}, ` +
            `expected ${batch.height}x${batch.width}x${batch.channels}`,
        );
      }
      data.set(image.data, i * size);
      const label = outLabels.get(`aug_${imageId(i)}`);
      if (label === undefined) {
        throw new AugmentProcessError(`output labels.csv is missing aug_${imageId(i)}`);
      }
      outLabelArray[i] = label;
    }
    return {
      data,
      labels: outLabelArray,
      n: batch.n,
      height: batch.height,
      width: batch.width,
      channels: batch.channels,
    };
  } finally {
    rmSync(workDir, { recursive: true, force: true });
  }
}

/** List the .hat files the augmentation run would consume, sorted. */
export function listHatFiles(dir: string): string[] {
  return readdirSync(dir)
    .filter((name) => name.endsWith('.hat'))
    .sort();
}
