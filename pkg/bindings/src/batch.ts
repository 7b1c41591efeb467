/**
 * The typed batch that crosses the binding boundary, and its validator.
 * Validation never coerces: a wrong buffer type or a mismatched length
 * raises an error naming the offending field.
 */

/** A labeled image batch: contiguous NxHxWxC float32 plus N int32 labels. */
export interface BoundBatch {
  /** Row-major pixel buffer of length n*height*width*channels. */
  data: Float32Array;
  /** One integer label per image. */
  labels: Int32Array;
  n: number;
  height: number;
  width: number;
  channels: number;
}

/** Raised when a batch violates the boundary contract. */
export class BoundaryError extends Error {
  /** The batch field that failed validation. */
  readonly field: string;

  constructor(field: string, message: string) {
    super(`${field}: ${message}`);
    this.name = 'BoundaryError';
    this.field = field;
  }
}

function checkCount(value: number, field: string): void {
  if (!Number.isInteger(value) || value < 1) {
    throw new BoundaryError(field, `must be a positive integer, got ${value}`);
  }
}

/**
 * Check a batch against the boundary contract.
 * @throws BoundaryError naming the first offending field
 */
export function validateBatch(batch: BoundBatch): void {
  checkCount(batch.n, 'n');
  checkCount(batch.height, 'height');
  checkCount(batch.width, 'width');
  checkCount(batch.channels, 'channels');
  if (!(batch.data instanceof Float32Array)) {
    throw new BoundaryError('data', 'must be a Float32Array');
  }
  const count = batch.n * batch.height * batch.width * batch.channels;
  if (batch.data.length !== count) {
    throw new BoundaryError(
      'data',
      `holds ${batch.data.length} values, expected ${count} for ` +
        `${batch.n}x${batch.height}x${batch.width}x${batch.channels}`,
    );
  }
  if (!(batch.labels instanceof Int32Array)) {
    throw new BoundaryError('labels', 'must be an Int32Array');
  }
  if (batch.labels.length !== batch.n) {
    throw new BoundaryError(
      'labels',
      `holds ${batch.labels.length} values, expected ${batch.n}`,
    );
  }
  for (let i = 0; i < batch.data.length; i++) {
    if (!Number.isFinite(batch.data[i])) {
      throw new BoundaryError('data', `non-finite value at index ${i}`);
    }
  }
}

/** Number of float32 values in one image of the batch. */
export function imageSize(batch: BoundBatch): number {
  return batch.height * batch.width * batch.channels;
}

/** Copy image i of a batch into a fresh Float32Array. */
export function imageAt(batch: BoundBatch, index: number): Float32Array {
  const size = imageSize(batch);
  return batch.data.slice(index * size, (index + 1) * size);
}
