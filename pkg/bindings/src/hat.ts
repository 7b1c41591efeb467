/**
 * Raw tensor file format: a 16-byte header (magic `HAT1`, then height,
 * width and channel count as little-endian uint32) followed by
 * H*W*C little-endian float32 values in row-major order.
 *
 * The format round-trips bit for bit, which is what makes cross-process
 * parity checks possible at all.
 */

export const HAT_MAGIC = 'HAT1';
export const HAT_HEADER_BYTES = 16;

/** One decoded image: row-major (height, width, channels) float32. */
export interface HatImage {
  data: Float32Array;
  height: number;
  width: number;
  channels: number;
}

/** Raised when a buffer violates the tensor file contract. */
export class HatFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'HatFormatError';
  }
}

function checkDimension(value: number, name: string): void {
  if (!Number.isInteger(value) || value < 1 || value > 0xffffffff) {
    throw new HatFormatError(`${name} must be a positive uint32, got ${value}`);
  }
}

/**
 * Serialize one image to the raw tensor layout.
 * @param image - Image whose data length must equal height*width*channels
 * @returns A freshly allocated buffer holding header plus payload
 */
export function encodeHat(image: HatImage): Uint8Array {
  checkDimension(image.height, 'height');
  checkDimension(image.width, 'width');
  checkDimension(image.channels, 'channels');
  const count = image.height * image.width * image.channels;
  if (!(image.data instanceof Float32Array)) {
    throw new HatFormatError('data must be a Float32Array');
  }
  if (image.data.length !== count) {
    throw new HatFormatError(
      `data holds ${image.data.length} values, expected ${count} for ` +
        `${image.height}x${image.width}x${image.channels}`,
    );
  }
  const out = new Uint8Array(HAT_HEADER_BYTES + 4 * count);
  const view = new DataView(out.buffer);
  for (let i = 0; i < 4; i++) {
    view.setUint8(i, HAT_MAGIC.charCodeAt(i));
  }
  view.setUint32(4, image.height, true);
  view.setUint32(8, image.width, true);
  view.setUint32(12, image.channels, true);
  for (let i = 0; i < count; i++) {
    view.setFloat32(HAT_HEADER_BYTES + 4 * i, image.data[i], true);
  }
  return out;
}

/**
 * Parse a raw tensor buffer back into an image.
 * @param bytes - The exact file contents
 */
export function decodeHat(bytes: Uint8Array): HatImage {
  if (bytes.length < HAT_HEADER_BYTES) {
    throw new HatFormatError(`truncated header (${bytes.length} bytes)`);
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  let magic = '';
  for (let i = 0; i < 4; i++) {
    magic += String.fromCharCode(view.getUint8(i));
  }
  if (magic !== HAT_MAGIC) {
    throw new HatFormatError(`bad magic ${JSON.stringify(magic)}`);
  }
  const height = view.getUint32(4, true);
  const width = view.getUint32(8, true);
  const channels = view.getUint32(12, true);
  const count = height * width * channels;
  const expected = HAT_HEADER_BYTES + 4 * count;
  if (bytes.length !== expected) {
    throw new HatFormatError(
      `expected ${expected} bytes for ${height}x${width}x${channels}, got ${bytes.length}`,
    );
  }
  const data = new Float32Array(count);
  for (let i = 0; i < count; i++) {
    data[i] = view.getFloat32(HAT_HEADER_BYTES + 4 * i, true);
  }
  return { data, height, width, channels };
}
