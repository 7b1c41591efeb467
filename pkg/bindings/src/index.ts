export { HAT_MAGIC, HAT_HEADER_BYTES, HatFormatError, encodeHat, decodeHat } from './hat.js';
export type { HatImage } from './hat.js';
export { BoundaryError, validateBatch, imageAt, imageSize } from './batch.js';
export type { BoundBatch } from './batch.js';
export { MODES, AugmentProcessError, boundAugmentBatch, listHatFiles } from './binding.js';
export type { AugmentConfigInput, Mode } from './binding.js';
export { encodeLabelCsv, decodeLabelCsv } from './labels.js';
export { HatFolderDataset, iterBatches } from './dataloader.js';
export type { DataloaderOptions } from './dataloader.js';
export { runExample, writeDemoFolder } from './example.js';
export type { BatchStats } from './example.js';
