import * as path from 'node:path';
import { fileURLToPath } from 'node:url';

export const FIXTURE_ROOT = path.join(
  path.dirname(fileURLToPath(import.meta.url)), 'fixtures');

/** Six-record dataset generated by the simulator CLI in global setup. */
export const DATASET = path.join(FIXTURE_ROOT, 'ds');

/** Smallest model config that exercises every code path quickly. */
export const TINY = {
  encoder: 'resnet18' as const,
  attentionGates: true,
  imageSize: 32,
  baseFilters: 4,
  seed: 7,
};
