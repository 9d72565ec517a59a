/**
 * Reader for the simulator's on-disk dataset contract.
 *
 * A dataset root holds manifest.json plus {split}/{id:06d}.img/.mask/.meta
 * files. Images are little-endian float32 256x256 rasters (row 0 = lowest
 * frequency), masks are uint8 class codes. Nothing here depends on the
 * simulator's code, only on its files.
 */
import { readFileSync } from 'fs';
import * as path from 'path';

export const IMAGE_SIZE = 256;
export const NUM_CLASSES = 5;
export const CLASS_CODES = [0, 16, 32, 64, 128] as const;
export const CLASS_NAMES = ['UNKNOWN', 'WLAN', 'BLUETOOTH', 'ZIGBEE', 'SMARTBAN'] as const;

const CODE_TO_INDEX = new Int8Array(256).fill(-1);
CLASS_CODES.forEach((code, i) => { CODE_TO_INDEX[code] = i; });

export interface ManifestRecord {
  index: number;
  split: string;
  stem: string;
  sweep_distance_m?: number;
}

export interface Manifest {
  format_version: number;
  num_records: number;
  image_size: number;
  records: ManifestRecord[];
  sweep?: { distances: number[]; per_distance: number };
}

export function loadManifest(root: string): Manifest {
  const manifest = JSON.parse(
    readFileSync(path.join(root, 'manifest.json'), 'utf8')) as Manifest;
  if (manifest.format_version !== 1) {
    throw new Error(
      `unsupported dataset format_version ${manifest.format_version}`);
  }
  return manifest;
}

export function splitRecords(manifest: Manifest, split: string): ManifestRecord[] {
  const records = manifest.records.filter((r) => r.split === split);
  if (records.length === 0) {
    throw new Error(`no records in split '${split}'`);
  }
  return records;
}

function ownBuffer(buf: Buffer): ArrayBuffer {
  const copy = new Uint8Array(buf.byteLength);
  copy.set(buf);
  return copy.buffer;
}

/** Normalized spectrogram pixels as float32, length size*size. */
export function readImage(root: string, rec: ManifestRecord, size = IMAGE_SIZE): Float32Array {
  const file = path.join(root, `${rec.stem}.img`);
  const raw = readFileSync(file);
  if (raw.byteLength !== size * size * 4) {
    throw new Error(`${file}: expected ${size * size * 4} bytes, got ${raw.byteLength}`);
  }
  // the format is little endian; typed-array views match on LE platforms
  return new Float32Array(ownBuffer(raw));
}

/** Raw class codes {0,16,32,64,128}, length size*size. */
export function readMask(root: string, rec: ManifestRecord, size = IMAGE_SIZE): Uint8Array {
  const file = path.join(root, `${rec.stem}.mask`);
  const raw = readFileSync(file);
  if (raw.byteLength !== size * size) {
    throw new Error(`${file}: expected ${size * size} bytes, got ${raw.byteLength}`);
  }
  return new Uint8Array(ownBuffer(raw));
}

/** Class codes mapped to dense indices 0..4. Rejects unknown codes. */
export function codesToIndices(mask: Uint8Array): Uint8Array {
  const out = new Uint8Array(mask.length);
  for (let i = 0; i < mask.length; i++) {
    const idx = CODE_TO_INDEX[mask[i]];
    if (idx < 0) {
      throw new Error(`illegal mask code ${mask[i]} at pixel ${i}`);
    }
    out[i] = idx;
  }
  return out;
}

/** Dense indices 0..4 mapped back to file codes. */
export function indicesToCodes(indices: Uint8Array): Uint8Array {
  const out = new Uint8Array(indices.length);
  for (let i = 0; i < indices.length; i++) {
    const idx = indices[i];
    if (idx >= NUM_CLASSES) {
      throw new Error(`class index ${idx} out of range at pixel ${i}`);
    }
    out[i] = CLASS_CODES[idx];
  }
  return out;
}

/** Per-class pixel counts over a list of records. */
export function countClassPixels(root: string, records: ManifestRecord[]): number[] {
  const counts = new Array<number>(NUM_CLASSES).fill(0);
  for (const rec of records) {
    const indices = codesToIndices(readMask(root, rec));
    for (let i = 0; i < indices.length; i++) {
      counts[indices[i]] += 1;
    }
  }
  return counts;
}

/**
 * Inverse-frequency class weights, normalized to mean 1 over the classes
 * actually present. Absent classes get weight 0 so the loss skips them.
 */
export function classWeightsFromCounts(counts: number[]): number[] {
  const total = counts.reduce((a, b) => a + b, 0);
  if (total === 0) {
    throw new Error('cannot derive class weights from an empty dataset');
  }
  const raw = counts.map((c) => (c > 0 ? total / c : 0));
  const present = raw.filter((w) => w > 0);
  const mean = present.reduce((a, b) => a + b, 0) / present.length;
  return raw.map((w) => w / mean);
}

// Deterministic shuffle so epochs are reproducible from the config seed.
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function shuffled<T>(items: T[], rand: () => number): T[] {
  const out = items.slice();
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export interface Batch {
  /** images, [n, size*size] row-major */
  images: Float32Array;
  /** class indices, [n, size*size] */
  labels: Uint8Array;
  records: ManifestRecord[];
}

/** Assemble fixed-size batches (the last one may be short). */
export function* batches(root: string, records: ManifestRecord[],
                         batchSize: number): Generator<Batch> {
  const pixels = IMAGE_SIZE * IMAGE_SIZE;
  for (let start = 0; start < records.length; start += batchSize) {
    const chunk = records.slice(start, start + batchSize);
    const images = new Float32Array(chunk.length * pixels);
    const labels = new Uint8Array(chunk.length * pixels);
    chunk.forEach((rec, i) => {
      images.set(readImage(root, rec), i * pixels);
      labels.set(codesToIndices(readMask(root, rec)), i * pixels);
    });
    yield { images, labels, records: chunk };
  }
}
