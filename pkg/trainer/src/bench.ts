/**
 * Inference timing: mean and population variance of per-record
 * prediction seconds. Absolute numbers are hardware-dependent; only
 * relative comparisons between networks on the same machine carry
 * information.
 */
import * as tf from '@tensorflow/tfjs';
import { loadManifest, readImage, splitRecords } from './dataset.js';
import { predictCodes } from './predict.js';

export function meanVariance(xs: number[]): { mean: number; variance: number } {
  if (xs.length === 0) {
    throw new Error('no samples');
  }
  const mean = xs.reduce((a, b) => a + b, 0) / xs.length;
  const variance = xs.reduce((a, b) => a + (b - mean) ** 2, 0) / xs.length;
  return { mean, variance };
}

export interface BenchResult {
  records: number;
  meanSeconds: number;
  varianceSeconds: number;
  perRecordSeconds: number[];
}

export function benchmarkInference(model: tf.LayersModel, dataRoot: string,
                                   opts: { split?: string; limit?: number;
                                           warmup?: number } = {}):
    BenchResult {
  const manifest = loadManifest(dataRoot);
  let records = opts.split === undefined
    ? manifest.records
    : splitRecords(manifest, opts.split);
  if (opts.limit !== undefined) {
    records = records.slice(0, opts.limit);
  }
  if (records.length === 0) {
    throw new Error('no records to benchmark');
  }
  const warmup = opts.warmup ?? 1;
  const first = readImage(dataRoot, records[0]);
  for (let i = 0; i < warmup; i++) {
    predictCodes(model, first);
  }
  const seconds: number[] = [];
  for (const rec of records) {
    const image = readImage(dataRoot, rec);
    const t0 = process.hrtime.bigint();
    predictCodes(model, image);
    const t1 = process.hrtime.bigint();
    seconds.push(Number(t1 - t0) / 1e9);
  }
  const { mean, variance } = meanVariance(seconds);
  return {
    records: records.length,
    meanSeconds: mean,
    varianceSeconds: variance,
    perRecordSeconds: seconds,
  };
}
