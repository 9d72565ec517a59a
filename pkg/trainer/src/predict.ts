/**
 * Batch prediction: run a checkpointed model over dataset records and
 * write one mask file per record, mirroring the dataset layout so the
 * simulator's `eval --pred` scores the output directly.
 */
import * as tf from '@tensorflow/tfjs';
import { mkdirSync, writeFileSync } from 'node:fs';
import * as path from 'node:path';
import {
  IMAGE_SIZE, indicesToCodes, loadManifest, readImage, splitRecords,
} from './dataset.js';
import type { ManifestRecord } from './dataset.js';

export function modelImageSize(model: tf.LayersModel): number {
  const size = model.inputs[0].shape[1];
  if (typeof size !== 'number') {
    throw new Error('model input has no static spatial size');
  }
  return size;
}

/** Predicted class codes for one stored record, length 65,536. */
export function predictCodes(model: tf.LayersModel,
                             image: Float32Array): Uint8Array {
  const modelSize = modelImageSize(model);
  const indices = tf.tidy(() => {
    let x = tf.tensor4d(image, [1, IMAGE_SIZE, IMAGE_SIZE, 1]);
    if (modelSize !== IMAGE_SIZE) {
      x = tf.image.resizeBilinear(x, [modelSize, modelSize]);
    }
    const x3 = tf.concat([x, x, x], -1);
    let probs = model.predict(x3) as tf.Tensor4D;
    if (modelSize !== IMAGE_SIZE) {
      probs = tf.image.resizeBilinear(probs, [IMAGE_SIZE, IMAGE_SIZE]);
    }
    return probs.argMax(-1);
  });
  const data = indices.dataSync();
  indices.dispose();
  return indicesToCodes(Uint8Array.from(data));
}

/**
 * Predict every record (optionally restricted to one split) and write
 * `{out}/{split}/{id}.mask` files. Returns the written paths.
 */
export function predictMasks(model: tf.LayersModel, dataRoot: string,
                             outDir: string, split?: string): string[] {
  const manifest = loadManifest(dataRoot);
  const records: ManifestRecord[] = split === undefined
    ? manifest.records
    : splitRecords(manifest, split);
  if (records.length === 0) {
    throw new Error('no records to predict');
  }
  const written: string[] = [];
  for (const rec of records) {
    const codes = predictCodes(model, readImage(dataRoot, rec));
    const file = path.join(outDir, `${rec.stem}.mask`);
    mkdirSync(path.dirname(file), { recursive: true });
    writeFileSync(file, codes);
    written.push(file);
  }
  return written;
}
