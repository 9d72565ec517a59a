import { describe, expect, it } from 'vitest';
import * as tf from '@tensorflow/tfjs';
import { existsSync, mkdtempSync } from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { loadMeta, loadModel, saveMeta, saveModel } from '../src/checkpoint.js';
import type { CheckpointMeta } from '../src/checkpoint.js';
import { parseTrainConfig } from '../src/config.js';
import { buildModel } from '../src/model.js';
import { TINY } from './helpers.js';

describe('checkpoints', () => {
  it('round-trips a model with identical predictions', async () => {
    const dir = mkdtempSync(path.join(os.tmpdir(), 'ckpt-'));
    const model = buildModel(TINY);
    const x = tf.randomNormal([1, TINY.imageSize, TINY.imageSize, 3],
                              0, 1, 'float32', 2);
    const before = model.predict(x) as tf.Tensor4D;

    await saveModel(model, dir);
    expect(existsSync(path.join(dir, 'model.json'))).toBe(true);
    expect(existsSync(path.join(dir, 'weights.bin'))).toBe(true);

    const restored = await loadModel(dir);
    const after = restored.predict(x) as tf.Tensor4D;
    const diff = tf.max(tf.abs(before.sub(after))).dataSync()[0];
    expect(diff).toBeLessThanOrEqual(1e-7);
  });

  it('round-trips training metadata', () => {
    const dir = mkdtempSync(path.join(os.tmpdir(), 'ckpt-'));
    const meta: CheckpointMeta = {
      config: parseTrainConfig({ encoder: 'resnet18', epochs: 2 }),
      classWeights: [0.5, 1.5, 1, 1, 1],
      log: [{
        epoch: 1, lr: 8e-4, trainLoss: 1.2, valAccuracy: 0.5,
        valMeanIou: 0.25, seconds: 3.5,
      }],
    };
    saveMeta(dir, meta);
    expect(loadMeta(dir)).toEqual(meta);
  });
});
