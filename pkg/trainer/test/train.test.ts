import { describe, expect, it } from 'vitest';
import { parseTrainConfig } from '../src/config.js';
import { trainModel } from '../src/train.js';
import { DATASET } from './helpers.js';

const SMOKE = parseTrainConfig({
  encoder: 'resnet18',
  attention_gates: true,
  epochs: 3,
  batch_size: 4,
  image_size: 32,
  base_filters: 4,
  seed: 5,
});

describe('trainModel', () => {
  it('drives the loss down and logs the schedule', async () => {
    const logs: number[] = [];
    const result = await trainModel(SMOKE, DATASET,
                                    (e) => logs.push(e.epoch));
    expect(logs).toEqual([1, 2, 3]);
    expect(result.log).toHaveLength(3);
    for (const entry of result.log) {
      expect(Number.isFinite(entry.trainLoss)).toBe(true);
      expect(entry.trainLoss).toBeGreaterThan(0);
      expect(entry.lr).toBeCloseTo(8e-4, 12);
      expect(entry.valAccuracy).toBeGreaterThanOrEqual(0);
      expect(entry.valAccuracy).toBeLessThanOrEqual(1);
      expect(entry.seconds).toBeGreaterThan(0);
    }
    expect(result.log[2].trainLoss).toBeLessThan(result.log[0].trainLoss);

    const weights = result.classWeights;
    expect(weights).toHaveLength(5);
    const present = weights.filter((w) => w > 0);
    const mean = present.reduce((a, b) => a + b, 0) / present.length;
    expect(mean).toBeCloseTo(1, 9);
    result.model.dispose();
  }, 600_000);

  it('applies the decay schedule inside the loop', async () => {
    const cfg = parseTrainConfig({
      encoder: 'resnet18',
      epochs: 3,
      batch_size: 4,
      image_size: 32,
      base_filters: 2,
      lr_decay_every: 1,
      seed: 9,
    });
    const result = await trainModel(cfg, DATASET);
    expect(result.log.map((e) => e.lr))
      .toEqual([8e-4, 8e-4 * 0.1, 8e-4 * 0.01]);
    result.model.dispose();
  }, 600_000);

  it('fails cleanly when a split is missing', async () => {
    const cfg = parseTrainConfig({
      encoder: 'resnet18', val_split: 'holdout',
      image_size: 32, base_filters: 2, epochs: 1,
    });
    await expect(trainModel(cfg, DATASET)).rejects.toThrow(/holdout/);
  });
});
