import { describe, expect, it } from 'vitest';
import { mkdtempSync, writeFileSync } from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { loadTrainConfig, parseTrainConfig } from '../src/config.js';

describe('parseTrainConfig', () => {
  it('fills defaults around a minimal config', () => {
    const cfg = parseTrainConfig({ encoder: 'resnet18' });
    expect(cfg.attentionGates).toBe(true);
    expect(cfg.lr).toBe(8e-4);
    expect(cfg.lrDecayFactor).toBe(0.1);
    expect(cfg.lrDecayEvery).toBe(10);
    expect(cfg.epochs).toBe(25);
    expect(cfg.batchSize).toBe(32);
    expect(cfg.classWeights).toBe('auto');
    expect(cfg.imageSize).toBe(256);
    expect(cfg.baseFilters).toBe(64);
    expect(cfg.trainSplit).toBe('train');
    expect(cfg.valSplit).toBe('val');
  });

  it('honors snake_case overrides', () => {
    const cfg = parseTrainConfig({
      encoder: 'deeplabv3plus',
      attention_gates: false,
      lr: 1e-3,
      epochs: 3,
      batch_size: 4,
      image_size: 64,
      base_filters: 8,
      seed: 11,
      class_weights: [1, 2, 3, 4, 5],
    });
    expect(cfg.encoder).toBe('deeplabv3plus');
    expect(cfg.attentionGates).toBe(false);
    expect(cfg.epochs).toBe(3);
    expect(cfg.classWeights).toEqual([1, 2, 3, 4, 5]);
  });

  it('rejects unknown keys and bad encoders', () => {
    expect(() => parseTrainConfig({ encoder: 'resnet18', epoch: 3 }))
      .toThrow(/unknown config key "epoch"/);
    expect(() => parseTrainConfig({ encoder: 'vgg16' }))
      .toThrow(/encoder must be one of/);
    expect(() => parseTrainConfig([])).toThrow(/JSON object/);
  });

  it('enforces positive epochs and class weights', () => {
    expect(() => parseTrainConfig({ encoder: 'resnet18', epochs: 0 }))
      .toThrow(/epochs/);
    expect(() => parseTrainConfig({
      encoder: 'resnet18', class_weights: [1, 1, 1, 1, 0],
    })).toThrow(/positive/);
    expect(() => parseTrainConfig({
      encoder: 'resnet18', class_weights: [1, 1, 1],
    })).toThrow(/5 positive/);
  });

  it('requires image_size to be a multiple of 32', () => {
    expect(() => parseTrainConfig({ encoder: 'resnet18', image_size: 100 }))
      .toThrow(/multiple of 32/);
  });
});

describe('loadTrainConfig', () => {
  it('reads a JSON file and reports unreadable ones', () => {
    const dir = mkdtempSync(path.join(os.tmpdir(), 'trainer-'));
    const file = path.join(dir, 'config.json');
    writeFileSync(file, JSON.stringify({ encoder: 'resnet50', epochs: 2 }));
    const cfg = loadTrainConfig(file);
    expect(cfg.encoder).toBe('resnet50');
    expect(cfg.epochs).toBe(2);
    expect(() => loadTrainConfig(path.join(dir, 'missing.json')))
      .toThrow(/cannot read config/);
  });
});
