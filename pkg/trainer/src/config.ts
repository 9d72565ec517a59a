/**
 * Training configuration. Loaded from a JSON file with snake_case keys;
 * everything except `encoder` has a default.
 */
import { readFileSync } from 'node:fs';
import { NUM_CLASSES } from './dataset.js';
import type { EncoderName } from './model.js';

export interface TrainConfig {
  encoder: EncoderName;
  attentionGates: boolean;
  lr: number;
  lrDecayFactor: number;
  lrDecayEvery: number;
  epochs: number;
  batchSize: number;
  /** 'auto' derives inverse-frequency weights from the training split. */
  classWeights: 'auto' | number[];
  seed: number;
  imageSize: number;
  baseFilters: number;
  trainSplit: string;
  valSplit: string;
}

const ENCODERS: ReadonlySet<string> = new Set([
  'resnet18', 'resnet50', 'deeplabv3plus',
]);

const KEYS: ReadonlySet<string> = new Set([
  'encoder', 'attention_gates', 'lr', 'lr_decay_factor', 'lr_decay_every',
  'epochs', 'batch_size', 'class_weights', 'seed', 'image_size',
  'base_filters', 'train_split', 'val_split',
]);

function pick<T>(raw: Record<string, unknown>, key: string, fallback: T,
                 check: (v: unknown) => boolean): T {
  if (!(key in raw)) {
    return fallback;
  }
  const value = raw[key];
  if (!check(value)) {
    throw new Error(`config key "${key}" has invalid value ${JSON.stringify(value)}`);
  }
  return value as T;
}

const isPos = (v: unknown) => typeof v === 'number' && Number.isFinite(v) && v > 0;
const isPosInt = (v: unknown) => typeof v === 'number' && Number.isInteger(v) && v > 0;
const isBool = (v: unknown) => typeof v === 'boolean';
const isName = (v: unknown) => typeof v === 'string' && v.length > 0;

export function parseTrainConfig(raw: unknown): TrainConfig {
  if (typeof raw !== 'object' || raw === null || Array.isArray(raw)) {
    throw new Error('config must be a JSON object');
  }
  const obj = raw as Record<string, unknown>;
  for (const key of Object.keys(obj)) {
    if (!KEYS.has(key)) {
      throw new Error(`unknown config key "${key}"`);
    }
  }
  const encoder = obj['encoder'];
  if (typeof encoder !== 'string' || !ENCODERS.has(encoder)) {
    throw new Error(`encoder must be one of ${[...ENCODERS].join(', ')}`);
  }

  let classWeights: 'auto' | number[] = 'auto';
  if ('class_weights' in obj && obj['class_weights'] !== 'auto') {
    const w = obj['class_weights'];
    if (!Array.isArray(w) || w.length !== NUM_CLASSES || !w.every(isPos)) {
      throw new Error(`class_weights must be "auto" or ${NUM_CLASSES} positive numbers`);
    }
    classWeights = w.map(Number);
  }

  const imageSize = pick(obj, 'image_size', 256, isPosInt);
  if (imageSize % 32 !== 0) {
    throw new Error('image_size must be a multiple of 32');
  }
  return {
    encoder: encoder as EncoderName,
    attentionGates: pick(obj, 'attention_gates', true, isBool),
    lr: pick(obj, 'lr', 8e-4, isPos),
    lrDecayFactor: pick(obj, 'lr_decay_factor', 0.1, isPos),
    lrDecayEvery: pick(obj, 'lr_decay_every', 10, isPosInt),
    epochs: pick(obj, 'epochs', 25, isPosInt),
    batchSize: pick(obj, 'batch_size', 32, isPosInt),
    classWeights,
    seed: pick(obj, 'seed', 0,
               (v) => typeof v === 'number' && Number.isInteger(v) && v >= 0),
    imageSize,
    baseFilters: pick(obj, 'base_filters', 64, isPosInt),
    trainSplit: pick(obj, 'train_split', 'train', isName),
    valSplit: pick(obj, 'val_split', 'val', isName),
  };
}

export function loadTrainConfig(file: string): TrainConfig {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(file, 'utf8'));
  } catch (err) {
    throw new Error(`cannot read config ${file}: ${(err as Error).message}`);
  }
  return parseTrainConfig(raw);
}
