/**
 * Checkpoint directory layout:
 *
 *     model.json    topology + weight specs
 *     weights.bin   concatenated weight values
 *     train.json    config echo, class weights, per-epoch log
 */
import * as tf from '@tensorflow/tfjs';
import { mkdirSync, readFileSync, writeFileSync } from 'node:fs';
import * as path from 'node:path';
import type { TrainConfig } from './config.js';

export interface EpochLog {
  epoch: number;
  lr: number;
  trainLoss: number;
  valAccuracy: number;
  valMeanIou: number;
  seconds: number;
}

export interface CheckpointMeta {
  config: TrainConfig;
  classWeights: number[];
  log: EpochLog[];
}

export async function saveModel(model: tf.LayersModel,
                                dir: string): Promise<void> {
  mkdirSync(dir, { recursive: true });
  await model.save(tf.io.withSaveHandler(async (artifacts) => {
    const data = artifacts.weightData;
    if (data === undefined) {
      throw new Error('model produced no weight data');
    }
    const parts = Array.isArray(data) ? data : [data];
    const weights = Buffer.concat(parts.map((p) => Buffer.from(p)));
    writeFileSync(path.join(dir, 'weights.bin'), weights);
    writeFileSync(path.join(dir, 'model.json'), JSON.stringify({
      modelTopology: artifacts.modelTopology,
      weightSpecs: artifacts.weightSpecs,
      format: artifacts.format,
      generatedBy: artifacts.generatedBy,
    }));
    return {
      modelArtifactsInfo: {
        dateSaved: new Date(),
        modelTopologyType: 'JSON' as const,
      },
    };
  }));
}

export async function loadModel(dir: string): Promise<tf.LayersModel> {
  const manifest = JSON.parse(
    readFileSync(path.join(dir, 'model.json'), 'utf8'));
  const raw = readFileSync(path.join(dir, 'weights.bin'));
  const weightData = raw.buffer.slice(raw.byteOffset,
                                      raw.byteOffset + raw.byteLength);
  return tf.loadLayersModel(tf.io.fromMemory({
    modelTopology: manifest.modelTopology,
    weightSpecs: manifest.weightSpecs,
    weightData,
  }));
}

export function saveMeta(dir: string, meta: CheckpointMeta): void {
  mkdirSync(dir, { recursive: true });
  writeFileSync(path.join(dir, 'train.json'),
                JSON.stringify(meta, null, 2));
}

export function loadMeta(dir: string): CheckpointMeta {
  return JSON.parse(readFileSync(path.join(dir, 'train.json'), 'utf8'));
}
