/**
 * Training loop: Adam with a stepped learning-rate schedule, weighted
 * pixel-wise cross-entropy, per-epoch validation accuracy and mean IoU.
 *
 * Records are streamed from disk in seeded-shuffled order each epoch.
 * When the model's input size differs from the stored 256x256 records,
 * images are resized bilinearly and label maps with nearest neighbor;
 * validation always scores at the stored resolution.
 */
import * as tf from '@tensorflow/tfjs';
import {
  IMAGE_SIZE, batches, classWeightsFromCounts, countClassPixels,
  loadManifest, mulberry32, shuffled, splitRecords,
} from './dataset.js';
import type { ManifestRecord } from './dataset.js';
import { learningRateForEpoch, weightedCrossEntropy } from './loss.js';
import { buildModel } from './model.js';
import { accumulateConfusion, confusionStats, newConfusion } from './metrics.js';
import type { TrainConfig } from './config.js';
import type { EpochLog } from './checkpoint.js';

export interface TrainResult {
  model: tf.LayersModel;
  classWeights: number[];
  log: EpochLog[];
}

/** Stored records replicated to the 3-channel size the model expects. */
export function toModelInput(images: Float32Array, n: number,
                             modelSize: number): tf.Tensor4D {
  return tf.tidy(() => {
    let x = tf.tensor4d(images, [n, IMAGE_SIZE, IMAGE_SIZE, 1]);
    if (modelSize !== IMAGE_SIZE) {
      x = tf.image.resizeBilinear(x, [modelSize, modelSize]);
    }
    return tf.concat([x, x, x], -1) as tf.Tensor4D;
  });
}

function toModelLabels(labels: Uint8Array, n: number,
                       modelSize: number): tf.Tensor3D {
  return tf.tidy(() => {
    const y = tf.tensor3d(labels, [n, IMAGE_SIZE, IMAGE_SIZE], 'int32');
    if (modelSize === IMAGE_SIZE) {
      return y;
    }
    const resized = tf.image.resizeNearestNeighbor(
      y.expandDims(-1).toFloat() as tf.Tensor4D, [modelSize, modelSize]);
    return resized.squeeze([3]).toInt() as tf.Tensor3D;
  });
}

function setLearningRate(optimizer: tf.Optimizer, lr: number): void {
  // the Adam optimizer reads this field on every applyGradients call
  (optimizer as unknown as { learningRate: number }).learningRate = lr;
}

/** Confusion-matrix scores of a split at the stored resolution. */
export function validateSplit(model: tf.LayersModel, root: string,
                              records: ManifestRecord[], batchSize: number):
    { accuracy: number; meanIou: number } {
  const modelSize = model.inputs[0].shape[1] as number;
  const conf = newConfusion();
  for (const batch of batches(root, records, batchSize)) {
    const n = batch.records.length;
    const xs = toModelInput(batch.images, n, modelSize);
    const predIdx = tf.tidy(() => {
      let probs = model.predict(xs) as tf.Tensor4D;
      if (modelSize !== IMAGE_SIZE) {
        probs = tf.image.resizeBilinear(probs, [IMAGE_SIZE, IMAGE_SIZE]);
      }
      return probs.argMax(-1);
    });
    accumulateConfusion(conf, batch.labels, predIdx.dataSync());
    tf.dispose([xs, predIdx]);
  }
  const stats = confusionStats(conf);
  return { accuracy: stats.accuracy, meanIou: stats.meanIou };
}

export async function trainModel(cfg: TrainConfig, dataRoot: string,
                                 onEpoch?: (entry: EpochLog) => void):
    Promise<TrainResult> {
  const manifest = loadManifest(dataRoot);
  const trainRecs = splitRecords(manifest, cfg.trainSplit);
  const valRecs = splitRecords(manifest, cfg.valSplit);
  const classWeights = cfg.classWeights === 'auto'
    ? classWeightsFromCounts(countClassPixels(dataRoot, trainRecs))
    : cfg.classWeights.slice();

  const model = buildModel({
    encoder: cfg.encoder,
    attentionGates: cfg.attentionGates,
    imageSize: cfg.imageSize,
    baseFilters: cfg.baseFilters,
    seed: cfg.seed,
  });
  // read() hands back the live variable, which is what minimize needs
  const varList = model.trainableWeights.map((w) => w.read() as tf.Variable);
  const weightsT = tf.tensor1d(classWeights);
  const optimizer = tf.train.adam(cfg.lr);
  const log: EpochLog[] = [];

  try {
    for (let epoch = 0; epoch < cfg.epochs; epoch++) {
      const lr = learningRateForEpoch(epoch, cfg.lr, cfg.lrDecayFactor,
                                      cfg.lrDecayEvery);
      setLearningRate(optimizer, lr);
      const started = Date.now();
      const order = shuffled(trainRecs,
                             mulberry32((cfg.seed + 1) * 1000003 + epoch));
      let lossSum = 0;
      let steps = 0;
      for (const batch of batches(dataRoot, order, cfg.batchSize)) {
        const n = batch.records.length;
        const xs = toModelInput(batch.images, n, cfg.imageSize);
        const ys = toModelLabels(batch.labels, n, cfg.imageSize);
        const lossT = optimizer.minimize(
          () => weightedCrossEntropy(
            model.apply(xs, { training: true }) as tf.Tensor4D, ys, weightsT),
          true, varList) as tf.Scalar;
        lossSum += lossT.dataSync()[0];
        steps += 1;
        tf.dispose([xs, ys, lossT]);
      }
      const val = validateSplit(model, dataRoot, valRecs, cfg.batchSize);
      const entry: EpochLog = {
        epoch: epoch + 1,
        lr,
        trainLoss: steps > 0 ? lossSum / steps : NaN,
        valAccuracy: val.accuracy,
        valMeanIou: val.meanIou,
        seconds: (Date.now() - started) / 1000,
      };
      log.push(entry);
      onEpoch?.(entry);
    }
  } finally {
    weightsT.dispose();
    optimizer.dispose();
  }
  return { model, classWeights, log };
}
