import * as tf from '@tensorflow/tfjs';
import { NUM_CLASSES } from './dataset.js';

/** Probabilities below this are clamped before the log. */
export const LOG_CLAMP = 1e-12;

/**
 * Weighted pixel-wise cross-entropy, mean-reduced over all pixels.
 *
 * probs  [batch, h, w, classes] softmax outputs
 * labels [batch, h, w] int class indices
 * weights [classes]
 *
 * Each pixel contributes -w[c] * log(p[c]) for its true class c, so a
 * zero weight removes that class from the loss entirely.
 */
export function weightedCrossEntropy(probs: tf.Tensor4D, labels: tf.Tensor3D,
                                     weights: tf.Tensor1D): tf.Scalar {
  return tf.tidy(() => {
    const oneHot = tf.oneHot(tf.cast(labels, 'int32'), NUM_CLASSES);
    const logP = tf.log(tf.clipByValue(probs, LOG_CLAMP, 1.0));
    const trueLogP = tf.sum(tf.mul(oneHot, logP), -1);
    const pixelWeight = tf.sum(
      tf.mul(oneHot, tf.reshape(weights, [1, 1, 1, NUM_CLASSES])), -1);
    return tf.neg(tf.mean(tf.mul(pixelWeight, trueLogP))) as tf.Scalar;
  });
}

/**
 * Step learning rate: base, cut by `factor` every `every` epochs.
 * Epochs count from 0, so epochs 0..9 run at base, 10..19 at base*factor.
 */
export function learningRateForEpoch(epoch: number, base = 8e-4,
                                     factor = 0.1, every = 10): number {
  if (epoch < 0 || !Number.isInteger(epoch)) {
    throw new Error(`epoch must be a non-negative integer, got ${epoch}`);
  }
  return base * Math.pow(factor, Math.floor(epoch / every));
}
