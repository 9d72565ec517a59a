import { describe, expect, it } from 'vitest';
import * as tf from '@tensorflow/tfjs';
import { learningRateForEpoch, weightedCrossEntropy } from '../src/loss.js';
import { NUM_CLASSES } from '../src/dataset.js';

function randomCase(seed: number, n = 2, h = 4, w = 4) {
  const logits = tf.randomNormal([n, h, w, NUM_CLASSES], 0, 2,
                                 'float32', seed);
  const probs = tf.softmax(logits) as tf.Tensor4D;
  const labels = tf.randomUniform([n, h, w], 0, NUM_CLASSES, 'int32',
                                  seed + 1) as tf.Tensor3D;
  return { probs, labels };
}

describe('weightedCrossEntropy', () => {
  it('is zero for perfect one-hot predictions', () => {
    const labels = tf.tensor3d([[[0, 1], [4, 2]]], [1, 2, 2], 'int32');
    const probs = tf.oneHot(labels, NUM_CLASSES).toFloat() as tf.Tensor4D;
    const loss = weightedCrossEntropy(probs, labels, tf.ones([NUM_CLASSES]));
    expect(loss.dataSync()[0]).toBeLessThanOrEqual(1e-12);
  });

  it('equals ln 5 for uniform predictions with unit weights', () => {
    const probs = tf.fill([1, 4, 4, NUM_CLASSES], 0.2) as tf.Tensor4D;
    const labels = tf.randomUniform([1, 4, 4], 0, NUM_CLASSES, 'int32',
                                    3) as tf.Tensor3D;
    const loss = weightedCrossEntropy(probs, labels, tf.ones([NUM_CLASSES]));
    expect(loss.dataSync()[0]).toBeCloseTo(Math.log(5), 6);
  });

  it('is linear in the weights', () => {
    const { probs, labels } = randomCase(17);
    const w = tf.tensor1d([0.5, 1.5, 2, 0.25, 0.75]);
    const one = weightedCrossEntropy(probs, labels, w).dataSync()[0];
    const two = weightedCrossEntropy(probs, labels,
                                     w.mul(2) as tf.Tensor1D).dataSync()[0];
    expect(Math.abs(two - 2 * one) / Math.abs(two))
      .toBeLessThanOrEqual(1e-9);
  });

  it('matches unweighted cross-entropy when all weights are one', () => {
    const { probs, labels } = randomCase(29);
    const weighted = weightedCrossEntropy(probs, labels,
                                          tf.ones([NUM_CLASSES]));
    const plain = tf.tidy(() => {
      const oneHot = tf.oneHot(labels, NUM_CLASSES).toFloat();
      const logP = tf.log(tf.clipByValue(probs, 1e-12, 1.0));
      return tf.neg(tf.mean(tf.sum(tf.mul(oneHot, logP), -1)));
    });
    const diff = Math.abs(weighted.dataSync()[0] - plain.dataSync()[0]);
    expect(diff).toBeLessThanOrEqual(1e-9);
  });

  it('clamps a zero-probability true class to a finite loss', () => {
    const labels = tf.tensor3d([[[0]]], [1, 1, 1], 'int32');
    const wrong = tf.tensor4d([[[[0, 1, 0, 0, 0]]]], [1, 1, 1, NUM_CLASSES]);
    const loss = weightedCrossEntropy(wrong, labels, tf.ones([NUM_CLASSES]));
    const value = loss.dataSync()[0];
    expect(Number.isFinite(value)).toBe(true);
    expect(value).toBeCloseTo(-Math.log(1e-12), 2);
  });
});

describe('learningRateForEpoch', () => {
  it('steps down by the factor every ten epochs', () => {
    const lrs = Array.from({ length: 25 },
                           (_, e) => learningRateForEpoch(e));
    for (let e = 0; e < 10; e++) {
      expect(lrs[e]).toBeCloseTo(8e-4, 12);
    }
    for (let e = 10; e < 20; e++) {
      expect(lrs[e]).toBeCloseTo(8e-5, 12);
    }
    for (let e = 20; e < 25; e++) {
      expect(lrs[e]).toBeCloseTo(8e-6, 12);
    }
  });

  it('rejects bad epoch numbers', () => {
    expect(() => learningRateForEpoch(-1)).toThrow();
    expect(() => learningRateForEpoch(1.5)).toThrow();
  });
});
