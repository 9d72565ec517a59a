/**
 * Lightweight confusion-matrix bookkeeping for per-epoch validation
 * logs. Authoritative scoring of predicted masks is done by the
 * simulator's `eval` command; these numbers exist so training progress
 * is visible without a round trip through the file format.
 */
import { NUM_CLASSES } from './dataset.js';

/** Row-major [truth, predicted] counts, NUM_CLASSES squared. */
export function newConfusion(): Float64Array {
  return new Float64Array(NUM_CLASSES * NUM_CLASSES);
}

export function accumulateConfusion(conf: Float64Array,
                                    truth: ArrayLike<number>,
                                    pred: ArrayLike<number>): void {
  if (truth.length !== pred.length) {
    throw new Error('truth and prediction lengths differ');
  }
  for (let i = 0; i < truth.length; i++) {
    conf[truth[i] * NUM_CLASSES + pred[i]] += 1;
  }
}

export interface ConfusionStats {
  accuracy: number;
  /** Per-class intersection over union; NaN where the union is empty. */
  iou: number[];
  /** Mean IoU over classes with a nonempty union. */
  meanIou: number;
}

export function confusionStats(conf: Float64Array): ConfusionStats {
  let total = 0;
  let diag = 0;
  const iou: number[] = [];
  for (let c = 0; c < NUM_CLASSES; c++) {
    let tp = 0;
    let rowSum = 0;
    let colSum = 0;
    for (let k = 0; k < NUM_CLASSES; k++) {
      rowSum += conf[c * NUM_CLASSES + k];
      colSum += conf[k * NUM_CLASSES + c];
    }
    tp = conf[c * NUM_CLASSES + c];
    diag += tp;
    const union = rowSum + colSum - tp;
    iou.push(union > 0 ? tp / union : NaN);
  }
  for (let i = 0; i < conf.length; i++) {
    total += conf[i];
  }
  const defined = iou.filter((v) => !Number.isNaN(v));
  return {
    accuracy: total > 0 ? diag / total : NaN,
    iou,
    meanIou: defined.length > 0
      ? defined.reduce((a, b) => a + b, 0) / defined.length
      : NaN,
  };
}
