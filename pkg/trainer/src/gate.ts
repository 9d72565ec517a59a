/**
 * The attention gate used on every skip connection.
 *
 * Encoder features F_e and decoder features F_d (already at the same
 * spatial size) are concatenated along channels, projected to a single
 * score map by a 1x1 convolution with weights W and bias b, squashed by
 * a sigmoid into a gate map A(t,f) in (0,1), and the gate multiplies the
 * encoder features elementwise.
 *
 * Two implementations live here: the tensor-op form used by tests and
 * the gradient check, and a plain-number float64 reference of the same
 * math for finite-difference comparison.
 */
import * as tf from '@tensorflow/tfjs';

/** Gate map A = sigmoid(conv1x1([F_e, F_d]; W) + b), shape [n, h, w, 1]. */
export function gateMap(fe: tf.Tensor4D, fd: tf.Tensor4D,
                        w: tf.Tensor4D, b: tf.Scalar): tf.Tensor4D {
  return tf.tidy(() => {
    const stacked = tf.concat([fe, fd], -1);
    const score = tf.add(tf.conv2d(stacked, w, 1, 'same'), b);
    return tf.sigmoid(score) as tf.Tensor4D;
  });
}

/** Gated encoder features A .* F_e, same shape as F_e. */
export function gateApply(fe: tf.Tensor4D, fd: tf.Tensor4D,
                          w: tf.Tensor4D, b: tf.Scalar): tf.Tensor4D {
  return tf.tidy(() => tf.mul(fe, gateMap(fe, fd, w, b)) as tf.Tensor4D);
}

export interface GateRefInput {
  fe: number[];  // flattened [n*h*w*ce]
  fd: number[];  // flattened [n*h*w*cd]
  w: number[];   // [ce+cd]
  b: number;
  pixels: number;  // n*h*w
  ce: number;
  cd: number;
}

function sigmoid(z: number): number {
  return 1 / (1 + Math.exp(-z));
}

/** Float64 forward pass of sum(gateApply(...)), the scalar test objective. */
export function gateObjectiveRef(inp: GateRefInput): number {
  const { fe, fd, w, b, pixels, ce, cd } = inp;
  let total = 0;
  for (let p = 0; p < pixels; p++) {
    let z = b;
    for (let c = 0; c < ce; c++) z += w[c] * fe[p * ce + c];
    for (let c = 0; c < cd; c++) z += w[ce + c] * fd[p * cd + c];
    const a = sigmoid(z);
    for (let c = 0; c < ce; c++) total += fe[p * ce + c] * a;
  }
  return total;
}

/** Float64 analytic gradient of the objective w.r.t. [w..., b]. */
export function gateGradientRef(inp: GateRefInput): number[] {
  const { fe, fd, w, b, pixels, ce, cd } = inp;
  const grad = new Array<number>(w.length + 1).fill(0);
  for (let p = 0; p < pixels; p++) {
    let z = b;
    let feSum = 0;
    for (let c = 0; c < ce; c++) {
      z += w[c] * fe[p * ce + c];
      feSum += fe[p * ce + c];
    }
    for (let c = 0; c < cd; c++) z += w[ce + c] * fd[p * cd + c];
    const a = sigmoid(z);
    const dA = feSum * a * (1 - a);
    for (let c = 0; c < ce; c++) grad[c] += dA * fe[p * ce + c];
    for (let c = 0; c < cd; c++) grad[ce + c] += dA * fd[p * cd + c];
    grad[w.length] += dA;
  }
  return grad;
}

/** Central finite differences of the objective w.r.t. [w..., b]. */
export function gateGradientFiniteDiff(inp: GateRefInput, h = 1e-6): number[] {
  const grad: number[] = [];
  for (let k = 0; k < inp.w.length; k++) {
    const wPlus = inp.w.slice();
    const wMinus = inp.w.slice();
    wPlus[k] += h;
    wMinus[k] -= h;
    grad.push((gateObjectiveRef({ ...inp, w: wPlus }) -
               gateObjectiveRef({ ...inp, w: wMinus })) / (2 * h));
  }
  grad.push((gateObjectiveRef({ ...inp, b: inp.b + h }) -
             gateObjectiveRef({ ...inp, b: inp.b - h })) / (2 * h));
  return grad;
}
