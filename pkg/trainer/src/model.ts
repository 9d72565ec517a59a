/**
 * Network definitions: ResNet-18/50 encoders with an attention-gated
 * U-Net decoder, and a DeepLab v3+ style head (ASPP at rates 6/12/18)
 * over the ResNet-18 backbone.
 *
 * All models take [size, size, 3] inputs (the grayscale spectrogram is
 * replicated to three channels by the data path) and emit per-pixel
 * softmax over the five classes at full resolution. Weight init is
 * seeded per layer so builds are reproducible from the config seed.
 */
import * as tf from '@tensorflow/tfjs';
import { NUM_CLASSES } from './dataset.js';

export type EncoderName = 'resnet18' | 'resnet50' | 'deeplabv3plus';

export interface ModelConfig {
  encoder: EncoderName;
  attentionGates: boolean;
  imageSize: number;
  baseFilters: number;
  seed: number;
}

type Sym = tf.SymbolicTensor;

class SeedStream {
  constructor(private next: number) {}
  take(): number {
    return this.next++;
  }
}

function conv(x: Sym, filters: number, kernel: number, seeds: SeedStream,
              name: string, stride = 1, dilation = 1, bias = false): Sym {
  return tf.layers.conv2d({
    filters,
    kernelSize: kernel,
    strides: stride,
    dilationRate: dilation,
    padding: 'same',
    useBias: bias,
    kernelInitializer: tf.initializers.glorotUniform({ seed: seeds.take() }),
    name,
  }).apply(x) as Sym;
}

function bn(x: Sym, name: string): Sym {
  return tf.layers.batchNormalization({ name }).apply(x) as Sym;
}

function relu(x: Sym, name: string): Sym {
  return tf.layers.activation({ activation: 'relu', name }).apply(x) as Sym;
}

function convBnRelu(x: Sym, filters: number, kernel: number,
                    seeds: SeedStream, name: string, stride = 1,
                    dilation = 1): Sym {
  return relu(bn(conv(x, filters, kernel, seeds, `${name}_conv`, stride,
                      dilation), `${name}_bn`), `${name}_relu`);
}

function basicBlock(x: Sym, filters: number, stride: number,
                    seeds: SeedStream, name: string): Sym {
  let out = convBnRelu(x, filters, 3, seeds, `${name}_a`, stride);
  out = bn(conv(out, filters, 3, seeds, `${name}_b_conv`), `${name}_b_bn`);
  let shortcut = x;
  if (stride !== 1 || x.shape[3] !== filters) {
    shortcut = bn(conv(x, filters, 1, seeds, `${name}_sc_conv`, stride),
                  `${name}_sc_bn`);
  }
  const added = tf.layers.add({ name: `${name}_add` })
    .apply([out, shortcut]) as Sym;
  return relu(added, `${name}_out`);
}

function bottleneckBlock(x: Sym, filters: number, stride: number,
                         seeds: SeedStream, name: string): Sym {
  const expanded = filters * 4;
  let out = convBnRelu(x, filters, 1, seeds, `${name}_a`);
  out = convBnRelu(out, filters, 3, seeds, `${name}_b`, stride);
  out = bn(conv(out, expanded, 1, seeds, `${name}_c_conv`), `${name}_c_bn`);
  let shortcut = x;
  if (stride !== 1 || x.shape[3] !== expanded) {
    shortcut = bn(conv(x, expanded, 1, seeds, `${name}_sc_conv`, stride),
                  `${name}_sc_bn`);
  }
  const added = tf.layers.add({ name: `${name}_add` })
    .apply([out, shortcut]) as Sym;
  return relu(added, `${name}_out`);
}

interface EncoderTaps {
  c1: Sym;  // 1/2 resolution, after the stem conv
  c2: Sym;  // 1/4
  c3: Sym;  // 1/8
  c4: Sym;  // 1/16
  c5: Sym;  // 1/32
}

function resnetEncoder(input: Sym, variant: 'resnet18' | 'resnet50',
                       base: number, seeds: SeedStream): EncoderTaps {
  const c1 = convBnRelu(input, base, 7, seeds, 'stem', 2);
  let x = tf.layers.maxPooling2d({
    poolSize: 3, strides: 2, padding: 'same', name: 'stem_pool',
  }).apply(c1) as Sym;

  const blocks = variant === 'resnet18' ? [2, 2, 2, 2] : [3, 4, 6, 3];
  const taps: Sym[] = [];
  for (let stage = 0; stage < 4; stage++) {
    const filters = base * (1 << stage);
    for (let i = 0; i < blocks[stage]; i++) {
      const stride = stage > 0 && i === 0 ? 2 : 1;
      const name = `s${stage + 1}_b${i + 1}`;
      x = variant === 'resnet18'
        ? basicBlock(x, filters, stride, seeds, name)
        : bottleneckBlock(x, filters, stride, seeds, name);
    }
    taps.push(x);
  }
  return { c1, c2: taps[0], c3: taps[1], c4: taps[2], c5: taps[3] };
}

function upsample(x: Sym, factor: [number, number], name: string): Sym {
  return tf.layers.upSampling2d({
    size: factor, interpolation: 'bilinear', name,
  }).apply(x) as Sym;
}

/**
 * Attention gate on a skip connection: a 1x1 projection of the
 * concatenated encoder and decoder features, a sigmoid gate map, and an
 * elementwise product with the encoder features (the single-channel gate
 * broadcasts over channels).
 */
function attachGate(skip: Sym, gating: Sym, seeds: SeedStream,
                    name: string): Sym {
  const stacked = tf.layers.concatenate({ name: `${name}_cat` })
    .apply([skip, gating]) as Sym;
  const score = conv(stacked, 1, 1, seeds, `${name}_proj`, 1, 1, true);
  const gate = tf.layers.activation({
    activation: 'sigmoid', name: `${name}_map`,
  }).apply(score) as Sym;
  return tf.layers.multiply({ name: `${name}_out` })
    .apply([skip, gate]) as Sym;
}

function unetDecoder(enc: EncoderTaps, cfg: ModelConfig,
                     seeds: SeedStream): Sym {
  const base = cfg.baseFilters;
  const stages: Array<[Sym, number]> = [
    [enc.c4, base * 4], [enc.c3, base * 2], [enc.c2, base], [enc.c1, base],
  ];
  let d = enc.c5;
  stages.forEach(([skip, filters], i) => {
    d = upsample(d, [2, 2], `up${i + 1}`);
    const gated = cfg.attentionGates
      ? attachGate(skip, d, seeds, `att${i + 1}`)
      : skip;
    d = tf.layers.concatenate({ name: `dec${i + 1}_cat` })
      .apply([d, gated]) as Sym;
    d = convBnRelu(d, filters, 3, seeds, `dec${i + 1}_a`);
    d = convBnRelu(d, filters, 3, seeds, `dec${i + 1}_b`);
  });
  d = upsample(d, [2, 2], 'up_final');
  d = convBnRelu(d, base, 3, seeds, 'head');
  return conv(d, NUM_CLASSES, 1, seeds, 'logits', 1, 1, true);
}

function asppHead(enc: EncoderTaps, cfg: ModelConfig,
                  seeds: SeedStream): Sym {
  const f = cfg.baseFilters * 4;
  const grid = cfg.imageSize / 32;
  const branches: Sym[] = [
    convBnRelu(enc.c5, f, 1, seeds, 'aspp_1x1'),
    convBnRelu(enc.c5, f, 3, seeds, 'aspp_r6', 1, 6),
    convBnRelu(enc.c5, f, 3, seeds, 'aspp_r12', 1, 12),
    convBnRelu(enc.c5, f, 3, seeds, 'aspp_r18', 1, 18),
  ];
  let pooled = tf.layers.globalAveragePooling2d({ name: 'aspp_pool' })
    .apply(enc.c5) as Sym;
  pooled = tf.layers.reshape({
    targetShape: [1, 1, enc.c5.shape[3] as number], name: 'aspp_pool_grid',
  }).apply(pooled) as Sym;
  pooled = convBnRelu(pooled, f, 1, seeds, 'aspp_pool_proj');
  branches.push(upsample(pooled, [grid, grid], 'aspp_pool_up'));

  let x = tf.layers.concatenate({ name: 'aspp_cat' }).apply(branches) as Sym;
  x = convBnRelu(x, f, 1, seeds, 'aspp_merge');
  x = upsample(x, [8, 8], 'aspp_up');

  const lowFilters = Math.max(4, Math.round(cfg.baseFilters * 0.75));
  let low = convBnRelu(enc.c2, lowFilters, 1, seeds, 'low_proj');
  if (cfg.attentionGates) {
    low = attachGate(low, x, seeds, 'att_low');
  }
  x = tf.layers.concatenate({ name: 'dec_cat' }).apply([x, low]) as Sym;
  x = convBnRelu(x, f, 3, seeds, 'dec_a');
  x = convBnRelu(x, f, 3, seeds, 'dec_b');
  x = conv(x, NUM_CLASSES, 1, seeds, 'logits', 1, 1, true);
  return upsample(x, [4, 4], 'logits_up');
}

export function buildModel(cfg: ModelConfig): tf.LayersModel {
  if (cfg.imageSize % 32 !== 0 || cfg.imageSize < 32) {
    throw new Error(`imageSize must be a positive multiple of 32, got ${cfg.imageSize}`);
  }
  if (cfg.baseFilters < 1) {
    throw new Error('baseFilters must be at least 1');
  }
  const seeds = new SeedStream(cfg.seed * 1000 + 1);
  const input = tf.input({
    shape: [cfg.imageSize, cfg.imageSize, 3], name: 'spectrogram',
  });
  const backbone = cfg.encoder === 'resnet50' ? 'resnet50' : 'resnet18';
  const enc = resnetEncoder(input, backbone, cfg.baseFilters, seeds);
  const logits = cfg.encoder === 'deeplabv3plus'
    ? asppHead(enc, cfg, seeds)
    : unetDecoder(enc, cfg, seeds);
  const probs = tf.layers.softmax({ axis: -1, name: 'probs' })
    .apply(logits) as Sym;
  return tf.model({ inputs: input, outputs: probs, name: cfg.encoder });
}
