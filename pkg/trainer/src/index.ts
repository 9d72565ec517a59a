export {
  IMAGE_SIZE, NUM_CLASSES, CLASS_CODES, CLASS_NAMES,
  loadManifest, splitRecords, readImage, readMask,
  codesToIndices, indicesToCodes, countClassPixels,
  classWeightsFromCounts, mulberry32, shuffled, batches,
} from './dataset.js';
export type { Manifest, ManifestRecord, Batch } from './dataset.js';
export { LOG_CLAMP, weightedCrossEntropy, learningRateForEpoch } from './loss.js';
export {
  gateMap, gateApply, gateObjectiveRef, gateGradientRef,
  gateGradientFiniteDiff,
} from './gate.js';
export type { GateRefInput } from './gate.js';
export { buildModel } from './model.js';
export type { EncoderName, ModelConfig } from './model.js';
export { parseTrainConfig, loadTrainConfig } from './config.js';
export type { TrainConfig } from './config.js';
export { newConfusion, accumulateConfusion, confusionStats } from './metrics.js';
export type { ConfusionStats } from './metrics.js';
export { saveModel, loadModel, saveMeta, loadMeta } from './checkpoint.js';
export type { CheckpointMeta, EpochLog } from './checkpoint.js';
export { trainModel, validateSplit, toModelInput } from './train.js';
export type { TrainResult } from './train.js';
export { predictMasks, predictCodes, modelImageSize } from './predict.js';
export { benchmarkInference, meanVariance } from './bench.js';
export type { BenchResult } from './bench.js';
