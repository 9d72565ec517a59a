#!/usr/bin/env node
/**
 * Command-line entry points: train, predict, bench.
 */
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { loadTrainConfig } from './config.js';
import { loadModel, saveMeta, saveModel } from './checkpoint.js';
import { trainModel } from './train.js';
import { predictMasks } from './predict.js';
import { benchmarkInference } from './bench.js';

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName('ismsim-trainer')
    .command(
      'train', 'train a segmentation network on a generated dataset',
      (y) => y
        .option('config', {
          type: 'string', demandOption: true,
          describe: 'JSON training config',
        })
        .option('data', {
          type: 'string', demandOption: true, describe: 'dataset root',
        })
        .option('out', {
          type: 'string', demandOption: true,
          describe: 'checkpoint directory to write',
        }),
      async (argv) => {
        const cfg = loadTrainConfig(argv.config);
        const result = await trainModel(cfg, argv.data, (e) => {
          console.log(
            `epoch ${e.epoch}/${cfg.epochs} lr ${e.lr.toExponential(1)} `
            + `loss ${e.trainLoss.toFixed(4)} `
            + `val_acc ${e.valAccuracy.toFixed(4)} `
            + `val_miou ${e.valMeanIou.toFixed(4)} `
            + `${e.seconds.toFixed(1)}s`);
        });
        await saveModel(result.model, argv.out);
        saveMeta(argv.out, {
          config: cfg,
          classWeights: result.classWeights,
          log: result.log,
        });
        console.log(`checkpoint written to ${argv.out}`);
      })
    .command(
      'predict', 'write predicted masks for dataset records',
      (y) => y
        .option('checkpoint', {
          type: 'string', demandOption: true,
          describe: 'checkpoint directory',
        })
        .option('data', {
          type: 'string', demandOption: true, describe: 'dataset root',
        })
        .option('out', {
          type: 'string', demandOption: true,
          describe: 'directory for predicted masks',
        })
        .option('split', {
          type: 'string', describe: 'restrict to one split',
        }),
      async (argv) => {
        const model = await loadModel(argv.checkpoint);
        const written = predictMasks(model, argv.data, argv.out, argv.split);
        console.log(`wrote ${written.length} masks to ${argv.out}`);
      })
    .command(
      'bench', 'time per-record inference',
      (y) => y
        .option('checkpoint', {
          type: 'string', demandOption: true,
          describe: 'checkpoint directory',
        })
        .option('data', {
          type: 'string', demandOption: true, describe: 'dataset root',
        })
        .option('split', {
          type: 'string', describe: 'restrict to one split',
        })
        .option('limit', {
          type: 'number', describe: 'benchmark at most this many records',
        }),
      async (argv) => {
        const model = await loadModel(argv.checkpoint);
        const result = benchmarkInference(model, argv.data, {
          split: argv.split, limit: argv.limit,
        });
        console.log(JSON.stringify({
          records: result.records,
          mean_seconds: result.meanSeconds,
          variance_seconds: result.varianceSeconds,
        }));
      })
    .demandCommand(1, 'specify a command: train, predict, or bench')
    .strict()
    .help()
    .parseAsync();
}

main().catch((err: unknown) => {
  console.error((err as Error).message ?? String(err));
  process.exit(1);
});
