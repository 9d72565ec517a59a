import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    globalSetup: ['test/setup.ts'],
    testTimeout: 180_000,
    hookTimeout: 180_000,
    // tfjs keeps global backend state; one worker avoids cross-file races
    pool: 'forks',
    poolOptions: { forks: { singleFork: true } }
  }
});
