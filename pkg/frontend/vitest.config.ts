import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // parity suites spawn the CLI per call
    testTimeout: 600_000,
    hookTimeout: 120_000,
  },
});
