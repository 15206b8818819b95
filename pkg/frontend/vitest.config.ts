import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.spec.ts"],
    // the bridge suite spawns the native CLI ~100 times
    testTimeout: 300_000,
    hookTimeout: 60_000,
  },
});
