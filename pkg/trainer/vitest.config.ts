import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    testTimeout: 240_000,
    pool: "threads",
    poolOptions: { threads: { singleThread: true } },
  },
});
