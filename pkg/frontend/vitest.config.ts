import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
    // the end-to-end suite boots a real service process
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});
