import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the integration file shells out to the solver CLI; the convergence
    // table alone takes ~40 s to produce
    testTimeout: 240_000,
    hookTimeout: 240_000,
  },
});
