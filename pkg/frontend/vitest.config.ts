import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // only the TypeScript sources; never the compiled copies in dist/
    include: ["tests/**/*.test.ts"],
  },
});
