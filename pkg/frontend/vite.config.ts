import react from "@vitejs/plugin-react";
import { defineConfig } from "vitest/config";

// The dev server proxies API paths to a locally running `spindual serve`
// so the app can use same-origin relative URLs in every environment.
const backend = "http://127.0.0.1:8000";

export default defineConfig({
  plugins: [react()],
  server: {
    proxy: {
      "/models": backend,
      "/scenarios": backend,
      "/sessions": backend,
    },
  },
  test: {
    environment: "jsdom",
    setupFiles: ["test/setup.ts"],
    include: ["test/**/*.test.{ts,tsx}"],
    testTimeout: 30000,
  },
});
