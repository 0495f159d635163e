import { defineConfig } from "vite";

export default defineConfig({
  server: {
    proxy: {
      "/stats": "http://127.0.0.1:8000",
      "/triples": "http://127.0.0.1:8000",
      "/query": "http://127.0.0.1:8000",
      "/graph": "http://127.0.0.1:8000",
      "/agreement": "http://127.0.0.1:8000",
      "/chat": "http://127.0.0.1:8000",
      "/export.nt": "http://127.0.0.1:8000",
    },
  },
});
