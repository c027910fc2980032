import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ResultItem, SearchResponse } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

/** The real service body frozen by the backend's golden-file suite. */
export function goldenPageOne(): SearchResponse {
  const path = join(here, "..", "..", "fixtures", "golden", "search_alcoholism_page1.json");
  return JSON.parse(readFileSync(path, "utf-8")) as SearchResponse;
}

export function syntheticRows(count: number, offset = 0): ResultItem[] {
  return Array.from({ length: count }, (_, i) => ({
    title: `Result ${offset + i + 1}`,
    link: `http://site${offset + i + 1}.example/`,
    snippet: `snippet ${offset + i + 1}`,
    display_link: `site${offset + i + 1}.example`,
    score: 1 - (offset + i) / 100,
    rank: offset + i + 1,
  }));
}

export function responseFor(query: string, page: number, rows: ResultItem[], total = 16): SearchResponse {
  return { query, page, page_size: 10, total, results: rows, degraded: [] };
}

/** Deterministic PRNG for property-style sequence tests. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
