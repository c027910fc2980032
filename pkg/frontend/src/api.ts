import { SearchResponse } from "./types.js";

export type Fetcher = (query: string, page: number) => Promise<SearchResponse>;

/** Default fetcher against the service endpoint the UI is served from. */
export const fetchSearchPage: Fetcher = async (query, page) => {
  const url = `/api/search?q=${encodeURIComponent(query)}&page=${page}`;
  const response = await fetch(url);
  const body = await response.json();
  if (!response.ok) {
    throw new Error(typeof body.error === "string" ? body.error : `HTTP ${response.status}`);
  }
  return body as SearchResponse;
};
