/** Wire contract of GET /api/search on the iral service. */

export interface ResultItem {
  title: string;
  link: string;
  snippet: string;
  display_link: string;
  score: number;
  rank: number;
}

export interface SearchResponse {
  query: string;
  page: number;
  page_size: number;
  total: number;
  results: ResultItem[];
  degraded: string[];
}

export const PAGE_COUNT = 5;
export const PAGE_SIZE = 10;
