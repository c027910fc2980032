/**
 * Pure search-screen state machine.
 *
 * Events go in, a new state plus a (possibly empty) list of fetch effects
 * comes out; nothing here touches the network or the DOM, so every UI rule
 * lives in one testable place. The rules:
 *
 *  - a blank submit does nothing at all (no request, no state change);
 *  - result pages run 1..5 and exactly one is current at a time;
 *  - a page already fetched for the current query is shown from cache;
 *  - only the newest request epoch may update the screen (latest wins).
 */

import { PAGE_COUNT, ResultItem, SearchResponse } from "./types.js";

export type Phase = "idle" | "loading" | "results" | "error";

export interface UiState {
  query: string;
  phase: Phase;
  currentPage: number;
  pages: (ResultItem[] | undefined)[];
  total: number;
  degraded: string[];
  error: string;
  epoch: number;
}

export interface FetchEffect {
  kind: "fetch";
  query: string;
  page: number;
  epoch: number;
}

export type UiEvent =
  | { kind: "submit"; query: string }
  | { kind: "page-click"; page: number }
  | { kind: "response"; epoch: number; payload: SearchResponse }
  | { kind: "failure"; epoch: number; message: string };

export function initialState(): UiState {
  return {
    query: "",
    phase: "idle",
    currentPage: 1,
    pages: new Array(PAGE_COUNT).fill(undefined),
    total: 0,
    degraded: [],
    error: "",
    epoch: 0,
  };
}

export function transition(state: UiState, event: UiEvent): [UiState, FetchEffect[]] {
  switch (event.kind) {
    case "submit": {
      if (event.query.trim() === "") {
        return [state, []]; // blank search: no response, no request
      }
      const epoch = state.epoch + 1;
      const next: UiState = {
        ...initialState(),
        query: event.query,
        phase: "loading",
        epoch,
      };
      return [next, [{ kind: "fetch", query: event.query, page: 1, epoch }]];
    }

    case "page-click": {
      const page = event.page;
      if (page < 1 || page > PAGE_COUNT || state.phase === "idle" || state.query === "") {
        return [state, []];
      }
      if (state.pages[page - 1] !== undefined || state.phase === "loading") {
        // cached page (or a fetch already in flight): just reveal it
        return [{ ...state, currentPage: page }, []];
      }
      const epoch = state.epoch + 1;
      const next: UiState = { ...state, phase: "loading", currentPage: page, epoch };
      return [next, [{ kind: "fetch", query: state.query, page, epoch }]];
    }

    case "response": {
      if (event.epoch !== state.epoch) {
        return [state, []]; // stale response from an abandoned request
      }
      const pages = state.pages.slice();
      pages[event.payload.page - 1] = event.payload.results;
      const next: UiState = {
        ...state,
        phase: "results",
        pages,
        total: event.payload.total,
        degraded: event.payload.degraded,
        currentPage: event.payload.page,
        error: "",
      };
      return [next, []];
    }

    case "failure": {
      if (event.epoch !== state.epoch) {
        return [state, []];
      }
      return [{ ...state, phase: "error", error: event.message }, []];
    }
  }
}

/** Index (1-based) of the single visible page container. */
export function visiblePage(state: UiState): number {
  return state.currentPage;
}
