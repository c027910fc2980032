/**
 * DOM rendering: a search form, five fixed page containers of which exactly
 * one is shown, five page buttons, and the error / degraded notices.
 */

import { UiState } from "./state.js";
import { PAGE_COUNT, ResultItem } from "./types.js";

export interface ViewHandlers {
  onSubmit: (query: string) => void;
  onPageClick: (page: number) => void;
}

export function renderApp(root: HTMLElement, state: UiState, handlers: ViewHandlers): void {
  const doc = root.ownerDocument;
  root.textContent = "";

  const form = doc.createElement("form");
  form.id = "search-form";
  const input = doc.createElement("input");
  input.type = "text";
  input.id = "search-input";
  input.name = "q";
  input.value = state.query;
  input.setAttribute("autocomplete", "off");
  const button = doc.createElement("button");
  button.type = "submit";
  button.id = "search-button";
  button.textContent = "Search";
  form.append(input, button);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    handlers.onSubmit(input.value);
  });
  root.append(form);

  const status = doc.createElement("div");
  status.id = "status";
  if (state.phase === "loading") {
    status.textContent = "Searching…";
  } else if (state.phase === "results") {
    status.textContent = `${state.total} results`;
  }
  root.append(status);

  if (state.degraded.length > 0) {
    const notice = doc.createElement("div");
    notice.id = "degraded";
    notice.textContent = `Some providers did not answer: ${state.degraded.join(", ")}`;
    root.append(notice);
  }

  const error = doc.createElement("div");
  error.id = "error";
  error.style.display = state.phase === "error" ? "block" : "none";
  error.textContent = state.phase === "error" ? state.error : "";
  root.append(error);

  for (let page = 1; page <= PAGE_COUNT; page++) {
    const container = doc.createElement("div");
    container.id = `page${page}`;
    container.className = "result-page";
    container.style.display = page === state.currentPage ? "block" : "none";
    const rows = state.pages[page - 1];
    if (state.phase === "results" && rows !== undefined) {
      if (rows.length === 0) {
        const empty = doc.createElement("p");
        empty.className = "empty-page";
        empty.textContent = "No results on this page.";
        container.append(empty);
      }
      for (const row of rows) {
        container.append(renderRow(doc, row));
      }
    }
    root.append(container);
  }

  const pager = doc.createElement("div");
  pager.id = "pager";
  for (let page = 1; page <= PAGE_COUNT; page++) {
    const pageButton = doc.createElement("button");
    pageButton.type = "button";
    pageButton.className = "page-button";
    pageButton.dataset.page = String(page);
    pageButton.textContent = String(page);
    if (page === state.currentPage) {
      pageButton.classList.add("active");
    }
    pageButton.addEventListener("click", () => handlers.onPageClick(page));
    pager.append(pageButton);
  }
  root.append(pager);
}

function renderRow(doc: Document, row: ResultItem): HTMLElement {
  const item = doc.createElement("div");
  item.className = "result-row";

  const heading = doc.createElement("h3");
  const link = doc.createElement("a");
  link.href = row.link;
  link.textContent = row.title || row.link;
  link.target = "_blank";
  link.rel = "noopener";
  heading.append(link);

  const snippet = doc.createElement("p");
  snippet.className = "snippet";
  snippet.textContent = row.snippet;

  const display = doc.createElement("span");
  display.className = "resulturl";
  display.textContent = row.display_link || row.link;

  item.append(heading, snippet, display);
  return item;
}
