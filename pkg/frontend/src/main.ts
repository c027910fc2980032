import { fetchSearchPage } from "./api.js";
import { SearchController } from "./controller.js";
import { renderApp } from "./view.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}

const controller: SearchController = new SearchController(fetchSearchPage, (state) =>
  renderApp(root, state, {
    onSubmit: (query) => controller.submitSearch(query),
    onPageClick: (page) => controller.goToPage(page),
  }),
);

renderApp(root, controller.current, {
  onSubmit: (query) => controller.submitSearch(query),
  onPageClick: (page) => controller.goToPage(page),
});
