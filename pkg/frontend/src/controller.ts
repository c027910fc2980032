/**
 * Glue between the state machine and the outside world: runs fetch effects,
 * routes their outcomes back in as events, and repaints after every change.
 */

import { Fetcher } from "./api.js";
import { FetchEffect, UiEvent, UiState, initialState, transition } from "./state.js";

export class SearchController {
  private state: UiState = initialState();

  constructor(
    private readonly fetcher: Fetcher,
    private readonly onChange: (state: UiState) => void = () => {},
  ) {}

  get current(): UiState {
    return this.state;
  }

  submitSearch(query: string): void {
    this.dispatch({ kind: "submit", query });
  }

  goToPage(page: number): void {
    this.dispatch({ kind: "page-click", page });
  }

  dispatch(event: UiEvent): void {
    const [next, effects] = transition(this.state, event);
    const changed = next !== this.state;
    this.state = next;
    if (changed) {
      this.onChange(this.state);
    }
    for (const effect of effects) {
      void this.run(effect);
    }
  }

  private async run(effect: FetchEffect): Promise<void> {
    try {
      const payload = await this.fetcher(effect.query, effect.page);
      this.dispatch({ kind: "response", epoch: effect.epoch, payload });
    } catch (error) {
      const message = error instanceof Error ? error.message : String(error);
      this.dispatch({ kind: "failure", epoch: effect.epoch, message });
    }
  }
}
