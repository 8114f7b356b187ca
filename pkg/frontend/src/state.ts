/**
 * Page state. One store, one rule: a single in-flight request at a time —
 * `begin()` refuses to start a second submit/review while one is running,
 * which is what disables both buttons together.
 */

import type { ApiError, Review, Verdict } from "./api.js";

export type Busy = "idle" | "submitting" | "reviewing";

export interface UiState {
  selectedExercise: string | null;
  source: string;
  verdictPopup: Verdict | ApiError | null;
  feedback: Review | null;
  busy: Busy;
}

export class Store {
  private state: UiState = {
    selectedExercise: null,
    source: "",
    verdictPopup: null,
    feedback: null,
    busy: "idle",
  };
  private listeners: Array<(state: UiState) => void> = [];

  get(): UiState {
    return this.state;
  }

  set(partial: Partial<UiState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  subscribe(listener: (state: UiState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  /** Claim the in-flight slot; false means another request is running. */
  begin(kind: Exclude<Busy, "idle">): boolean {
    if (this.state.busy !== "idle") {
      return false;
    }
    this.set({ busy: kind });
    return true;
  }

  end(): void {
    this.set({ busy: "idle" });
  }
}
