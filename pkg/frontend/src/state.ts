/**
 * @fileoverview Client-side state for the hiding workbench.
 *
 * The state is immutable; every transition returns a fresh object. Two
 * invariants are enforced structurally:
 *   - a stored preview always corresponds to the current selection,
 *     strategy, and seed (any change to those clears it), and
 *   - the selection is cleared after a commit.
 */

import type { HideReport, Strategy, TreeResponse } from "./api.js";

export interface UiState {
  /** Service session backing this page, or null before a dataset is loaded. */
  sessionId: string | null;
  /** Tree currently rendered, with its per-leaf rows. */
  tree: TreeResponse | null;
  /** Selected leaf paths in click order; multi-select = one grouped request. */
  selected: readonly string[];
  /** Cost report for exactly the current selection/strategy/seed, or null. */
  preview: HideReport | null;
  strategy: Strategy;
  seed: number;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    tree: null,
    selected: [],
    preview: null,
    strategy: "hold_back",
    seed: 0,
  };
}

/** A freshly opened session: new tree, nothing selected, no preview. */
export function withSession(state: UiState, sessionId: string, tree: TreeResponse): UiState {
  return { ...state, sessionId, tree, selected: [], preview: null };
}

/** Adds or removes one leaf path; the old preview no longer applies. */
export function toggleLeaf(state: UiState, path: string): UiState {
  const selected = state.selected.includes(path)
    ? state.selected.filter((p) => p !== path)
    : [...state.selected, path];
  return { ...state, selected, preview: null };
}

export function setStrategy(state: UiState, strategy: Strategy): UiState {
  if (strategy === state.strategy) {
    return state;
  }
  return { ...state, strategy, preview: null };
}

export function setSeed(state: UiState, seed: number): UiState {
  if (seed === state.seed) {
    return state;
  }
  return { ...state, seed, preview: null };
}

/** Stores the report the service returned for the current request. */
export function withPreview(state: UiState, preview: HideReport): UiState {
  return { ...state, preview };
}

/** A re-served tree after commit or undo; the selection must not survive. */
export function withRefreshedTree(state: UiState, tree: TreeResponse): UiState {
  return { ...state, tree, selected: [], preview: null };
}
