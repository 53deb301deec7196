/**
 * State invariants: the stored preview always matches the current
 * selection/strategy/seed (any change clears it), and a refreshed tree
 * (after commit or undo) never keeps the old selection.
 */

import { describe, expect, it } from "vitest";

import { HideReportSchema, TreeResponseSchema } from "../src/api.js";
import {
  initialState,
  setSeed,
  setStrategy,
  toggleLeaf,
  withPreview,
  withRefreshedTree,
  withSession,
} from "../src/state.js";
import { FIRST_LEAF, SECOND_LEAF, fixture } from "./helpers.js";

const tree = TreeResponseSchema.parse(fixture.treeBefore);
const report = HideReportSchema.parse(fixture.previewFirst);

const selectedOne = () =>
  withPreview(toggleLeaf(withSession(initialState(), "s1", tree), FIRST_LEAF), report);

describe("selection", () => {
  it("toggles a leaf in and out", () => {
    let state = withSession(initialState(), "s1", tree);
    state = toggleLeaf(state, FIRST_LEAF);
    expect(state.selected).toEqual([FIRST_LEAF]);
    state = toggleLeaf(state, SECOND_LEAF);
    expect(state.selected).toEqual([FIRST_LEAF, SECOND_LEAF]);
    state = toggleLeaf(state, FIRST_LEAF);
    expect(state.selected).toEqual([SECOND_LEAF]);
  });
});

describe("preview invalidation", () => {
  it("clears the preview when the selection changes", () => {
    const state = toggleLeaf(selectedOne(), SECOND_LEAF);
    expect(state.preview).toBeNull();
  });

  it("clears the preview when the strategy changes", () => {
    const state = setStrategy(selectedOne(), "even_split");
    expect(state.preview).toBeNull();
  });

  it("clears the preview when the seed changes", () => {
    const state = setSeed(selectedOne(), 99);
    expect(state.preview).toBeNull();
  });

  it("keeps the preview when strategy and seed are set to themselves", () => {
    let state = selectedOne();
    state = setStrategy(state, state.strategy);
    state = setSeed(state, state.seed);
    expect(state.preview).not.toBeNull();
  });
});

describe("tree refresh", () => {
  it("clears selection and preview after commit or undo", () => {
    const refreshed = withRefreshedTree(selectedOne(), tree);
    expect(refreshed.selected).toEqual([]);
    expect(refreshed.preview).toBeNull();
    expect(refreshed.tree).toEqual(tree);
  });

  it("opening a session resets selection from any previous dataset", () => {
    const state = withSession(selectedOne(), "s2", tree);
    expect(state.sessionId).toBe("s2");
    expect(state.selected).toEqual([]);
    expect(state.preview).toBeNull();
  });
});
