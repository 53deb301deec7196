/**
 * @fileoverview Orchestration between the API client and the UI state.
 *
 * The Workbench owns a UiState and exposes the user-level actions: open a
 * dataset, toggle leaves, change strategy/seed, refresh the preview, commit
 * with a before/after comparison, and undo. It performs no domain math —
 * every displayed value originates in a service response.
 */

import {
  ApiClient,
  type CommitResponse,
  type HideRequest,
  type Strategy,
  type TreeDocument,
  type TreeResponse,
} from "./api.js";
import {
  initialState,
  setSeed,
  setStrategy,
  toggleLeaf,
  withPreview,
  withRefreshedTree,
  withSession,
  type UiState,
} from "./state.js";

/** What commit_and_compare hands to the comparison view. */
export interface CommitComparison {
  before: TreeDocument;
  after: TreeDocument;
  report: CommitResponse["report"];
  /** Download target for the sanitized CSV. */
  exportHref: string;
  /** True when the service reports undo history below this commit. */
  canUndo: boolean;
}

export class Workbench {
  private readonly api: ApiClient;
  private current: UiState = initialState();

  constructor(api: ApiClient) {
    this.api = api;
  }

  get state(): UiState {
    return this.current;
  }

  private get sessionId(): string {
    if (this.current.sessionId === null) {
      throw new Error("no session open");
    }
    return this.current.sessionId;
  }

  private request(): HideRequest {
    return {
      leaves: [...this.current.selected],
      strategy: this.current.strategy,
      seed: this.current.seed,
    };
  }

  /** Uploads a CSV and swaps the page to the new session's tree. */
  async open(csv: string): Promise<TreeResponse> {
    const sessionId = await this.api.createSession(csv);
    const tree = await this.api.tree(sessionId);
    this.current = withSession(this.current, sessionId, tree);
    return tree;
  }

  /**
   * Selection/strategy/seed changes invalidate the stored preview
   * immediately; the caller then awaits refreshPreview() to repopulate it.
   */
  toggleLeaf(path: string): void {
    this.current = toggleLeaf(this.current, path);
  }

  setStrategy(strategy: Strategy): void {
    this.current = setStrategy(this.current, strategy);
  }

  setSeed(seed: number): void {
    this.current = setSeed(this.current, seed);
  }

  /**
   * Fetches the cost report for the current selection. No-op with nothing
   * selected. On a service error the selection is preserved and the error
   * propagates for the page to show inline.
   */
  async refreshPreview(): Promise<void> {
    if (this.current.selected.length === 0) {
      return;
    }
    const request = this.request();
    const report = await this.api.preview(this.sessionId, request);
    // A stale response must not overwrite a newer selection's panel.
    if (
      request.leaves.join("\n") === this.current.selected.join("\n") &&
      request.strategy === this.current.strategy &&
      request.seed === this.current.seed
    ) {
      this.current = withPreview(this.current, report);
    }
  }

  /**
   * Commits the current selection and returns the before/after pair for the
   * side-by-side view. The selection is cleared; the refreshed tree (with
   * its new leaf rows) comes from the tree endpoint.
   */
  async commitAndCompare(): Promise<CommitComparison> {
    const before = this.current.tree;
    if (before === null) {
      throw new Error("no tree loaded");
    }
    const response = await this.api.commit(this.sessionId, this.request());
    const refreshed = await this.api.tree(this.sessionId);
    this.current = withRefreshedTree(this.current, refreshed);
    return {
      before: before.tree,
      after: response.tree,
      report: response.report,
      exportHref: this.api.exportUrl(this.sessionId),
      canUndo: true,
    };
  }

  /** Pops the last commit; returns true when the session is back at root. */
  async undo(): Promise<boolean> {
    const response = await this.api.undo(this.sessionId);
    const refreshed = await this.api.tree(this.sessionId);
    this.current = withRefreshedTree(this.current, refreshed);
    return response.atRoot;
  }
}
