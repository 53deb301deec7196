/**
 * @fileoverview Page wiring: DOM events in, rendered fragments out.
 *
 * Everything interesting lives in the controller and the render helpers;
 * this module only moves strings between them and the document. Previews
 * are debounced; mutations (commit/undo) are serialized by a busy flag.
 */

import { ApiClient, ServiceError, STRATEGIES, type Strategy } from "./api.js";
import { Workbench } from "./controller.js";
import { renderPanel, panelView } from "./panel.js";
import { renderError, renderTree } from "./render.js";

const PREVIEW_DEBOUNCE_MS = 150;

interface PageElements {
  csvInput: HTMLTextAreaElement;
  openButton: HTMLButtonElement;
  strategySelect: HTMLSelectElement;
  seedInput: HTMLInputElement;
  treeHost: HTMLElement;
  panelHost: HTMLElement;
  compareHost: HTMLElement;
  commitButton: HTMLButtonElement;
  undoButton: HTMLButtonElement;
  banner: HTMLElement;
}

function requireElement<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing #${id}`);
  }
  return element as T;
}

function describe(error: unknown): string {
  if (error instanceof ServiceError) {
    return error.location ? `${error.message} (${error.location})` : error.message;
  }
  return error instanceof Error ? error.message : String(error);
}

export function bootstrap(): void {
  const els: PageElements = {
    csvInput: requireElement("csv-input"),
    openButton: requireElement("open-button"),
    strategySelect: requireElement("strategy-select"),
    seedInput: requireElement("seed-input"),
    treeHost: requireElement("tree-host"),
    panelHost: requireElement("panel-host"),
    compareHost: requireElement("compare-host"),
    commitButton: requireElement("commit-button"),
    undoButton: requireElement("undo-button"),
    banner: requireElement("banner"),
  };
  const workbench = new Workbench(new ApiClient(""));
  let busy = false;
  let previewTimer: ReturnType<typeof setTimeout> | undefined;

  const showError = (error: unknown): void => {
    els.banner.innerHTML = renderError(describe(error));
  };
  const clearError = (): void => {
    els.banner.innerHTML = "";
  };

  const redraw = (): void => {
    const state = workbench.state;
    if (state.tree) {
      try {
        els.treeHost.innerHTML = renderTree(
          state.tree.tree,
          state.selected,
          state.tree.leaves,
        );
      } catch (error) {
        els.treeHost.innerHTML = renderError(describe(error));
      }
    }
    els.panelHost.innerHTML = renderPanel(panelView(state));
    els.commitButton.disabled = busy || state.selected.length === 0 || !state.preview;
    els.undoButton.disabled = busy || state.sessionId === null;
  };

  const schedulePreview = (): void => {
    clearTimeout(previewTimer);
    previewTimer = setTimeout(() => {
      workbench
        .refreshPreview()
        .then(() => {
          clearError();
          redraw();
        })
        .catch(showError); // selection stays; only the banner changes
    }, PREVIEW_DEBOUNCE_MS);
  };

  els.openButton.addEventListener("click", () => {
    workbench
      .open(els.csvInput.value)
      .then(() => {
        clearError();
        els.compareHost.innerHTML = "";
        redraw();
      })
      .catch(showError);
  });

  els.treeHost.addEventListener("click", (event) => {
    const leaf = (event.target as HTMLElement).closest<HTMLElement>("[data-path]");
    if (!leaf || leaf.dataset.path === undefined) {
      return;
    }
    workbench.toggleLeaf(leaf.dataset.path);
    redraw();
    schedulePreview();
  });

  els.strategySelect.addEventListener("change", () => {
    const choice = els.strategySelect.value as Strategy;
    if ((STRATEGIES as readonly string[]).includes(choice)) {
      workbench.setStrategy(choice);
      redraw();
      schedulePreview();
    }
  });

  els.seedInput.addEventListener("change", () => {
    workbench.setSeed(Number(els.seedInput.value) || 0);
    redraw();
    schedulePreview();
  });

  els.commitButton.addEventListener("click", () => {
    if (busy) {
      return;
    }
    busy = true;
    redraw();
    workbench
      .commitAndCompare()
      .then((comparison) => {
        clearError();
        els.compareHost.innerHTML =
          `<div class="compare"><div><h3>Before</h3>${renderTree(comparison.before)}</div>` +
          `<div><h3>After</h3>${renderTree(comparison.after)}</div></div>` +
          `<p><a href="${comparison.exportHref}" download="sanitized.csv">Download sanitized CSV</a></p>`;
      })
      .catch(showError)
      .finally(() => {
        busy = false;
        redraw();
      });
  });

  els.undoButton.addEventListener("click", () => {
    if (busy) {
      return;
    }
    busy = true;
    redraw();
    workbench
      .undo()
      .then((atRoot) => {
        clearError();
        els.compareHost.innerHTML = atRoot
          ? `<p class="note">Back at the original dataset.</p>`
          : "";
      })
      .catch(showError)
      .finally(() => {
        busy = false;
        redraw();
      });
  });

  redraw();
}

if (typeof document !== "undefined" && document.getElementById("tree-host")) {
  bootstrap();
}
