/**
 * @fileoverview Cost preview panel.
 *
 * The panel is a verbatim projection of the service's report: every number
 * shown is a response field, copied unchanged into the view model. The only
 * client-side work is formatting (percent text, row layout).
 */

import type { HideReport } from "./api.js";
import type { UiState } from "./state.js";

export type PanelView =
  | { kind: "empty" }
  | {
      kind: "report";
      totalAdded: number;
      growthRatio: number;
      similarity: number;
      hiddenRules: readonly string[];
      warnings: readonly string[];
      perNode: HideReport["perNode"];
    };

/**
 * Projects the current state onto the panel. With nothing selected the
 * panel prompts for a selection; otherwise it mirrors the stored preview
 * (or stays empty until the matching preview arrives).
 */
export function panelView(state: UiState): PanelView {
  if (state.selected.length === 0 || state.preview === null) {
    return { kind: "empty" };
  }
  const report = state.preview;
  return {
    kind: "report",
    totalAdded: report.totalAdded,
    growthRatio: report.growthRatio,
    similarity: report.similarity,
    hiddenRules: report.hiddenRules,
    warnings: report.warnings,
    perNode: report.perNode,
  };
}

const escapeHtml = (text: string): string =>
  text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");

/** HTML for the panel; pure formatting of the view model. */
export function renderPanel(view: PanelView): string {
  if (view.kind === "empty") {
    return `<p class="prompt">Select one or more leaves to preview the hiding cost.</p>`;
  }
  const rows = view.perNode
    .map(
      (row) =>
        `<tr><td>${escapeHtml(row.path || "(root)")}</td>` +
        `<td>${row.relabeledPtoN}</td><td>${row.relabeledNtoP}</td>` +
        `<td>${row.addedP}</td><td>${row.addedN}</td></tr>`,
    )
    .join("");
  const hidden = view.hiddenRules.map((rule) => `<li>${escapeHtml(rule)}</li>`).join("");
  const warnings = view.warnings
    .map((warning) => `<li class="warning">${escapeHtml(warning)}</li>`)
    .join("");
  return (
    `<dl class="totals">` +
    `<dt>Instances added</dt><dd>${view.totalAdded}</dd>` +
    `<dt>Growth</dt><dd>${(view.growthRatio * 100).toFixed(1)}%</dd>` +
    `<dt>Tree similarity</dt><dd>${view.similarity.toFixed(3)}</dd>` +
    `</dl>` +
    `<table class="per-node"><thead><tr>` +
    `<th>node</th><th>p&rarr;n</th><th>n&rarr;p</th><th>+p</th><th>+n</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>` +
    `<h3>Rules hidden</h3><ul class="hidden-rules">${hidden}</ul>` +
    (warnings ? `<ul class="warnings">${warnings}</ul>` : "")
  );
}
