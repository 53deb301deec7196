/**
 * @fileoverview Tree rendering: tree JSON -> view model -> HTML fragment.
 *
 * The view model is plain data so tests can assert on it without a DOM.
 * Internal nodes show their split attribute and p/n counts; leaves show
 * label, counts, and rule text, and carry their path for click selection.
 * Rule text comes from the service's per-leaf rows when available; the
 * local fallback joins path segments with the same formatting.
 */

import { TreeDocumentSchema, type LeafInfo, type TreeDocument, type TreeNode } from "./api.js";

export interface TreeViewNode {
  /** Split attribute for internals, class label for leaves. */
  title: string;
  /** "Np / Mn" counts, straight from the node. */
  counts: string;
  /** Leaf only: full rule text, e.g. "a1=t/a2=f => p". */
  rule?: string;
  /** Leaf only: selection key, e.g. "a1=t/a2=f" ("" for a root leaf). */
  path?: string;
  /** Leaf only: whether the leaf is currently selected. */
  selected?: boolean;
  /** Edge label from the parent ("t", "f", or "" at the root). */
  branch: string;
  children: TreeViewNode[];
}

function nodeView(
  node: TreeNode,
  branch: string,
  prefix: string,
  selected: ReadonlySet<string>,
  rules: ReadonlyMap<string, string>,
): TreeViewNode {
  if (node.kind === "leaf") {
    return {
      title: node.label,
      counts: `${node.p}p / ${node.n}n`,
      rule: rules.get(prefix) ?? `${prefix} => ${node.label}`,
      path: prefix,
      selected: selected.has(prefix),
      branch,
      children: [],
    };
  }
  const step = (value: "t" | "f") =>
    prefix ? `${prefix}/${node.attribute}=${value}` : `${node.attribute}=${value}`;
  return {
    title: node.attribute,
    counts: `${node.p}p / ${node.n}n`,
    branch,
    children: [
      nodeView(node.left, "t", step("t"), selected, rules),
      nodeView(node.right, "f", step("f"), selected, rules),
    ],
  };
}

/**
 * Validates a tree document and builds the view model.
 * Throws Error with a readable message on malformed input (the caller
 * renders it as an error banner).
 */
export function treeView(
  doc: unknown,
  selected: readonly string[] = [],
  leaves: readonly LeafInfo[] = [],
): TreeViewNode {
  const parsed = TreeDocumentSchema.safeParse(doc);
  if (!parsed.success) {
    throw new Error(`malformed tree document: ${parsed.error.issues[0]?.message ?? "invalid"}`);
  }
  const rules = new Map(leaves.map((leaf) => [leaf.path, leaf.rule]));
  return nodeView(parsed.data.root, "", "", new Set(selected), rules);
}

/** All leaf views in left-to-right (true branch first) order. */
export function leafViews(view: TreeViewNode): TreeViewNode[] {
  if (view.children.length === 0) {
    return [view];
  }
  return view.children.flatMap(leafViews);
}

const escapeHtml = (text: string): string =>
  text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");

function nodeHtml(view: TreeViewNode): string {
  const edge = view.branch ? `<span class="edge">${view.branch}</span>` : "";
  if (view.children.length === 0) {
    const classes = view.selected ? "leaf selected" : "leaf";
    return (
      `<li>${edge}<button type="button" class="${classes}" data-path="${escapeHtml(view.path ?? "")}">` +
      `<span class="label">${escapeHtml(view.title)}</span>` +
      `<span class="counts">${escapeHtml(view.counts)}</span>` +
      `<span class="rule">${escapeHtml(view.rule ?? "")}</span>` +
      `</button></li>`
    );
  }
  const children = view.children.map(nodeHtml).join("");
  return (
    `<li>${edge}<span class="split">` +
    `<span class="attribute">${escapeHtml(view.title)}</span>` +
    `<span class="counts">${escapeHtml(view.counts)}</span>` +
    `</span><ul>${children}</ul></li>`
  );
}

/** HTML for the clickable node diagram. */
export function renderTree(
  doc: TreeDocument,
  selected: readonly string[] = [],
  leaves: readonly LeafInfo[] = [],
): string {
  return `<ul class="tree">${nodeHtml(treeView(doc, selected, leaves))}</ul>`;
}

/** HTML for an error banner (malformed document, failed request, ...). */
export function renderError(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}
