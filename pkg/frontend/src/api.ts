/**
 * @fileoverview Typed client for the hiding service's JSON endpoints.
 *
 * Every value the UI displays comes from these responses verbatim; the
 * client validates shapes with zod and never derives domain numbers itself.
 */

import { z } from "zod";

/** Class labels used throughout the service. */
export const LabelSchema = z.enum(["p", "n"]);
export type Label = z.infer<typeof LabelSchema>;

export interface LeafNode {
  kind: "leaf";
  label: Label;
  p: number;
  n: number;
}

export interface InternalNode {
  kind: "internal";
  attribute: string;
  p: number;
  n: number;
  left: TreeNode;
  right: TreeNode;
}

export type TreeNode = LeafNode | InternalNode;

const LeafNodeSchema: z.ZodType<LeafNode> = z.object({
  kind: z.literal("leaf"),
  label: LabelSchema,
  p: z.number().int().nonnegative(),
  n: z.number().int().nonnegative(),
});

const InternalNodeSchema: z.ZodType<InternalNode> = z.lazy(() =>
  z.object({
    kind: z.literal("internal"),
    attribute: z.string().min(1),
    p: z.number().int().nonnegative(),
    n: z.number().int().nonnegative(),
    left: TreeNodeSchema,
    right: TreeNodeSchema,
  }),
);

export const TreeNodeSchema: z.ZodType<TreeNode> = z.lazy(() =>
  z.union([LeafNodeSchema, InternalNodeSchema]),
);

export const TreeDocumentSchema = z.object({
  schema: z.array(z.string().min(1)).min(1),
  root: TreeNodeSchema,
});
export type TreeDocument = z.infer<typeof TreeDocumentSchema>;

export const LeafInfoSchema = z.object({
  path: z.string(),
  label: LabelSchema,
  p: z.number().int().nonnegative(),
  n: z.number().int().nonnegative(),
  rule: z.string(),
});
export type LeafInfo = z.infer<typeof LeafInfoSchema>;

export const TreeResponseSchema = z.object({
  tree: TreeDocumentSchema,
  leaves: z.array(LeafInfoSchema),
});
export type TreeResponse = z.infer<typeof TreeResponseSchema>;

export const ReportRowSchema = z.object({
  path: z.string(),
  relabeledPtoN: z.number().int().nonnegative(),
  relabeledNtoP: z.number().int().nonnegative(),
  addedP: z.number().int().nonnegative(),
  addedN: z.number().int().nonnegative(),
});
export type ReportRow = z.infer<typeof ReportRowSchema>;

export const HideReportSchema = z.object({
  perNode: z.array(ReportRowSchema),
  totalAdded: z.number().int().nonnegative(),
  growthRatio: z.number().nonnegative(),
  similarity: z.number().min(0).max(1),
  hiddenRules: z.array(z.string()),
  warnings: z.array(z.string()),
});
export type HideReport = z.infer<typeof HideReportSchema>;

export const CommitResponseSchema = z.object({
  report: HideReportSchema,
  tree: TreeDocumentSchema,
});
export type CommitResponse = z.infer<typeof CommitResponseSchema>;

export const UndoResponseSchema = z.object({
  tree: TreeDocumentSchema,
  atRoot: z.boolean(),
});
export type UndoResponse = z.infer<typeof UndoResponseSchema>;

const ErrorBodySchema = z.object({
  code: z.string(),
  message: z.string(),
  location: z.string().optional(),
});

/** Hiding strategies the service accepts. */
export const STRATEGIES = ["hold_back", "even_split"] as const;
export type Strategy = (typeof STRATEGIES)[number];

export interface HideRequest {
  leaves: string[];
  strategy: Strategy;
  seed: number;
}

/** A service-reported failure, carrying the structured error body. */
export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;
  readonly location: string | undefined;

  constructor(status: number, code: string, message: string, location?: string) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
    this.code = code;
    this.location = location;
  }
}

/** Subset of fetch the client needs; injectable so tests can script it. */
export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function parseBody<T>(response: Response, schema: z.ZodType<T>): Promise<T> {
  if (!response.ok) {
    let code = "http-error";
    let message = `service responded ${response.status}`;
    let location: string | undefined;
    try {
      const body = ErrorBodySchema.parse(await response.json());
      code = body.code;
      message = body.message;
      location = body.location;
    } catch {
      // keep the generic message when the body is not a structured error
    }
    throw new ServiceError(response.status, code, message, location);
  }
  return schema.parse(await response.json());
}

/**
 * Thin HTTP wrapper over the session endpoints.
 *
 * `baseUrl` is prepended to every path, so the client works both same-origin
 * ("") and against a dev server ("http://localhost:8000").
 */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async post(path: string, payload?: unknown): Promise<Response> {
    return this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
  }

  /** Uploads a CSV dataset and returns the new session id. */
  async createSession(csv: string): Promise<string> {
    const response = await this.post("/sessions", { csv });
    const body = await parseBody(response, z.object({ id: z.string().min(1) }));
    return body.id;
  }

  /** Current induced tree plus one row per leaf (path, counts, rule text). */
  async tree(sessionId: string): Promise<TreeResponse> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/tree`,
    );
    return parseBody(response, TreeResponseSchema);
  }

  /** Cost report for hiding the given leaves, without mutating the session. */
  async preview(sessionId: string, request: HideRequest): Promise<HideReport> {
    const response = await this.post(`/sessions/${sessionId}/preview`, request);
    return parseBody(response, HideReportSchema);
  }

  /** Applies the hide and returns the report plus the re-induced tree. */
  async commit(sessionId: string, request: HideRequest): Promise<CommitResponse> {
    const response = await this.post(`/sessions/${sessionId}/commit`, request);
    return parseBody(response, CommitResponseSchema);
  }

  /** Pops one committed hide; atRoot reports whether history is empty now. */
  async undo(sessionId: string): Promise<UndoResponse> {
    const response = await this.post(`/sessions/${sessionId}/undo`);
    return parseBody(response, UndoResponseSchema);
  }

  /** Href for downloading the session's current dataset as CSV. */
  exportUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${sessionId}/export`;
  }

  /** Fetches the sanitized CSV (used by tests; the page links exportUrl). */
  async exportCsv(sessionId: string): Promise<string> {
    const response = await this.fetchImpl(this.exportUrl(sessionId));
    if (!response.ok) {
      throw new ServiceError(response.status, "http-error", "export failed");
    }
    return response.text();
  }
}
