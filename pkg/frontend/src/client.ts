/**
 * HTTP client for the session service.
 *
 * Response shapes mirror the server's documents exactly (schema graph,
 * session state, grid document); nothing here interprets them.
 */

export interface AttributeDoc {
  name: string;
  kind: string;
}

export interface HierarchyDoc {
  name: string;
  /** Coarsest first, from All down to the dimension's identity. */
  parameters: string[];
  /** Parameter -> weak attributes attached at its level. */
  weak: Record<string, string[]>;
}

export interface DimensionDoc {
  name: string;
  attributes: AttributeDoc[];
  hierarchies: HierarchyDoc[];
}

export interface FactDoc {
  name: string;
  measures: AttributeDoc[];
  dimensions: string[];
}

export interface SchemaDoc {
  constellation: string;
  facts: FactDoc[];
  dimensions: DimensionDoc[];
}

export type HeaderKind = "value" | "measure" | "subtotal" | "all";

export interface HeaderNodeDoc {
  label: string;
  kind: HeaderKind;
  value: (string | number)[];
  fn?: string;
  children: HeaderNodeDoc[];
}

export interface HeaderTreeDoc {
  caption: string;
  layers: string[];
  nodes: HeaderNodeDoc[];
}

/** null = empty intersection; an array = a pushed attribute's distinct values. */
export type CellValue = number | null | (string | number)[] | (string | number)[][];

export interface CellDoc {
  values: CellValue[];
  pulled: CellValue[];
}

export interface GridDoc {
  kind: "grid";
  subject: { fact: string; measures: string[] };
  pulled: string[];
  restriction: string[];
  rows: HeaderTreeDoc;
  columns: HeaderTreeDoc;
  cells: CellDoc[][];
}

export interface TableResponse {
  name: string;
  table: GridDoc;
  rendered: string;
}

export interface AxisSummary {
  dimension: string;
  hierarchy: string;
  displayed: string[];
}

export interface TableSummary {
  fact: string;
  measures: string[];
  line: AxisSummary;
  column: AxisSummary;
}

export interface SessionState {
  id: string;
  ops: string[];
  tables: Record<string, TableSummary>;
}

export interface ErrorDoc {
  type: string;
  message: string;
  span?: [number, number];
  line?: number;
  col?: number;
  cause?: string;
}

/** A non-2xx answer, carrying the server's error document. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ErrorDoc,
  ) {
    super(`${detail.type}: ${detail.message}`);
    this.name = "ServiceError";
  }
}

async function unwrap<T>(res: Response): Promise<T> {
  if (res.ok) {
    return (await res.json()) as T;
  }
  let detail: ErrorDoc = { type: "HttpError", message: `${res.status} ${res.statusText}` };
  try {
    const body = await res.json();
    if (body && typeof body === "object" && "error" in body) {
      detail = (body as { error: ErrorDoc }).error;
    }
  } catch {
    // non-JSON body; keep the status line
  }
  throw new ServiceError(res.status, detail);
}

export class GolapClient {
  constructor(readonly base: string) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  schema(): Promise<SchemaDoc> {
    return fetch(this.url("/schema")).then((r) => unwrap<SchemaDoc>(r));
  }

  async openSession(): Promise<string> {
    const res = await fetch(this.url("/sessions"), { method: "POST" });
    const body = await unwrap<{ id: string }>(res);
    return body.id;
  }

  session(id: string): Promise<SessionState> {
    return fetch(this.url(`/sessions/${id}`)).then((r) => unwrap<SessionState>(r));
  }

  /** Run one query-language statement; rejected statements throw ServiceError. */
  async run(id: string, text: string): Promise<TableResponse> {
    const res = await fetch(this.url(`/sessions/${id}/ops`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return unwrap<TableResponse>(res);
  }

  async undo(id: string): Promise<SessionState> {
    const res = await fetch(this.url(`/sessions/${id}/undo`), { method: "POST" });
    return unwrap<SessionState>(res);
  }

  table(id: string, name: string): Promise<TableResponse> {
    return fetch(this.url(`/sessions/${id}/tm/${name}`)).then((r) => unwrap<TableResponse>(r));
  }
}
