/**
 * Grid document rendering.
 *
 * The server's grid document becomes an HTML table: column header
 * layers on top, row header layers down the left, one data cell per
 * (row leaf, column leaf). Header cells carry data attributes and a
 * click handler so the app can hang contextual menus off them.
 */

import type { CellValue, GridDoc, HeaderNodeDoc, HeaderTreeDoc, SchemaDoc } from "./client.js";

export function leafCount(node: HeaderNodeDoc): number {
  if (node.children.length === 0) {
    return 1;
  }
  return node.children.reduce((acc, ch) => acc + leafCount(ch), 0);
}

export function leafPaths(tree: HeaderTreeDoc): HeaderNodeDoc[][] {
  const out: HeaderNodeDoc[][] = [];
  const walk = (node: HeaderNodeDoc, path: HeaderNodeDoc[]) => {
    const next = [...path, node];
    if (node.children.length === 0) {
      out.push(next);
    } else {
      for (const ch of node.children) {
        walk(ch, next);
      }
    }
  };
  for (const n of tree.nodes) {
    walk(n, []);
  }
  return out;
}

/** Distinct leading values of the value nodes at one depth, display order. */
export function layerValues(tree: HeaderTreeDoc, layerIndex: number): (string | number)[] {
  const out: (string | number)[] = [];
  const seen = new Set<string>();
  const walk = (node: HeaderNodeDoc, depth: number) => {
    if (depth === layerIndex) {
      if (node.kind === "value" && node.value.length > 0) {
        const v = node.value[0];
        const key = typeof v + ":" + String(v);
        if (!seen.has(key)) {
          seen.add(key);
          out.push(v);
        }
      }
      return;
    }
    for (const ch of node.children) {
      walk(ch, depth + 1);
    }
  };
  for (const n of tree.nodes) {
    walk(n, 0);
  }
  return out;
}

function cellValueText(v: CellValue): string {
  if (v === null) {
    return "";
  }
  if (Array.isArray(v)) {
    return "{" + v.map((x) => (Array.isArray(x) ? x.join(" ") : String(x))).join(", ") + "}";
  }
  return String(v);
}

export function cellText(values: CellValue[], pulled: CellValue[]): string {
  const main = values.map(cellValueText);
  const body = main.length > 1 ? `(${main.join(", ")})` : (main[0] ?? "");
  if (pulled.length === 0) {
    return body;
  }
  return body + " | " + pulled.map(cellValueText).join(", ");
}

// ---------------------------------------------------------------------------
// What a header click refers to
// ---------------------------------------------------------------------------

export type Axis = "line" | "column";

export type HeaderTarget =
  | { type: "axis"; axis: Axis }
  | { type: "layer"; axis: Axis; layerIndex: number; label: string }
  | { type: "node"; axis: Axis; layerIndex: number; node: HeaderNodeDoc }
  | { type: "subject" };

export interface GridHandlers {
  onHeader(target: HeaderTarget, anchor: HTMLElement): void;
  onClearRestriction(): void;
}

// ---------------------------------------------------------------------------
// Layer resolution: uppercase grid labels back to declared names
// ---------------------------------------------------------------------------

export interface LayerInfo {
  kind: "parameter" | "weakOnly" | "nested" | "measure";
  /** Owning dimension (the axis dimension, or the nested one). */
  dimension?: string;
  /** Leading declared-case attribute the layer groups by. */
  attribute?: string;
  fn?: string;
  measure?: string;
}

function declaredAttribute(schema: SchemaDoc, dimension: string, upper: string): string {
  const d = schema.dimensions.find((x) => x.name === dimension);
  const att = d?.attributes.find((a) => a.name.toUpperCase() === upper);
  if (!att) {
    throw new Error(`no attribute ${upper} on ${dimension}`);
  }
  return att.name;
}

/**
 * Grid layer labels come uppercased ("CONTINENT", "IDSOC (RAISONSOCIALE)",
 * "DATES.ANNEE", "(RAISONSOCIALE)", "SUM(MONTANT)"); operations need the
 * declared spelling, recovered from the schema.
 */
export function resolveLayer(
  label: string,
  axisDimension: string,
  fact: string,
  schema: SchemaDoc,
): LayerInfo {
  const measure = /^(SUM|AVG|MIN|MAX|COUNT)\((.+)\)$/.exec(label);
  if (measure) {
    const f = schema.facts.find((x) => x.name === fact);
    const m = f?.measures.find((x) => x.name.toUpperCase() === measure[2]);
    if (!m) {
      throw new Error(`no measure ${measure[2]} on ${fact}`);
    }
    return { kind: "measure", fn: measure[1], measure: m.name };
  }
  if (label.includes(".")) {
    const [dimUpper, attUpper] = label.split(".", 2);
    const dim = schema.dimensions.find((d) => d.name.toUpperCase() === dimUpper);
    if (!dim) {
      throw new Error(`no dimension ${dimUpper}`);
    }
    return {
      kind: "nested",
      dimension: dim.name,
      attribute: declaredAttribute(schema, dim.name, attUpper),
    };
  }
  if (label.startsWith("(")) {
    const first = label.slice(1, -1).split(",")[0].trim();
    return {
      kind: "weakOnly",
      dimension: axisDimension,
      attribute: declaredAttribute(schema, axisDimension, first),
    };
  }
  const head = label.split(" (")[0].trim();
  return {
    kind: "parameter",
    dimension: axisDimension,
    attribute: declaredAttribute(schema, axisDimension, head),
  };
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

export function renderGrid(doc: GridDoc, handlers: GridHandlers): HTMLElement {
  const wrap = document.createElement("div");
  wrap.setAttribute("data-role", "grid");

  const table = document.createElement("table");
  table.className = "tm-grid";
  const rowLayers = doc.rows.layers.length;
  const corner = Math.max(rowLayers, 1);
  const colPaths = leafPaths(doc.columns);
  const rowPaths = leafPaths(doc.rows);

  const header = (
    text: string,
    target: HeaderTarget | null,
    attrs: Record<string, string> = {},
  ): HTMLTableCellElement => {
    const th = document.createElement("th");
    th.textContent = text;
    for (const [k, v] of Object.entries(attrs)) {
      th.setAttribute(k, v);
    }
    if (target) {
      th.addEventListener("click", (ev) => {
        ev.stopPropagation();
        handlers.onHeader(target, th);
      });
    }
    return th;
  };

  const thead = document.createElement("thead");

  const capRow = document.createElement("tr");
  const subject = header(
    `${doc.subject.fact}: ${doc.subject.measures.join(", ")}`,
    { type: "subject" },
    { "data-role": "subject", colspan: String(corner) },
  );
  capRow.appendChild(subject);
  capRow.appendChild(
    header(
      doc.columns.caption,
      { type: "axis", axis: "column" },
      {
        "data-role": "axis-caption",
        "data-axis": "column",
        colspan: String(Math.max(colPaths.length, 1)),
      },
    ),
  );
  thead.appendChild(capRow);

  for (let li = 0; li < doc.columns.layers.length; li++) {
    const tr = document.createElement("tr");
    tr.appendChild(
      header(
        doc.columns.layers[li],
        { type: "layer", axis: "column", layerIndex: li, label: doc.columns.layers[li] },
        {
          "data-role": "layer",
          "data-axis": "column",
          "data-layer-index": String(li),
          colspan: String(corner),
        },
      ),
    );
    // walk the tree at this depth; each node spans its leaves
    const emit = (node: HeaderNodeDoc, depth: number) => {
      if (depth === li) {
        tr.appendChild(
          header(
            node.label,
            { type: "node", axis: "column", layerIndex: li, node },
            {
              "data-role": "node",
              "data-axis": "column",
              "data-kind": node.kind,
              "data-layer-index": String(li),
              colspan: String(leafCount(node)),
            },
          ),
        );
        return;
      }
      for (const ch of node.children) {
        emit(ch, depth + 1);
      }
    };
    for (const n of doc.columns.nodes) {
      emit(n, 0);
    }
    thead.appendChild(tr);
  }
  table.appendChild(thead);

  const tbody = document.createElement("tbody");

  const rowCapRow = document.createElement("tr");
  rowCapRow.appendChild(
    header(
      doc.rows.caption,
      { type: "axis", axis: "line" },
      { "data-role": "axis-caption", "data-axis": "line", colspan: String(corner) },
    ),
  );
  tbody.appendChild(rowCapRow);

  if (rowLayers > 0) {
    const tr = document.createElement("tr");
    for (let li = 0; li < rowLayers; li++) {
      tr.appendChild(
        header(
          doc.rows.layers[li],
          { type: "layer", axis: "line", layerIndex: li, label: doc.rows.layers[li] },
          { "data-role": "layer", "data-axis": "line", "data-layer-index": String(li) },
        ),
      );
    }
    tbody.appendChild(tr);
  }

  let prevPath: HeaderNodeDoc[] = [];
  for (let ri = 0; ri < rowPaths.length; ri++) {
    const tr = document.createElement("tr");
    const path = rowPaths[ri];
    for (let li = 0; li < path.length; li++) {
      if (li < prevPath.length && prevPath[li] === path[li]) {
        continue; // covered by the rowspan opened earlier
      }
      const node = path[li];
      const th = header(
        node.label,
        { type: "node", axis: "line", layerIndex: li, node },
        {
          "data-role": "node",
          "data-axis": "line",
          "data-kind": node.kind,
          "data-layer-index": String(li),
        },
      );
      th.rowSpan = leafCount(node);
      tr.appendChild(th);
    }
    prevPath = path;
    const cells = doc.cells[ri] ?? [];
    for (let ci = 0; ci < colPaths.length; ci++) {
      const td = document.createElement("td");
      const cell = cells[ci];
      td.textContent = cell ? cellText(cell.values, cell.pulled) : "";
      td.setAttribute("data-cell", `${ri},${ci}`);
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  wrap.appendChild(table);

  if (doc.restriction.length > 0) {
    const footer = document.createElement("div");
    footer.setAttribute("data-role", "restriction");
    for (const line of doc.restriction) {
      const p = document.createElement("div");
      p.textContent = line;
      footer.appendChild(p);
    }
    const clear = document.createElement("button");
    clear.textContent = "Clear restriction";
    clear.setAttribute("data-op", "UNSELECT");
    clear.addEventListener("click", () => handlers.onClearRestriction());
    footer.appendChild(clear);
    wrap.appendChild(footer);
  }

  return wrap;
}
