/**
 * The constellation graph.
 *
 * Facts and dimensions are nodes (green / red), fact-dimension links
 * are edges. A dimension can be expanded in place: its hierarchies
 * unfold into chains of parameter nodes with weak attributes hanging
 * off their parameter, coarsest level attached to the dimension node.
 *
 * DisplaySelection drives the incremental construction of a fresh
 * table on the graph: one fact, a measure form, then two dimension
 * picks with a hierarchy form each. Nodes that cannot participate in
 * the current selection are reported disabled so the view can gray
 * them out.
 */

import type { SchemaDoc } from "./client.js";
import { ops, type Measure } from "./ops.js";

export const FACT_COLOR = "#2e7d32";
export const DIMENSION_COLOR = "#c62828";
export const PARAMETER_COLOR = "#546e7a";
export const WEAK_COLOR = "#90a4ae";

export type NodeKind = "fact" | "dimension" | "parameter" | "weak";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  label: string;
  color: string;
  /** Owning dimension, for parameter and weak nodes. */
  dimension?: string;
  attribute?: string;
}

export interface GraphEdge {
  from: string;
  to: string;
}

export function factNodeId(name: string): string {
  return `fact:${name}`;
}

export function dimensionNodeId(name: string): string {
  return `dim:${name}`;
}

export function attributeNodeId(dimension: string, attribute: string): string {
  return `att:${dimension}.${attribute}`;
}

export class SchemaGraph {
  readonly expanded = new Set<string>();

  constructor(readonly schema: SchemaDoc) {}

  toggle(dimension: string): void {
    if (this.expanded.has(dimension)) {
      this.expanded.delete(dimension);
    } else {
      this.expanded.add(dimension);
    }
  }

  nodes(): GraphNode[] {
    const out: GraphNode[] = [];
    for (const f of this.schema.facts) {
      out.push({ id: factNodeId(f.name), kind: "fact", label: f.name, color: FACT_COLOR });
    }
    for (const d of this.schema.dimensions) {
      out.push({
        id: dimensionNodeId(d.name),
        kind: "dimension",
        label: d.name,
        color: DIMENSION_COLOR,
      });
      if (!this.expanded.has(d.name)) {
        continue;
      }
      const seen = new Set<string>();
      for (const h of d.hierarchies) {
        for (const p of h.parameters) {
          if (p === "All" || seen.has(p)) {
            continue;
          }
          seen.add(p);
          out.push({
            id: attributeNodeId(d.name, p),
            kind: "parameter",
            label: p,
            color: PARAMETER_COLOR,
            dimension: d.name,
            attribute: p,
          });
        }
        for (const weaks of Object.values(h.weak)) {
          for (const w of weaks) {
            if (seen.has(w)) {
              continue;
            }
            seen.add(w);
            out.push({
              id: attributeNodeId(d.name, w),
              kind: "weak",
              label: w,
              color: WEAK_COLOR,
              dimension: d.name,
              attribute: w,
            });
          }
        }
      }
    }
    return out;
  }

  edges(): GraphEdge[] {
    const out: GraphEdge[] = [];
    for (const f of this.schema.facts) {
      for (const d of f.dimensions) {
        out.push({ from: factNodeId(f.name), to: dimensionNodeId(d) });
      }
    }
    for (const d of this.schema.dimensions) {
      if (!this.expanded.has(d.name)) {
        continue;
      }
      const seenLinks = new Set<string>();
      const link = (from: string, to: string) => {
        const key = `${from}>${to}`;
        if (!seenLinks.has(key)) {
          seenLinks.add(key);
          out.push({ from, to });
        }
      };
      for (const h of d.hierarchies) {
        const path = h.parameters.filter((p) => p !== "All");
        let prev = dimensionNodeId(d.name);
        for (const p of path) {
          const node = attributeNodeId(d.name, p);
          link(prev, node);
          prev = node;
        }
        for (const [param, weaks] of Object.entries(h.weak)) {
          for (const w of weaks) {
            link(attributeNodeId(d.name, param), attributeNodeId(d.name, w));
          }
        }
      }
    }
    return out;
  }
}

// ---------------------------------------------------------------------------
// Incremental construction of a fresh table
// ---------------------------------------------------------------------------

export interface DimensionPick {
  dimension: string;
  hierarchy: string;
}

export class DisplaySelection {
  fact: string | null = null;
  measures: Measure[] = [];
  picks: DimensionPick[] = [];

  constructor(readonly schema: SchemaDoc) {}

  get active(): boolean {
    return this.fact !== null;
  }

  star(): string[] {
    const f = this.schema.facts.find((x) => x.name === this.fact);
    return f ? f.dimensions : [];
  }

  /**
   * Node ids that cannot be picked right now. Dimensions are only
   * selectable once a fact fixed the star; a second fact, an off-star
   * dimension, an already-picked dimension, and anything past the
   * second pick are all out.
   */
  disabled(graph: SchemaGraph): Set<string> {
    const out = new Set<string>();
    if (this.fact === null) {
      for (const d of this.schema.dimensions) {
        out.add(dimensionNodeId(d.name));
      }
      return out;
    }
    for (const f of this.schema.facts) {
      if (f.name !== this.fact) {
        out.add(factNodeId(f.name));
      }
    }
    const star = this.star();
    const picked = new Set(this.picks.map((p) => p.dimension));
    for (const d of this.schema.dimensions) {
      if (!star.includes(d.name) || picked.has(d.name) || this.picks.length >= 2) {
        out.add(dimensionNodeId(d.name));
      }
    }
    return out;
  }

  selectable(graph: SchemaGraph, nodeId: string): boolean {
    return !this.disabled(graph).has(nodeId);
  }

  pickFact(name: string, measures: Measure[]): void {
    if (this.fact !== null) {
      throw new Error("a fact is already selected");
    }
    if (!this.schema.facts.some((f) => f.name === name)) {
      throw new Error(`no fact named ${name}`);
    }
    if (measures.length === 0) {
      throw new Error("pick at least one measure");
    }
    this.fact = name;
    this.measures = measures;
  }

  pickDimension(name: string, hierarchy: string): void {
    if (this.fact === null) {
      throw new Error("select a fact first");
    }
    if (!this.star().includes(name)) {
      throw new Error(`${name} is not starred with ${this.fact}`);
    }
    if (this.picks.some((p) => p.dimension === name)) {
      throw new Error(`${name} is already picked`);
    }
    if (this.picks.length >= 2) {
      throw new Error("both axes are picked");
    }
    const dim = this.schema.dimensions.find((d) => d.name === name);
    if (!dim || !dim.hierarchies.some((h) => h.name === hierarchy)) {
      throw new Error(`${name} has no hierarchy ${hierarchy}`);
    }
    this.picks.push({ dimension: name, hierarchy });
  }

  ready(): boolean {
    return this.fact !== null && this.measures.length > 0 && this.picks.length === 2;
  }

  /** First pick lands on the line axis, second on the column axis. */
  toStatement(): string {
    if (!this.ready()) {
      throw new Error("selection is incomplete");
    }
    const [line, col] = this.picks;
    return ops.display(
      this.schema.constellation,
      this.fact as string,
      this.measures,
      line.dimension,
      line.hierarchy,
      col.dimension,
      col.hierarchy,
    );
  }

  reset(): void {
    this.fact = null;
    this.measures = [];
    this.picks = [];
  }
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

export interface Point {
  x: number;
  y: number;
}

/**
 * Small deterministic force layout: nodes start on a circle in id
 * order, then pairwise repulsion and edge springs run a fixed number
 * of rounds. Plenty for constellation-sized graphs.
 */
export function layout(
  nodes: GraphNode[],
  edges: GraphEdge[],
  width: number,
  height: number,
  rounds = 200,
): Map<string, Point> {
  const pos = new Map<string, Point>();
  const cx = width / 2;
  const cy = height / 2;
  const r = Math.min(width, height) / 2 - 60;
  const ordered = [...nodes].sort((a, b) => a.id.localeCompare(b.id));
  ordered.forEach((n, i) => {
    const angle = (2 * Math.PI * i) / Math.max(ordered.length, 1);
    pos.set(n.id, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
  });

  const spring = 90;
  for (let round = 0; round < rounds; round++) {
    const force = new Map<string, Point>();
    for (const n of nodes) {
      force.set(n.id, { x: 0, y: 0 });
    }
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = pos.get(nodes[i].id) as Point;
        const b = pos.get(nodes[j].id) as Point;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const push = 2200 / d2;
        const fa = force.get(nodes[i].id) as Point;
        const fb = force.get(nodes[j].id) as Point;
        const d = Math.sqrt(d2);
        fa.x += (dx / d) * push;
        fa.y += (dy / d) * push;
        fb.x -= (dx / d) * push;
        fb.y -= (dy / d) * push;
      }
    }
    for (const e of edges) {
      const a = pos.get(e.from);
      const b = pos.get(e.to);
      if (!a || !b) {
        continue;
      }
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = (d - spring) * 0.02;
      const fa = force.get(e.from) as Point;
      const fb = force.get(e.to) as Point;
      fa.x += (dx / d) * pull;
      fa.y += (dy / d) * pull;
      fb.x -= (dx / d) * pull;
      fb.y -= (dy / d) * pull;
    }
    const cool = 1 - round / rounds;
    for (const n of nodes) {
      const p = pos.get(n.id) as Point;
      const f = force.get(n.id) as Point;
      p.x = Math.min(Math.max(p.x + f.x * cool, 40), width - 40);
      p.y = Math.min(Math.max(p.y + f.y * cool, 30), height - 30);
    }
  }
  return pos;
}

// ---------------------------------------------------------------------------
// SVG view
// ---------------------------------------------------------------------------

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphHandlers {
  /** Left click: pick during construction, contextual menu otherwise. */
  onNode(node: GraphNode, anchor: SVGElement): void;
  onToggleExpand(dimension: string): void;
}

export interface GraphViewState {
  disabled: Set<string>;
  selected: Set<string>;
}

export function renderGraph(
  container: HTMLElement,
  graph: SchemaGraph,
  state: GraphViewState,
  handlers: GraphHandlers,
): void {
  const nodes = graph.nodes();
  const edges = graph.edges();
  const width = 560;
  const height = 480;
  const pos = layout(nodes, edges, width, height);

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("data-role", "constellation-graph");

  for (const e of edges) {
    const a = pos.get(e.from) as Point;
    const b = pos.get(e.to) as Point;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke", "#b0bec5");
    svg.appendChild(line);
  }

  for (const n of nodes) {
    const p = pos.get(n.id) as Point;
    const g = document.createElementNS(SVG_NS, "g");
    g.setAttribute("data-node-id", n.id);
    g.setAttribute("data-node-kind", n.kind);
    const off = state.disabled.has(n.id);
    if (off) {
      g.setAttribute("data-disabled", "true");
    }
    if (state.selected.has(n.id)) {
      g.setAttribute("data-selected", "true");
    }

    const radius = n.kind === "fact" || n.kind === "dimension" ? 18 : 10;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(p.x));
    circle.setAttribute("cy", String(p.y));
    circle.setAttribute("r", String(radius));
    circle.setAttribute("fill", off ? "#cfd8dc" : n.color);
    circle.setAttribute("stroke", state.selected.has(n.id) ? "#ffab00" : "#37474f");
    circle.setAttribute("stroke-width", state.selected.has(n.id) ? "3" : "1");
    g.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(p.x));
    text.setAttribute("y", String(p.y + radius + 12));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("font-size", "11");
    text.textContent = n.label;
    g.appendChild(text);

    g.addEventListener("click", (ev) => {
      ev.stopPropagation();
      if (!off) {
        handlers.onNode(n, g);
      }
    });
    svg.appendChild(g);

    if (n.kind === "dimension") {
      // expander sits beside the node so a click on it never counts as a pick
      const toggle = document.createElementNS(SVG_NS, "text");
      toggle.setAttribute("x", String(p.x + radius + 6));
      toggle.setAttribute("y", String(p.y + 4));
      toggle.setAttribute("font-size", "13");
      toggle.setAttribute("cursor", "pointer");
      toggle.setAttribute("data-expand", n.label);
      toggle.textContent = graph.expanded.has(n.label) ? "−" : "+";
      toggle.addEventListener("click", (ev) => {
        ev.stopPropagation();
        handlers.onToggleExpand(n.label);
      });
      svg.appendChild(toggle);
    }
  }

  container.replaceChildren(svg);
}
