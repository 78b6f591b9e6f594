/**
 * The application shell.
 *
 * Left panel: the constellation graph (table construction, contextual
 * dimension operations). Right panel: the current table with header
 * menus, a toolbar and the session history. All truth lives on the
 * server; every action round-trips one statement and re-renders from
 * the response, so a failed statement changes nothing here either.
 */

import {
  GolapClient,
  type AxisSummary,
  type SchemaDoc,
  type SessionState,
  type TableResponse,
  type TableSummary,
} from "./client.js";
import {
  DisplaySelection,
  SchemaGraph,
  dimensionNodeId,
  factNodeId,
  renderGraph,
  type GraphNode,
} from "./graph.js";
import {
  layerValues,
  renderGrid,
  resolveLayer,
  type HeaderTarget,
  type LayerInfo,
} from "./grid.js";
import { closeMenu, openMenu, type FormField, type MenuItem } from "./menus.js";
import {
  AGGREGATE_FNS,
  ops,
  parseMeasureLabel,
  type AggregateFn,
  type LevelSelector,
  type Measure,
} from "./ops.js";

/**
 * Graduation level of an attribute on one hierarchy: its position
 * among the parameters, a weak attribute counting at its parameter's
 * level. null when the attribute is not on the path at all.
 */
export function hierarchyLevel(
  schema: SchemaDoc,
  dimension: string,
  hierarchy: string,
  attribute: string,
): number | null {
  const d = schema.dimensions.find((x) => x.name === dimension);
  const h = d?.hierarchies.find((x) => x.name === hierarchy);
  if (!h) {
    return null;
  }
  const i = h.parameters.indexOf(attribute);
  if (i >= 0) {
    return i;
  }
  for (const [param, weaks] of Object.entries(h.weak)) {
    if (weaks.includes(attribute)) {
      return h.parameters.indexOf(param);
    }
  }
  return null;
}

/** Finest displayed graduation of an axis; 0 when it sits at All. */
export function finestDisplayedLevel(schema: SchemaDoc, fact: string, axis: AxisSummary): number {
  let finest = 0;
  for (const label of axis.displayed) {
    let info: LayerInfo;
    try {
      info = resolveLayer(label, axis.dimension, fact, schema);
    } catch {
      continue;
    }
    if (info.kind !== "parameter" && info.kind !== "weakOnly") {
      continue;
    }
    const level = hierarchyLevel(schema, axis.dimension, axis.hierarchy, info.attribute as string);
    if (level !== null && level > finest) {
      finest = level;
    }
  }
  return finest;
}

function measureFields(measures: { name: string }[]): FormField[] {
  return [
    { name: "fn", label: "function", kind: "select", options: [...AGGREGATE_FNS], value: "SUM" },
    { name: "measure", label: "measure", kind: "select", options: measures.map((m) => m.name) },
    {
      name: "more",
      label: "more",
      kind: "text",
      placeholder: "e.g. AVG(Montant), SUM(Quantite)",
    },
  ];
}

function parseMeasureForm(values: Record<string, string>): Measure[] {
  const out: Measure[] = [{ fn: values.fn as AggregateFn, measure: values.measure }];
  for (const part of (values.more ?? "").split(",")) {
    const text = part.trim();
    if (text) {
      out.push(parseMeasureLabel(text));
    }
  }
  return out;
}

export class App {
  schema!: SchemaDoc;
  graph!: SchemaGraph;
  selection!: DisplaySelection;
  sessionId = "";
  state: SessionState = { id: "", ops: [], tables: {} };
  current: TableResponse | null = null;

  private graphPanel!: HTMLElement;
  private gridPanel!: HTMLElement;
  private toolbar!: HTMLElement;
  private historyPanel!: HTMLElement;
  private statusBar!: HTMLElement;
  private inflight: Promise<void> = Promise.resolve();

  constructor(readonly client: GolapClient) {}

  async boot(root: HTMLElement): Promise<void> {
    this.schema = await this.client.schema();
    this.graph = new SchemaGraph(this.schema);
    this.selection = new DisplaySelection(this.schema);
    this.sessionId = await this.client.openSession();
    this.state = await this.client.session(this.sessionId);

    root.replaceChildren();
    const shell = document.createElement("div");
    shell.className = "golap";
    this.graphPanel = document.createElement("div");
    this.graphPanel.setAttribute("data-role", "graph-panel");
    const tm = document.createElement("div");
    tm.setAttribute("data-role", "tm-panel");
    this.toolbar = document.createElement("div");
    this.toolbar.setAttribute("data-role", "toolbar");
    this.gridPanel = document.createElement("div");
    this.gridPanel.setAttribute("data-role", "grid-panel");
    this.statusBar = document.createElement("div");
    this.statusBar.setAttribute("data-role", "status");
    this.historyPanel = document.createElement("ol");
    this.historyPanel.setAttribute("data-role", "history");
    tm.append(this.toolbar, this.gridPanel, this.statusBar, this.historyPanel);
    shell.append(this.graphPanel, tm);
    root.appendChild(shell);
    this.renderAll();
  }

  // ------------------------------------------------------------------
  // Round-trips. Actions queue onto one chain so tests can await
  // quiescence with settled().
  // ------------------------------------------------------------------

  private track(work: Promise<void>): void {
    this.inflight = this.inflight.then(() => work).catch(() => undefined);
  }

  async settled(): Promise<void> {
    let last: Promise<void>;
    do {
      last = this.inflight;
      await last;
    } while (last !== this.inflight);
  }

  private setStatus(text: string, isError = false): void {
    this.statusBar.textContent = isError ? `error: ${text}` : text;
    this.statusBar.className = isError ? "error" : "";
  }

  private async applyNow(text: string): Promise<void> {
    try {
      const res = await this.client.run(this.sessionId, text);
      this.current = res;
      this.state = await this.client.session(this.sessionId);
      this.setStatus(`${res.name} = ${text}`);
    } catch (exc) {
      // rejected statements are not logged server-side; keep our state too
      this.setStatus(exc instanceof Error ? exc.message : String(exc), true);
    }
    this.renderAll();
  }

  /** Send one statement; every affordance below funnels through here. */
  apply(text: string): void {
    this.track(this.applyNow(text));
  }

  undo(): void {
    this.track(
      (async () => {
        try {
          this.state = await this.client.undo(this.sessionId);
          const names = Object.keys(this.state.tables);
          const keep =
            this.current && this.state.tables[this.current.name]
              ? this.current.name
              : names[names.length - 1];
          this.current = keep ? await this.client.table(this.sessionId, keep) : null;
          this.setStatus("undid the last operation");
        } catch (exc) {
          this.setStatus(exc instanceof Error ? exc.message : String(exc), true);
        }
        this.renderAll();
      })(),
    );
  }

  showTable(name: string): void {
    this.track(
      (async () => {
        try {
          this.current = await this.client.table(this.sessionId, name);
          this.setStatus(`showing ${name}`);
        } catch (exc) {
          this.setStatus(exc instanceof Error ? exc.message : String(exc), true);
        }
        this.renderAll();
      })(),
    );
  }

  private cur(): string | null {
    if (!this.current) {
      this.setStatus("no table yet; build one on the graph", true);
      return null;
    }
    return this.current.name;
  }

  private summary(): TableSummary | null {
    return this.current ? (this.state.tables[this.current.name] ?? null) : null;
  }

  // ------------------------------------------------------------------
  // Affordances. One per operator; the DOM controls call exactly these.
  // ------------------------------------------------------------------

  validateDisplay(): void {
    if (!this.selection.ready()) {
      this.setStatus("pick a fact, measures and two dimensions first", true);
      return;
    }
    const text = this.selection.toStatement();
    this.selection.reset();
    this.apply(text);
  }

  drill(dimension: string, sel: LevelSelector): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.drilldown(t, dimension, sel));
    }
  }

  rollupTo(dimension: string, attribute: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.rollup(t, dimension, attribute));
    }
  }

  rotate(dimOld: string, dimNew: string, hierarchy: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.drotate(t, dimOld, dimNew, hierarchy));
    }
  }

  nestInto(dimension: string, attribute: string, nestedDim: string, nestedAtt: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.nest(t, dimension, attribute, nestedDim, nestedAtt));
    }
  }

  restrict(qualifier: string, attribute: string, cmp: string, value: string): void {
    const t = this.cur();
    if (!t) {
      return;
    }
    const kind = this.attributeKind(qualifier, attribute);
    const typed = kind === "integer" || kind === "decimal" ? Number(value) : value;
    this.apply(
      ops.select(t, [[{ qualifier, attribute, cmp: cmp as never, value: typed }]]),
    );
  }

  switchValues(dimension: string, attribute: string, v1: string | number, v2: string | number): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.switchValues(t, dimension, attribute, v1, v2));
    }
  }

  subtotal(dimension: string, fn: AggregateFn, attribute: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.agregate(t, dimension, fn, attribute));
    }
  }

  clearSubtotals(): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.unagregate(t));
    }
  }

  pushAttribute(dimension: string, attribute: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.push(t, dimension, attribute));
    }
  }

  pullMeasure(m: Measure, dimension: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.pull(t, m, dimension));
    }
  }

  addMeasure(m: Measure): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.addm(t, m));
    }
  }

  removeMeasure(m: Measure): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.delm(t, m));
    }
  }

  changeHierarchy(dimension: string, hierarchy: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.hrotate(t, dimension, hierarchy));
    }
  }

  plotLevel(dimension: string, sel: LevelSelector): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.plot(t, dimension, sel));
    }
  }

  orderBy(dimension: string, attribute: string, direction: "asc" | "dsc"): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.order(t, dimension, attribute, direction));
    }
  }

  refact(fact: string, measures: Measure[]): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.frotate(t, fact, measures));
    }
  }

  clearRestriction(): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.unselect(t));
    }
  }

  replayOnto(source: string, object: string): void {
    const t = this.cur();
    if (t) {
      this.apply(ops.history(source, object, t));
    }
  }

  // ------------------------------------------------------------------
  // Graph interaction
  // ------------------------------------------------------------------

  private attributeKind(qualifier: string, attribute: string): string {
    const d = this.schema.dimensions.find((x) => x.name === qualifier);
    if (d) {
      return d.attributes.find((a) => a.name === attribute)?.kind ?? "text";
    }
    const f = this.schema.facts.find((x) => x.name === qualifier);
    return f?.measures.find((m) => m.name === attribute)?.kind ?? "text";
  }

  /**
   * Grayed nodes. During construction the selection decides; outside
   * it, a node is live only if the last server state gives it an
   * action: any fact can start a table, dimensions must be in the
   * current star, parameters and weak attributes must sit on the
   * current hierarchy of an axis dimension.
   */
  disabledNodes(): Set<string> {
    if (this.selection.active) {
      return this.selection.disabled(this.graph);
    }
    const out = new Set<string>();
    const cur = this.summary();
    const star = cur ? (this.schema.facts.find((f) => f.name === cur.fact)?.dimensions ?? []) : [];
    for (const n of this.graph.nodes()) {
      if (n.kind === "fact") {
        continue;
      }
      if (!cur) {
        out.add(n.id);
        continue;
      }
      if (n.kind === "dimension") {
        if (!star.includes(n.label)) {
          out.add(n.id);
        }
        continue;
      }
      const axis =
        n.dimension === cur.line.dimension
          ? cur.line
          : n.dimension === cur.column.dimension
            ? cur.column
            : null;
      if (
        !axis ||
        hierarchyLevel(this.schema, n.dimension as string, axis.hierarchy, n.attribute as string) ===
          null
      ) {
        out.add(n.id);
      }
    }
    return out;
  }

  private onNode(node: GraphNode, anchor: SVGElement): void {
    const el = anchor as unknown as HTMLElement;
    if (node.kind === "fact") {
      this.factMenu(node.label, el);
    } else if (node.kind === "dimension") {
      if (this.selection.active) {
        this.dimensionPickMenu(node.label, el);
      } else {
        this.dimensionMenu(node.label, el);
      }
    } else {
      this.levelMenu(node, el);
    }
  }

  private factMenu(fact: string, anchor: HTMLElement): void {
    const f = this.schema.facts.find((x) => x.name === fact);
    if (!f) {
      return;
    }
    const items: MenuItem[] = [];
    if (!this.selection.active) {
      items.push({
        op: "DISPLAY",
        label: `Start a table on ${fact}`,
        fields: measureFields(f.measures),
        run: (v) => {
          try {
            this.selection.pickFact(fact, parseMeasureForm(v));
            this.setStatus(`analysing ${fact}; now pick two dimensions`);
          } catch (exc) {
            this.setStatus(exc instanceof Error ? exc.message : String(exc), true);
          }
          this.renderAll();
        },
      });
    }
    const cur = this.summary();
    const sharesAxes =
      cur &&
      f.dimensions.includes(cur.line.dimension) &&
      f.dimensions.includes(cur.column.dimension);
    if (sharesAxes) {
      items.push({
        op: "FROTATE",
        label: `Re-aim the table at ${fact}`,
        fields: measureFields(f.measures),
        run: (v) => this.refact(fact, parseMeasureForm(v)),
      });
    }
    openMenu(anchor, items);
  }

  private dimensionPickMenu(dimension: string, anchor: HTMLElement): void {
    const d = this.schema.dimensions.find((x) => x.name === dimension);
    if (!d) {
      return;
    }
    openMenu(anchor, [
      {
        op: "DISPLAY",
        label: `Use ${dimension} as the ${this.selection.picks.length === 0 ? "line" : "column"} axis`,
        fields: [
          {
            name: "hierarchy",
            label: "hierarchy",
            kind: "select",
            options: d.hierarchies.map((h) => h.name),
          },
        ],
        run: (v) => {
          try {
            this.selection.pickDimension(dimension, v.hierarchy);
            this.setStatus(
              this.selection.ready()
                ? "selection complete; validate to build the table"
                : `${dimension} picked; one more dimension`,
            );
          } catch (exc) {
            this.setStatus(exc instanceof Error ? exc.message : String(exc), true);
          }
          this.renderAll();
        },
      },
    ]);
  }

  /** Contextual operations on a starred dimension, current table set. */
  private dimensionMenu(dimension: string, anchor: HTMLElement): void {
    const cur = this.summary();
    const d = this.schema.dimensions.find((x) => x.name === dimension);
    if (!cur || !d || !this.current) {
      return;
    }
    const items: MenuItem[] = [];
    const attNames = d.attributes.filter((a) => a.name !== "All").map((a) => a.name);

    items.push({
      op: "SELECT",
      label: `Restrict by ${dimension}...`,
      fields: [
        { name: "attribute", label: "attribute", kind: "select", options: attNames },
        {
          name: "cmp",
          label: "compare",
          kind: "select",
          options: ["=", "!=", "<", "<=", ">", ">="],
          value: "=",
        },
        { name: "value", label: "value", kind: "text" },
      ],
      run: (v) => this.restrict(dimension, v.attribute, v.cmp, v.value),
    });

    const onAxis = dimension === cur.line.dimension || dimension === cur.column.dimension;
    if (!onAxis) {
      for (const side of ["line", "column"] as const) {
        const old = cur[side].dimension;
        items.push({
          op: "DROTATE",
          label: `Show on the ${side} axis (replacing ${old})`,
          fields: [
            {
              name: "hierarchy",
              label: "hierarchy",
              kind: "select",
              options: d.hierarchies.map((h) => h.name),
            },
          ],
          run: (v) => this.rotate(old, dimension, v.hierarchy),
        });
      }
    }

    items.push({
      op: "PUSH",
      label: "Push an attribute into the cells...",
      fields: [{ name: "attribute", label: "attribute", kind: "select", options: attNames }],
      run: (v) => this.pushAttribute(dimension, v.attribute),
    });

    // splice one of this dimension's attributes into a displayed axis level
    const spots: string[] = [];
    for (const side of ["line", "column"] as const) {
      const axis = cur[side];
      for (const label of axis.displayed) {
        try {
          const info = resolveLayer(label, axis.dimension, cur.fact, this.schema);
          if (info.kind === "parameter" && axis.dimension !== dimension) {
            spots.push(`${axis.dimension}.${info.attribute}`);
          }
        } catch {
          // pulled measure labels do not take nests
        }
      }
    }
    if (spots.length > 0) {
      items.push({
        op: "NEST",
        label: "Nest an attribute after an axis level...",
        fields: [
          { name: "after", label: "after", kind: "select", options: spots },
          { name: "attribute", label: "attribute", kind: "select", options: attNames },
        ],
        run: (v) => {
          const [dim, att] = v.after.split(".", 2);
          this.nestInto(dim, att, dimension, v.attribute);
        },
      });
    }

    openMenu(anchor, items);
  }

  /** A parameter or weak attribute node: finer graduations of an axis. */
  private levelMenu(node: GraphNode, anchor: HTMLElement): void {
    const cur = this.summary();
    if (!cur || !node.dimension || !node.attribute) {
      return;
    }
    const axis =
      node.dimension === cur.line.dimension
        ? cur.line
        : node.dimension === cur.column.dimension
          ? cur.column
          : null;
    if (!axis) {
      return;
    }
    const level = hierarchyLevel(this.schema, node.dimension, axis.hierarchy, node.attribute);
    if (level === null) {
      return;
    }
    const selector: LevelSelector =
      node.kind === "weak"
        ? { weakOnly: [node.attribute], of: this.weakOwner(node.dimension, axis.hierarchy, node.attribute) }
        : node.attribute;
    const items: MenuItem[] = [];
    if (level > finestDisplayedLevel(this.schema, cur.fact, axis)) {
      items.push({
        op: "DRILLDOWN",
        label: `Drill down to ${node.label}`,
        run: () => this.drill(node.dimension as string, selector),
      });
    }
    items.push({
      op: "PLOT",
      label: `Show exactly ${node.label}`,
      run: () => this.plotLevel(node.dimension as string, selector),
    });
    openMenu(anchor, items);
  }

  private weakOwner(dimension: string, hierarchy: string, weakAtt: string): string {
    const d = this.schema.dimensions.find((x) => x.name === dimension);
    const h = d?.hierarchies.find((x) => x.name === hierarchy);
    for (const [param, weaks] of Object.entries(h?.weak ?? {})) {
      if (weaks.includes(weakAtt)) {
        return param;
      }
    }
    return weakAtt;
  }

  // ------------------------------------------------------------------
  // Grid header menus
  // ------------------------------------------------------------------

  private onHeader(target: HeaderTarget, anchor: HTMLElement): void {
    if (target.type === "subject") {
      this.subjectMenu(anchor);
    } else if (target.type === "axis") {
      this.axisMenu(target.axis, anchor);
    } else {
      const layerIndex = target.layerIndex;
      const label =
        target.type === "layer"
          ? target.label
          : (this.axisOf(target.axis)?.displayed[layerIndex] ??
            this.treeOf(target.axis).layers[layerIndex]);
      this.layerMenu(target.axis, layerIndex, label, anchor);
    }
  }

  private axisOf(axis: "line" | "column"): AxisSummary | null {
    const cur = this.summary();
    return cur ? cur[axis] : null;
  }

  private treeOf(axis: "line" | "column") {
    const doc = (this.current as TableResponse).table;
    return axis === "line" ? doc.rows : doc.columns;
  }

  private subjectMenu(anchor: HTMLElement): void {
    const cur = this.summary();
    if (!cur || !this.current) {
      return;
    }
    const f = this.schema.facts.find((x) => x.name === cur.fact);
    const subject = this.current.table.subject.measures;
    const items: MenuItem[] = [
      {
        op: "ADDM",
        label: "Add a measure...",
        fields: [
          { name: "fn", label: "function", kind: "select", options: [...AGGREGATE_FNS], value: "SUM" },
          {
            name: "measure",
            label: "measure",
            kind: "select",
            options: (f?.measures ?? []).map((m) => m.name),
          },
        ],
        run: (v) => this.addMeasure({ fn: v.fn as AggregateFn, measure: v.measure }),
      },
    ];
    if (subject.length >= 2) {
      items.push({
        op: "DELM",
        label: "Remove a measure...",
        fields: [{ name: "entry", label: "entry", kind: "select", options: [...subject] }],
        run: (v) => this.removeMeasure(parseMeasureLabel(v.entry)),
      });
      items.push({
        op: "PULL",
        label: "Pull a measure onto an axis...",
        fields: [
          { name: "entry", label: "measure", kind: "select", options: [...subject] },
          {
            name: "axis",
            label: "axis",
            kind: "select",
            options: [cur.line.dimension, cur.column.dimension],
          },
        ],
        run: (v) => this.pullMeasure(parseMeasureLabel(v.entry), v.axis),
      });
    }
    const sources = Object.keys(this.state.tables).filter((n) => n !== this.current?.name);
    if (sources.length > 0) {
      const star = this.schema.facts.find((x) => x.name === cur.fact)?.dimensions ?? [];
      items.push({
        op: "HISTORY",
        label: "Replay another table's operations here...",
        fields: [
          { name: "source", label: "from table", kind: "select", options: sources },
          {
            name: "object",
            label: "touching",
            kind: "select",
            options: [cur.fact, ...star],
          },
        ],
        run: (v) => this.replayOnto(v.source, v.object),
      });
    }
    openMenu(anchor, items);
  }

  private axisMenu(axis: "line" | "column", anchor: HTMLElement): void {
    const cur = this.summary();
    const a = this.axisOf(axis);
    if (!cur || !a) {
      return;
    }
    const d = this.schema.dimensions.find((x) => x.name === a.dimension);
    const items: MenuItem[] = [];
    const others = (d?.hierarchies ?? []).map((h) => h.name).filter((h) => h !== a.hierarchy);
    if (others.length > 0) {
      items.push({
        op: "HROTATE",
        label: "Change hierarchy...",
        fields: [{ name: "hierarchy", label: "hierarchy", kind: "select", options: others }],
        run: (v) => this.changeHierarchy(a.dimension, v.hierarchy),
      });
    }
    const star = this.schema.facts.find((x) => x.name === cur.fact)?.dimensions ?? [];
    const taken = new Set([cur.line.dimension, cur.column.dimension]);
    const targets: string[] = [];
    for (const dim of star) {
      if (taken.has(dim)) {
        continue;
      }
      const dd = this.schema.dimensions.find((x) => x.name === dim);
      for (const h of dd?.hierarchies ?? []) {
        targets.push(`${dim}:${h.name}`);
      }
    }
    if (targets.length > 0) {
      items.push({
        op: "DROTATE",
        label: "Replace this axis...",
        fields: [{ name: "target", label: "with", kind: "select", options: targets }],
        run: (v) => {
          const [dim, hier] = v.target.split(":", 2);
          this.rotate(a.dimension, dim, hier);
        },
      });
    }
    openMenu(anchor, items);
  }

  private layerMenu(
    axis: "line" | "column",
    layerIndex: number,
    label: string,
    anchor: HTMLElement,
  ): void {
    const cur = this.summary();
    const a = this.axisOf(axis);
    if (!cur || !a || !this.current) {
      return;
    }
    let info: LayerInfo;
    try {
      info = resolveLayer(label, a.dimension, cur.fact, this.schema);
    } catch {
      return;
    }
    if (info.kind === "measure" || info.kind === "nested" || info.dimension !== a.dimension) {
      // nested and pulled levels take no axis operations
      return;
    }
    const att = info.attribute as string;
    const items: MenuItem[] = [];

    items.push({
      op: "ROLLUP",
      label: `Roll up to ${att}`,
      run: () => this.rollupTo(a.dimension, att),
    });

    const h = this.schema.dimensions
      .find((x) => x.name === a.dimension)
      ?.hierarchies.find((x) => x.name === a.hierarchy);
    const finest = finestDisplayedLevel(this.schema, cur.fact, a);
    const finer = (h?.parameters ?? []).filter((p, i) => i > finest && p !== "All");
    if (finer.length > 0) {
      items.push({
        op: "DRILLDOWN",
        label: "Drill down to...",
        fields: [{ name: "level", label: "level", kind: "select", options: finer }],
        run: (v) => this.drill(a.dimension, v.level),
      });
    }

    items.push({
      op: "ORDER",
      label: `Sort ${att} ascending`,
      run: () => this.orderBy(a.dimension, att, "asc"),
    });
    items.push({
      op: "ORDER",
      label: `Sort ${att} descending`,
      run: () => this.orderBy(a.dimension, att, "dsc"),
    });

    items.push({
      op: "AGREGATE",
      label: `Subtotal each ${att} block...`,
      fields: [
        { name: "fn", label: "function", kind: "select", options: [...AGGREGATE_FNS], value: "SUM" },
      ],
      run: (v) => this.subtotal(a.dimension, v.fn as AggregateFn, att),
    });

    const tree = this.treeOf(axis);
    const values = layerValues(tree, layerIndex).map(String);
    if (values.length >= 2) {
      items.push({
        op: "SWITCH",
        label: "Swap two values...",
        fields: [
          { name: "v1", label: "value", kind: "select", options: values },
          { name: "v2", label: "with", kind: "select", options: values, value: values[1] },
        ],
        run: (v) => {
          const kind = this.attributeKind(a.dimension, att);
          const typed = (x: string): string | number =>
            kind === "integer" || kind === "decimal" ? Number(x) : x;
          this.switchValues(a.dimension, att, typed(v.v1), typed(v.v2));
        },
      });
    }

    openMenu(anchor, items);
  }

  // ------------------------------------------------------------------
  // Rendering
  // ------------------------------------------------------------------

  private renderAll(): void {
    closeMenu();
    this.renderGraphPanel();
    this.renderToolbar();
    this.renderGridPanel();
    this.renderHistory();
  }

  private renderGraphPanel(): void {
    const selected = new Set<string>();
    if (this.selection.fact) {
      selected.add(factNodeId(this.selection.fact));
    }
    for (const p of this.selection.picks) {
      selected.add(dimensionNodeId(p.dimension));
    }
    renderGraph(
      this.graphPanel,
      this.graph,
      { disabled: this.disabledNodes(), selected },
      {
        onNode: (node, anchor) => this.onNode(node, anchor),
        onToggleExpand: (dimension) => {
          this.graph.toggle(dimension);
          this.renderGraphPanel();
        },
      },
    );
  }

  private renderToolbar(): void {
    this.toolbar.replaceChildren();

    const validate = document.createElement("button");
    validate.setAttribute("data-op", "DISPLAY");
    validate.setAttribute("data-role", "validate");
    validate.textContent = "Build table";
    validate.disabled = !this.selection.ready();
    validate.addEventListener("click", () => this.validateDisplay());
    this.toolbar.appendChild(validate);

    if (this.selection.active) {
      const cancel = document.createElement("button");
      cancel.setAttribute("data-role", "cancel-selection");
      cancel.textContent = "Cancel selection";
      cancel.addEventListener("click", () => {
        this.selection.reset();
        this.setStatus("selection cancelled");
        this.renderAll();
      });
      this.toolbar.appendChild(cancel);
    }

    const undo = document.createElement("button");
    undo.setAttribute("data-role", "undo");
    undo.textContent = "Undo";
    undo.disabled = this.state.ops.length === 0;
    undo.addEventListener("click", () => this.undo());
    this.toolbar.appendChild(undo);

    if (this.current) {
      const unagg = document.createElement("button");
      unagg.setAttribute("data-op", "UNAGREGATE");
      unagg.textContent = "Clear subtotals";
      unagg.addEventListener("click", () => this.clearSubtotals());
      this.toolbar.appendChild(unagg);
    }

    const names = Object.keys(this.state.tables);
    if (names.length > 0) {
      const pick = document.createElement("select");
      pick.setAttribute("data-role", "table-switcher");
      for (const n of names) {
        const o = document.createElement("option");
        o.value = n;
        o.textContent = n;
        pick.appendChild(o);
      }
      if (this.current) {
        pick.value = this.current.name;
      }
      pick.addEventListener("change", () => this.showTable(pick.value));
      this.toolbar.appendChild(pick);
    }
  }

  private renderGridPanel(): void {
    if (!this.current) {
      const empty = document.createElement("p");
      empty.textContent = "No table yet. Select a fact on the graph to start one.";
      this.gridPanel.replaceChildren(empty);
      return;
    }
    const title = document.createElement("h2");
    title.setAttribute("data-role", "table-name");
    title.textContent = this.current.name;
    const grid = renderGrid(this.current.table, {
      onHeader: (target, anchor) => this.onHeader(target, anchor),
      onClearRestriction: () => this.clearRestriction(),
    });
    this.gridPanel.replaceChildren(title, grid);
  }

  private renderHistory(): void {
    this.historyPanel.replaceChildren();
    for (const op of this.state.ops) {
      const li = document.createElement("li");
      li.textContent = op;
      this.historyPanel.appendChild(li);
    }
  }
}
