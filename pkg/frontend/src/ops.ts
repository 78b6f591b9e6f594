/**
 * Query-language statement builders.
 *
 * Every operation the UI emits is produced here, one function per
 * operator, so the text always parses server-side. Operands referring
 * to tables are names already bound in the session.
 */

export const AGGREGATE_FNS = ["SUM", "AVG", "MIN", "MAX", "COUNT"] as const;
export type AggregateFn = (typeof AGGREGATE_FNS)[number];

export interface Measure {
  fn: AggregateFn;
  measure: string;
}

/** `Pays`, `IdSoc(RaisonSociale)`, or `(RaisonSociale) of IdSoc`. */
export type LevelSelector =
  | string
  | { param: string; weak: string[] }
  | { weakOnly: string[]; of: string };

export interface Comparison {
  qualifier: string;
  attribute: string;
  cmp: "=" | "!=" | "<" | "<=" | ">" | ">=";
  value: string | number;
}

/** Conjunction of clauses; a clause is one or more comparisons joined by OR. */
export type Predicate = Comparison[][];

export function quote(s: string): string {
  return "'" + s.replace(/\\/g, "\\\\").replace(/'/g, "\\'") + "'";
}

export function literal(v: string | number): string {
  return typeof v === "number" ? String(v) : quote(v);
}

export function measureSet(ms: Measure[]): string {
  return "{" + ms.map((m) => `${m.fn}(${m.measure})`).join(", ") + "}";
}

export function selector(sel: LevelSelector): string {
  if (typeof sel === "string") {
    return sel;
  }
  if ("param" in sel) {
    return sel.weak.length ? `${sel.param}(${sel.weak.join(", ")})` : sel.param;
  }
  return `(${sel.weakOnly.join(", ")}) of ${sel.of}`;
}

export function predicate(p: Predicate): string {
  if (p.length === 0) {
    return "true";
  }
  const atom = (a: Comparison) => `${a.qualifier}.${a.attribute} ${a.cmp} ${literal(a.value)}`;
  return p
    .map((clause) => {
      const text = clause.map(atom).join(" OR ");
      return clause.length > 1 ? `(${text})` : text;
    })
    .join(" AND ");
}

export const ops = {
  display: (
    constellation: string,
    fact: string,
    ms: Measure[],
    lineDim: string,
    lineHier: string,
    colDim: string,
    colHier: string,
  ) =>
    `DISPLAY(${quote(constellation)}, ${fact}, ${measureSet(ms)}, ` +
    `${lineDim}, ${lineHier}, ${colDim}, ${colHier})`,

  drotate: (t: string, dOld: string, dNew: string, hier: string) =>
    `DROTATE(${t}, ${dOld}, ${dNew}, ${hier})`,

  drilldown: (t: string, dim: string, sel: LevelSelector) =>
    `DRILLDOWN(${t}, ${dim}, ${selector(sel)})`,

  rollup: (t: string, dim: string, att: string) => `ROLLUP(${t}, ${dim}, ${att})`,

  nest: (t: string, dim: string, att: string, nestedDim: string, nestedAtt: string) =>
    `NEST(${t}, ${dim}, ${att}, ${nestedDim}, ${nestedAtt})`,

  select: (t: string, p: Predicate) => `SELECT(${t}, ${predicate(p)})`,

  switchValues: (t: string, dim: string, att: string, v1: string | number, v2: string | number) =>
    `SWITCH(${t}, ${dim}, ${att}, ${literal(v1)}, ${literal(v2)})`,

  agregate: (t: string, dim: string, fn: AggregateFn, att: string) =>
    `AGREGATE(${t}, ${dim}, ${fn}(${att}))`,

  unagregate: (t: string) => `UNAGREGATE(${t})`,

  push: (t: string, dim: string, att: string) => `PUSH(${t}, ${dim}, ${att})`,

  pull: (t: string, m: Measure, dim: string) => `PULL(${t}, ${m.fn}(${m.measure}), ${dim})`,

  addm: (t: string, m: Measure) => `ADDM(${t}, ${m.fn}(${m.measure}))`,

  delm: (t: string, m: Measure) => `DELM(${t}, ${m.fn}(${m.measure}))`,

  hrotate: (t: string, dim: string, hier: string) => `HROTATE(${t}, ${dim}, ${hier})`,

  plot: (t: string, dim: string, sel: LevelSelector) => `PLOT(${t}, ${dim}, ${selector(sel)})`,

  order: (t: string, dim: string, att: string, direction: "asc" | "dsc") =>
    `ORDER(${t}, ${dim}, ${att}, ${direction})`,

  frotate: (t: string, fact: string, ms: Measure[]) =>
    `FROTATE(${t}, ${fact}, ${measureSet(ms)})`,

  unselect: (t: string) => `UNSELECT(${t})`,

  history: (t: string, obj: string, target: string) => `HISTORY(${t}, ${obj}, ${target})`,
} as const;

export type OperatorName =
  | "DISPLAY"
  | "DROTATE"
  | "DRILLDOWN"
  | "ROLLUP"
  | "NEST"
  | "SELECT"
  | "SWITCH"
  | "AGREGATE"
  | "UNAGREGATE"
  | "PUSH"
  | "PULL"
  | "ADDM"
  | "DELM"
  | "HROTATE"
  | "PLOT"
  | "ORDER"
  | "FROTATE"
  | "UNSELECT"
  | "HISTORY";

export const ALL_OPERATORS: OperatorName[] = [
  "DISPLAY",
  "DROTATE",
  "DRILLDOWN",
  "ROLLUP",
  "NEST",
  "SELECT",
  "SWITCH",
  "AGREGATE",
  "UNAGREGATE",
  "PUSH",
  "PULL",
  "ADDM",
  "DELM",
  "HROTATE",
  "PLOT",
  "ORDER",
  "FROTATE",
  "UNSELECT",
  "HISTORY",
];

/** `SUM(Montant)` -> {fn, measure}; the labels the server sends are in this form. */
export function parseMeasureLabel(label: string): Measure {
  const m = /^([A-Z]+)\((.+)\)$/.exec(label);
  if (!m || !(AGGREGATE_FNS as readonly string[]).includes(m[1])) {
    throw new Error(`not an aggregated measure label: ${label}`);
  }
  return { fn: m[1] as AggregateFn, measure: m[2] };
}
