import { describe, expect, it } from "vitest";

import {
  ALL_OPERATORS,
  literal,
  measureSet,
  ops,
  parseMeasureLabel,
  predicate,
  quote,
  selector,
} from "../src/ops.js";

describe("literals", () => {
  it("quotes strings and escapes the quote and the backslash", () => {
    expect(quote("Chine")).toBe("'Chine'");
    expect(quote("l'ete")).toBe("'l\\'ete'");
    expect(quote("a\\b")).toBe("'a\\\\b'");
  });

  it("keeps numbers bare", () => {
    expect(literal(2005)).toBe("2005");
    expect(literal("2005")).toBe("'2005'");
  });
});

describe("selectors", () => {
  it("renders the three attribute selector forms", () => {
    expect(selector("Pays")).toBe("Pays");
    expect(selector({ param: "IdSoc", weak: ["RaisonSociale"] })).toBe("IdSoc(RaisonSociale)");
    expect(selector({ param: "IdSoc", weak: [] })).toBe("IdSoc");
    expect(selector({ weakOnly: ["RaisonSociale"], of: "IdSoc" })).toBe(
      "(RaisonSociale) of IdSoc",
    );
  });
});

describe("predicates", () => {
  it("renders the empty conjunction as true", () => {
    expect(predicate([])).toBe("true");
  });

  it("renders one atom without parentheses", () => {
    expect(
      predicate([[{ qualifier: "PRODUITS", attribute: "Classe", cmp: "=", value: "Electronique" }]]),
    ).toBe("PRODUITS.Classe = 'Electronique'");
  });

  it("joins clauses with AND and parenthesizes inner ORs", () => {
    expect(
      predicate([
        [
          { qualifier: "DATES", attribute: "Annee", cmp: "=", value: 2004 },
          { qualifier: "DATES", attribute: "Annee", cmp: "=", value: 2005 },
        ],
        [{ qualifier: "FOURNISSEURS", attribute: "Pays", cmp: "!=", value: "Chine" }],
      ]),
    ).toBe("(DATES.Annee = 2004 OR DATES.Annee = 2005) AND FOURNISSEURS.Pays != 'Chine'");
  });
});

describe("statement builders", () => {
  it("covers every operator of the algebra", () => {
    const emitted: Record<string, string> = {
      DISPLAY: ops.display(
        "SH_IMPORT",
        "IMPORTATIONS",
        [{ fn: "SUM", measure: "Montant" }],
        "FOURNISSEURS",
        "HGeo",
        "DATES",
        "HTps",
      ),
      DROTATE: ops.drotate("T1", "DATES", "SOCIETES", "HGFr"),
      DRILLDOWN: ops.drilldown("T1", "FOURNISSEURS", "Pays"),
      ROLLUP: ops.rollup("T1", "FOURNISSEURS", "Continent"),
      NEST: ops.nest("T1", "FOURNISSEURS", "Continent", "PRODUITS", "Classe"),
      SELECT: ops.select("T1", [
        [{ qualifier: "PRODUITS", attribute: "Classe", cmp: "=", value: "Electronique" }],
      ]),
      SWITCH: ops.switchValues("T1", "FOURNISSEURS", "Continent", "Amerique", "Asie"),
      AGREGATE: ops.agregate("T1", "FOURNISSEURS", "SUM", "Continent"),
      UNAGREGATE: ops.unagregate("T1"),
      PUSH: ops.push("T1", "SOCIETES", "Region"),
      PULL: ops.pull("T1", { fn: "AVG", measure: "Montant" }, "DATES"),
      ADDM: ops.addm("T1", { fn: "AVG", measure: "Montant" }),
      DELM: ops.delm("T1", { fn: "AVG", measure: "Montant" }),
      HROTATE: ops.hrotate("T1", "FOURNISSEURS", "HZon"),
      PLOT: ops.plot("T1", "FOURNISSEURS", "IdFour"),
      ORDER: ops.order("T1", "FOURNISSEURS", "Continent", "dsc"),
      FROTATE: ops.frotate("T1", "EFFECTIFS", [{ fn: "SUM", measure: "NbEmployes" }]),
      UNSELECT: ops.unselect("T1"),
      HISTORY: ops.history("T1", "PRODUITS", "T2"),
    };
    expect(Object.keys(emitted).sort()).toEqual([...ALL_OPERATORS].sort());
    for (const [op, text] of Object.entries(emitted)) {
      expect(text.startsWith(`${op}(`)).toBe(true);
      expect(text.endsWith(")")).toBe(true);
    }
  });

  it("builds the table construction statement verbatim", () => {
    expect(
      ops.display(
        "SH_IMPORT",
        "IMPORTATIONS",
        [
          { fn: "SUM", measure: "Montant" },
          { fn: "AVG", measure: "Quantite" },
        ],
        "FOURNISSEURS",
        "HGeo",
        "DATES",
        "HTps",
      ),
    ).toBe(
      "DISPLAY('SH_IMPORT', IMPORTATIONS, {SUM(Montant), AVG(Quantite)}, " +
        "FOURNISSEURS, HGeo, DATES, HTps)",
    );
  });

  it("quotes switched values only when they are strings", () => {
    expect(ops.switchValues("T1", "DATES", "Annee", 2004, 2005)).toBe(
      "SWITCH(T1, DATES, Annee, 2004, 2005)",
    );
    expect(ops.switchValues("T1", "FOURNISSEURS", "Pays", "Chine", "Bresil")).toBe(
      "SWITCH(T1, FOURNISSEURS, Pays, 'Chine', 'Bresil')",
    );
  });

  it("renders measure sets and selectors inside operators", () => {
    expect(measureSet([{ fn: "SUM", measure: "Montant" }])).toBe("{SUM(Montant)}");
    expect(ops.frotate("T3", "EFFECTIFS", [{ fn: "SUM", measure: "NbEmployes" }])).toBe(
      "FROTATE(T3, EFFECTIFS, {SUM(NbEmployes)})",
    );
    expect(ops.drilldown("T1", "SOCIETES", { weakOnly: ["RaisonSociale"], of: "IdSoc" })).toBe(
      "DRILLDOWN(T1, SOCIETES, (RaisonSociale) of IdSoc)",
    );
    expect(ops.plot("T1", "SOCIETES", { param: "IdSoc", weak: ["RaisonSociale"] })).toBe(
      "PLOT(T1, SOCIETES, IdSoc(RaisonSociale))",
    );
  });
});

describe("measure labels", () => {
  it("parses the labels the server displays", () => {
    expect(parseMeasureLabel("SUM(Montant)")).toEqual({ fn: "SUM", measure: "Montant" });
    expect(parseMeasureLabel("COUNT(NbEmployes)")).toEqual({
      fn: "COUNT",
      measure: "NbEmployes",
    });
  });

  it("rejects labels that are not aggregated measures", () => {
    expect(() => parseMeasureLabel("Montant")).toThrow();
    expect(() => parseMeasureLabel("TOTAL(Montant)")).toThrow();
  });
});
