/**
 * Independent expected values, computed straight from the sample CSV
 * files. The end-to-end suite compares the grids the UI obtains
 * against these joins, so a wrong cell anywhere fails loudly.
 */

import fs from "node:fs";
import path from "node:path";

type Row = Record<string, string>;

function readCsv(file: string): Row[] {
  const text = fs.readFileSync(file, "utf8").trim();
  const [head, ...lines] = text.split(/\r?\n/);
  const cols = head.split(",");
  return lines
    .filter((l) => l.trim().length > 0)
    .map((l) => {
      const vals = l.split(",");
      return Object.fromEntries(cols.map((c, i) => [c, vals[i]]));
    });
}

export interface ImportFact {
  annee: string;
  classe: string;
  region: string;
  pays: string;
  continent: string;
  zone: string;
  idFour: string;
  montant: number;
  quantite: number;
}

export interface StaffFact {
  annee: string;
  region: string;
  nbEmployes: number;
}

export class Oracle {
  readonly imports: ImportFact[];
  readonly staff: StaffFact[];

  constructor(fixtureDir: string) {
    const table = (name: string) => readCsv(path.join(fixtureDir, name));
    const dates = new Map(table("dates.csv").map((r) => [r.IdDate, r]));
    const produits = new Map(table("produits.csv").map((r) => [r.IdProd, r]));
    const societes = new Map(table("societes.csv").map((r) => [r.IdSoc, r]));
    const fournisseurs = new Map(table("fournisseurs.csv").map((r) => [r.IdFour, r]));

    this.imports = table("importations.csv").map((r) => {
      const d = dates.get(r.IdDate) as Row;
      const p = produits.get(r.IdProd) as Row;
      const s = societes.get(r.IdSoc) as Row;
      const f = fournisseurs.get(r.IdFour) as Row;
      return {
        annee: d.Annee,
        classe: p.Classe,
        region: s.Region,
        pays: f.Pays,
        continent: f.Continent,
        zone: f.Zone,
        idFour: r.IdFour,
        montant: Number(r.Montant),
        quantite: Number(r.Quantite),
      };
    });

    this.staff = table("effectifs.csv").map((r) => {
      const d = dates.get(r.IdDate) as Row;
      const s = societes.get(r.IdSoc) as Row;
      return { annee: d.Annee, region: s.Region, nbEmployes: Number(r.NbEmployes) };
    });
  }

  /** SUM of one import measure grouped by a row key and a column key. */
  importSum(
    measure: "montant" | "quantite",
    rowKey: (f: ImportFact) => string,
    colKey: (f: ImportFact) => string,
    filter: (f: ImportFact) => boolean = () => true,
  ): Map<string, number> {
    const out = new Map<string, number>();
    for (const f of this.imports) {
      if (!filter(f)) {
        continue;
      }
      const key = `${rowKey(f)}|${colKey(f)}`;
      out.set(key, (out.get(key) ?? 0) + f[measure]);
    }
    return out;
  }

  staffSum(): Map<string, number> {
    const out = new Map<string, number>();
    for (const s of this.staff) {
      const key = `${s.annee}|${s.region}`;
      out.set(key, (out.get(key) ?? 0) + s.nbEmployes);
    }
    return out;
  }
}
