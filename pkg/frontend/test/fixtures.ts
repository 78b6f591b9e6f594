/** Schema document as the service reports it for the sample constellation. */

import type { GridDoc, SchemaDoc } from "../src/client.js";

export const SH_IMPORT: SchemaDoc = {
  constellation: "SH_IMPORT",
  facts: [
    {
      name: "IMPORTATIONS",
      measures: [
        { name: "Montant", kind: "decimal" },
        { name: "Quantite", kind: "integer" },
      ],
      dimensions: ["DATES", "PRODUITS", "SOCIETES", "FOURNISSEURS"],
    },
    {
      name: "EFFECTIFS",
      measures: [{ name: "NbEmployes", kind: "integer" }],
      dimensions: ["DATES", "SOCIETES"],
    },
  ],
  dimensions: [
    {
      name: "DATES",
      attributes: [
        { name: "All", kind: "text" },
        { name: "IdDate", kind: "text" },
        { name: "Mois", kind: "text" },
        { name: "Annee", kind: "integer" },
      ],
      hierarchies: [{ name: "HTps", parameters: ["All", "Annee", "Mois", "IdDate"], weak: {} }],
    },
    {
      name: "PRODUITS",
      attributes: [
        { name: "All", kind: "text" },
        { name: "IdProd", kind: "text" },
        { name: "Classe", kind: "text" },
      ],
      hierarchies: [{ name: "HCat", parameters: ["All", "Classe", "IdProd"], weak: {} }],
    },
    {
      name: "SOCIETES",
      attributes: [
        { name: "All", kind: "text" },
        { name: "IdSoc", kind: "text" },
        { name: "RaisonSociale", kind: "text" },
        { name: "Ville", kind: "text" },
        { name: "Region", kind: "text" },
      ],
      hierarchies: [
        {
          name: "HGFr",
          parameters: ["All", "Region", "Ville", "IdSoc"],
          weak: { IdSoc: ["RaisonSociale"] },
        },
      ],
    },
    {
      name: "FOURNISSEURS",
      attributes: [
        { name: "All", kind: "text" },
        { name: "IdFour", kind: "text" },
        { name: "Pays", kind: "text" },
        { name: "Continent", kind: "text" },
        { name: "Zone", kind: "text" },
      ],
      hierarchies: [
        { name: "HGeo", parameters: ["All", "Continent", "Pays", "IdFour"], weak: {} },
        { name: "HZon", parameters: ["All", "Zone", "IdFour"], weak: {} },
      ],
    },
  ],
};

/** Continent > Pays on the rows, Annee on the columns, one measure. */
export function sampleGrid(): GridDoc {
  return {
    kind: "grid",
    subject: { fact: "IMPORTATIONS", measures: ["SUM(Montant)"] },
    pulled: [],
    restriction: [],
    rows: {
      caption: "FOURNISSEURS (HGeo)",
      layers: ["CONTINENT", "PAYS"],
      nodes: [
        {
          label: "Amerique",
          kind: "value",
          value: ["Amerique"],
          children: [{ label: "Bresil", kind: "value", value: ["Bresil"], children: [] }],
        },
        {
          label: "Asie",
          kind: "value",
          value: ["Asie"],
          children: [
            { label: "Chine", kind: "value", value: ["Chine"], children: [] },
            { label: "Japon", kind: "value", value: ["Japon"], children: [] },
          ],
        },
      ],
    },
    columns: {
      caption: "DATES (HTps)",
      layers: ["ANNEE"],
      nodes: [
        { label: "2004", kind: "value", value: [2004], children: [] },
        { label: "2005", kind: "value", value: [2005], children: [] },
      ],
    },
    cells: [
      [{ values: [null], pulled: [] }, { values: [50], pulled: [] }],
      [{ values: [30], pulled: [] }, { values: [100], pulled: [] }],
      [{ values: [null], pulled: [] }, { values: [70], pulled: [] }],
    ],
  };
}
