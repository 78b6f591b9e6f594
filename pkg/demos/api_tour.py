"""The engine driven directly from Python, no query language involved.

Run from the repository root:

    python3 demos/api_tour.py
"""

from pathlib import Path

from startab import load_directory, materialize, render
from startab.core_ops import addm, display, drilldown, select
from startab.derived_ops import order, unselect
from startab.table import Atom, Restriction

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "fix1"


def show(title, ds, tm):
    print(f"== {title}")
    print(render(materialize(ds, tm)))


def main():
    ds = load_directory(FIXTURE)
    c = ds.constellation
    print(f"loaded {c.name}: {[f.name for f in c.facts]} over "
          f"{[d.name for d in c.dimensions]}\n")

    # Every analysis starts with a fresh table: one fact, one measure
    # set, two axes at their coarsest level.
    t = display(ds, c.name, "IMPORTATIONS", [("SUM", "Montant")],
                "FOURNISSEURS", "HGeo", "DATES", "HTps")
    show("amounts, continents x years", ds, t)

    t = drilldown(ds, t, "FOURNISSEURS", "Pays")
    t = addm(ds, t, "AVG", "Montant")
    show("down to countries, average added", ds, t)

    # A restriction is a conjunction of clauses; each clause is one or
    # more comparisons joined by OR.
    electronics = Restriction(((Atom("PRODUITS", "Classe", "=", "Electronique"),),))
    t = select(ds, t, electronics)
    show("electronics only", ds, t)

    t = order(ds, t, "FOURNISSEURS", "Continent", "dsc")
    show("continents descending", ds, t)

    # Operators never mutate: the log lives on the table value itself.
    print("== history")
    for rec in t.history:
        print(f"  {rec.op}{rec.args}")
    print()

    t = unselect(ds, t)
    show("restriction cancelled", ds, t)


if __name__ == "__main__":
    main()
