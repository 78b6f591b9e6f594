import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from startab import load_directory  # noqa: E402

FIX1 = Path(__file__).resolve().parent.parent / "fixtures" / "fix1"


@pytest.fixture(scope="session")
def ds():
    return load_directory(FIX1)


@pytest.fixture()
def ws(ds):
    from startab.query import Workspace

    return Workspace(ds)


T0_TEXT = "T0 := DISPLAY('SH_IMPORT', IMPORTATIONS, {SUM(Montant)}, FOURNISSEURS, HGeo, DATES, HTps)"

# Expressions in the mixed-case notation the query text mirrors, with
# conjunction written as the unicode wedge.  Parsing is schema-free and
# case-preserving, so these stand as written; evaluable versions against
# fixtures/fix1 use its uppercase entity names.
NOTATION_EXAMPLES = (
    "DISPLAY('SH_IMPORT', Importations, {SUM(Montant)}, Fournisseurs, HGeo, Dates, HTps)",
    "DROTATE(ADDM(SELECT(DRILLDOWN(T1, Fournisseurs, Pays), "
    "Produits.Classe = 'Electronique' ∧ Dates.Annee = 2005), AVG(Montant)), "
    "Fournisseurs, Societes, HGFr)",
    "PLOT(HROTATE(UNSELECT(DELM(T2, AVG(Montant))), Fournisseurs, HZon), Societes, Ville)",
)


@pytest.fixture()
def t0(ds):
    from startab import core_ops

    return core_ops.display(
        ds, "SH_IMPORT", "IMPORTATIONS", [("SUM", "Montant")],
        "FOURNISSEURS", "HGeo", "DATES", "HTps",
    )
