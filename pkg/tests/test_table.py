"""Table components: units, restrictions, display orders."""

import pytest

from startab.errors import AttributeNotDisplayed, UnknownQualifier
from startab.table import (
    Atom,
    AxisSpec,
    MeasureTerm,
    MeasureUnit,
    MultidimensionalTable,
    NestedUnit,
    ParamUnit,
    Restriction,
    SubjectSpec,
    TRUE_RESTRICTION,
    WeakUnit,
    displayed_attributes,
    effective_order,
    format_number,
    restriction_lines,
    restriction_passes,
    unit_attributes,
    unit_label,
    validate_qualifier,
)


def test_unit_attributes():
    assert unit_attributes(ParamUnit("Pays"), "FOURNISSEURS") == (("FOURNISSEURS", "Pays"),)
    assert unit_attributes(ParamUnit("IdSoc", ("RaisonSociale",)), "SOCIETES") == (
        ("SOCIETES", "IdSoc"),
        ("SOCIETES", "RaisonSociale"),
    )
    assert unit_attributes(WeakUnit("IdSoc", ("RaisonSociale",)), "SOCIETES") == (
        ("SOCIETES", "RaisonSociale"),
    )
    assert unit_attributes(NestedUnit("PRODUITS", "Classe"), "DATES") == (("PRODUITS", "Classe"),)
    assert unit_attributes(MeasureUnit("SUM", "Montant"), "DATES") == ()


def test_unit_labels():
    assert unit_label(ParamUnit("Pays")) == "PAYS"
    assert unit_label(ParamUnit("IdSoc", ("RaisonSociale",))) == "IDSOC (RAISONSOCIALE)"
    assert unit_label(WeakUnit("IdSoc", ("RaisonSociale",))) == "(RAISONSOCIALE)"
    assert unit_label(NestedUnit("PRODUITS", "Classe")) == "PRODUITS.CLASSE"
    assert unit_label(MeasureUnit("SUM", "Montant")) == "SUM(MONTANT)"


def test_measure_term_labels():
    assert MeasureTerm("SUM", "Montant").label() == "SUM(Montant)"
    pushed = MeasureTerm(None, "Classe", "PRODUITS")
    assert pushed.pushed
    assert pushed.label() == "Classe"


@pytest.mark.parametrize(
    "cmp, left, right, expected",
    [
        ("=", 3, 3, True), ("=", 3, 4, False),
        ("!=", "a", "b", True), ("!=", "a", "a", False),
        ("<", 2, 3, True), ("<", 3, 3, False),
        ("<=", 3, 3, True), (">", 4, 3, True),
        (">=", 3, 3, True), (">=", 2, 3, False),
    ],
)
def test_atom_holds(cmp, left, right, expected):
    assert Atom("D", "A", cmp, right).holds(left) is expected


def test_atom_tautology():
    assert Atom("DATES", "All", "=", "all").tautology()
    assert not Atom("DATES", "All", "!=", "all").tautology()
    assert not Atom("DATES", "Annee", "=", "all").tautology()


def test_restriction_normalization_drops_tautological_clauses():
    keep = (Atom("PRODUITS", "Classe", "=", "Textile"),)
    noise = (Atom("DATES", "All", "=", "all"), Atom("DATES", "Annee", "=", 2004))
    r = Restriction((keep, noise))
    assert r.normalized() == frozenset({frozenset(keep)})
    # clause and atom order are immaterial
    r2 = Restriction((tuple(reversed(noise)), keep))
    assert r2.normalized() == r.normalized()
    assert TRUE_RESTRICTION.normalized() == frozenset()


def test_restriction_qualifiers_in_first_seen_order():
    r = Restriction((
        (Atom("DATES", "Annee", "=", 2005), Atom("PRODUITS", "Classe", "=", "Textile")),
        (Atom("DATES", "Mois", "!=", "2005-01"),),
    ))
    assert r.qualifiers() == ("DATES", "PRODUITS")


def test_restriction_passes(ds):
    rows = ds.fact_instances["IMPORTATIONS"]
    r = Restriction((
        (Atom("DATES", "Annee", "=", 2005),),
        (Atom("PRODUITS", "Classe", "=", "Electronique"),
         Atom("FOURNISSEURS", "Continent", "=", "Amerique")),
    ))
    passing = [row for row in rows if restriction_passes(ds, "IMPORTATIONS", row, r)]
    assert [row.links["DATES"] for row in passing] == ["D1", "D2"]
    # measure atoms compare against the fact row itself
    r = Restriction(((Atom("IMPORTATIONS", "Montant", ">", 60),),))
    assert sum(restriction_passes(ds, "IMPORTATIONS", row, r) for row in rows) == 2


def test_restriction_lines():
    r = Restriction((
        (Atom("PRODUITS", "Classe", "=", "Textile"), Atom("DATES", "Annee", ">=", 2005)),
        (Atom("IMPORTATIONS", "Montant", "<", 10.5),),
    ))
    assert restriction_lines(r) == (
        "PRODUITS.CLASSE = 'Textile' OR DATES.ANNEE >= 2005",
        "IMPORTATIONS.MONTANT < 10.5",
    )


def test_format_number():
    assert format_number(3) == "3"
    assert format_number(3.0) == "3"
    assert format_number(3.5) == "3.5"


def test_axis_levels(ds):
    axis = AxisSpec("SOCIETES", "HGFr", (ParamUnit("Region"), ParamUnit("Ville")))
    assert axis.native_level(ds, ParamUnit("Region")) == 1
    assert axis.native_level(ds, WeakUnit("IdSoc", ("RaisonSociale",))) == 3
    assert axis.finest_level(ds) == 2
    bare = AxisSpec("SOCIETES", "HGFr", ())
    assert bare.finest_level(ds) == 0
    # nested and measure units do not define a graduation level
    mixed = AxisSpec("SOCIETES", "HGFr", (ParamUnit("Region"), NestedUnit("PRODUITS", "Classe")))
    assert mixed.finest_level(ds) == 1


def test_table_axis_lookup_and_replacement(t0):
    assert t0.axis("FOURNISSEURS") is t0.line
    assert t0.axis("DATES") is t0.column
    assert t0.axis("PRODUITS") is None
    moved = t0.with_axis(AxisSpec("DATES", "HTps", (ParamUnit("Mois"),)))
    assert moved.column.displayed == (ParamUnit("Mois"),)
    with pytest.raises(AttributeNotDisplayed):
        t0.with_axis(AxisSpec("PRODUITS", "HCat", ()))


def test_order_override_replaces_previous(t0, ds):
    assert effective_order(t0, ds, "DATES", "Annee") == [2004, 2005]
    t1 = t0.with_order("DATES", "Annee", (2005, 2004))
    t2 = t1.with_order("DATES", "Annee", (2004, 2005))
    assert t1.order_override("DATES", "Annee") == (2005, 2004)
    assert effective_order(t1, ds, "DATES", "Annee") == [2005, 2004]
    assert len(t2.domain_orders) == 1
    assert t0.order_override("DATES", "Annee") is None


def test_displayed_attributes(ds, t0):
    assert displayed_attributes(t0) == (
        ("FOURNISSEURS", "Continent"),
        ("DATES", "Annee"),
    )


def test_validate_qualifier(ds, t0):
    validate_qualifier(ds, t0, "IMPORTATIONS")
    validate_qualifier(ds, t0, "PRODUITS")
    with pytest.raises(UnknownQualifier):
        validate_qualifier(ds, t0, "EFFECTIFS")


def test_logged_appends_records(t0):
    out = t0.logged("SWITCH", ("DATES", "Annee", 2004, 2005), {"DATES"})
    assert len(out.history) == len(t0.history) + 1
    rec = out.history[-1]
    assert rec.op == "SWITCH"
    assert rec.tags == frozenset({"DATES"})
