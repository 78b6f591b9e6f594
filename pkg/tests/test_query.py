"""Query text: lexing, parsing, printing, evaluation."""

import pytest

from startab.errors import (
    ArityError,
    DimensionNotOnAxis,
    EvaluationError,
    QueryError,
    QuerySyntaxError,
    UnboundName,
    UnknownOperator,
)
from startab.query import (
    Call,
    Name,
    Num,
    ParamSel,
    Pred,
    PredAtom,
    Str,
    Term,
    TermSet,
    WeakSel,
    Workspace,
    evaluate,
    iter_statements,
    line_col,
    parse,
    parse_statement,
    print_expr,
    strip_comment,
)

from conftest import NOTATION_EXAMPLES, T0_TEXT

ROUND_TRIPS = [
    "T0",
    "DISPLAY('SH_IMPORT', IMPORTATIONS, {SUM(Montant), AVG(Quantite)}, FOURNISSEURS, HGeo, DATES, HTps)",
    "DRILLDOWN(T1, SOCIETES, IdSoc(RaisonSociale, Ville))",
    "DRILLDOWN(T1, SOCIETES, (RaisonSociale) of IdSoc)",
    "ROLLUP(T1, FOURNISSEURS, All)",
    "NEST(T1, FOURNISSEURS, Continent, PRODUITS, Classe)",
    "SELECT(T1, PRODUITS.Classe = 'Electronique')",
    "SELECT(T1, (DATES.Annee >= 2004 OR IMPORTATIONS.Montant != 50) AND DATES.Mois != '2005-01')",
    "SELECT(T1, IMPORTATIONS.Montant > -10.5)",
    "SELECT(T1, true)",
    "SWITCH(T1, DATES, Annee, 2004, 2005)",
    "SWITCH(T1, PRODUITS, Classe, 'Textile', 'Electronique')",
    "AGREGATE(T1, DATES, SUM(Annee))",
    "UNAGREGATE(T1)",
    "PUSH(T1, PRODUITS, Classe)",
    "PULL(ADDM(T1, AVG(Montant)), AVG(Montant), DATES)",
    "DELM(T2, AVG(Montant))",
    "HROTATE(T1, FOURNISSEURS, HZon)",
    "PLOT(T1, SOCIETES, Ville)",
    "ORDER(T1, DATES, Annee, dsc)",
    "FROTATE(T1, EFFECTIFS, {SUM(NbEmployes)})",
    "UNSELECT(T1)",
    "HISTORY(T1, DATES, T2)",
]


@pytest.mark.parametrize("text", ROUND_TRIPS)
def test_print_of_parse_is_identity(text):
    assert print_expr(parse(text)) == text


@pytest.mark.parametrize("text", ROUND_TRIPS)
def test_parse_of_print_is_identity(text):
    tree = parse(text)
    assert parse(print_expr(tree)) == tree


def test_node_equality_ignores_spans():
    assert parse("ROLLUP(T1,DATES,All)") == parse("ROLLUP( T1 , DATES , All )")


def test_unicode_synonyms_lex_to_ascii():
    tree = parse("SELECT(T1, A.B ≠ 5 ∧ (C.D ≤ 3 ∨ C.D ≥ 7))")
    assert tree == parse("SELECT(T1, A.B != 5 AND (C.D <= 3 OR C.D >= 7))")
    assert print_expr(tree) == "SELECT(T1, A.B != 5 AND (C.D <= 3 OR C.D >= 7))"


@pytest.mark.parametrize("text", NOTATION_EXAMPLES)
def test_notation_examples_parse(text):
    tree = parse(text)
    assert isinstance(tree, Call)
    # printing normalizes the wedge to AND and nothing else
    assert print_expr(tree) == text.replace(" ∧ ", " AND ")


def test_string_escapes():
    tree = parse("SELECT(T1, SOCIETES.RaisonSociale = 'l\\'Air')")
    atom = tree.args[1].clauses[0][0]
    assert atom.value == "l'Air"
    assert print_expr(tree) == "SELECT(T1, SOCIETES.RaisonSociale = 'l\\'Air')"


def test_true_is_the_empty_predicate():
    tree = parse("SELECT(T1, true)")
    assert tree.args[1] == Pred(())
    # reserved in argument position, whatever the operator
    assert parse("ROLLUP(T1, DATES, true)").args[2] == Pred(())
    # ... but not when it heads a call or a qualified name
    assert parse("DRILLDOWN(T1, D, true(Nom))").args[2] == ParamSel("true", ("Nom",))


def test_single_atom_needs_no_parentheses():
    tree = parse("SELECT(T1, DATES.Annee = 2005)")
    assert tree.args[1] == Pred(((PredAtom("DATES", "Annee", "=", 2005),),))


def test_call_name_disambiguation():
    # same shape, four readings: operator, aggregation term, selector
    assert isinstance(parse("UNSELECT(T1)"), Call)
    assert parse("ADDM(T1, AVG(Montant))").args[1] == Term("AVG", "Montant")
    assert parse("DRILLDOWN(T1, D, Pays(Nom))").args[2] == ParamSel("Pays", ("Nom",))
    with pytest.raises(UnknownOperator):
        parse("MEDIANE(T1, DATES)")


def test_weak_selector_form():
    sel = parse("DRILLDOWN(T1, SOCIETES, (RaisonSociale, Ville) of IdSoc)").args[2]
    assert sel == WeakSel(("RaisonSociale", "Ville"), "IdSoc")


def test_parse_errors_carry_spans():
    with pytest.raises(QuerySyntaxError) as exc:
        parse("SELECT(T1, 'abc")
    assert exc.value.span == (11, 15)
    with pytest.raises(UnknownOperator) as exc:
        parse("SELECT(FOO(T1), true)")
    assert exc.value.span == (7, 10)
    with pytest.raises(ArityError) as exc:
        parse("ROLLUP(T1, DATES)")
    assert exc.value.span == (0, 17)


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "T1 T2",
        "SUM(Montant)",  # a term is not an expression
        "SELECT(T1, 5 = 5)",
        "SELECT(T1, DATES.Annee = )",
        "DISPLAY('X', F, {}, A, B, C, D)",
        "DISPLAY('X', F, {Montant}, A, B, C, D)",
        "ROLLUP(T1, DATES, All",
        "42",
        "(Nom) for IdSoc",
    ],
)
def test_rejected_text(bad):
    with pytest.raises(QuerySyntaxError):
        parse(bad)


def test_statements():
    name, expr = parse_statement("base := ROLLUP(T1, DATES, All)")
    assert name == "base" and isinstance(expr, Call)
    name, expr = parse_statement("ROLLUP(T1, DATES, All)")
    assert name is None
    name, expr = parse_statement("T9")
    assert name is None and expr == Name("T9")


def test_strip_comment_respects_strings():
    assert strip_comment("ROLLUP(T1, D, All) # done") == "ROLLUP(T1, D, All) "
    kept = "SELECT(T0, D.A = 'x # y')"
    assert strip_comment(kept + " # trailing") == kept + " "
    assert strip_comment("A.B = 'don\\'t stop' # c") == "A.B = 'don\\'t stop' "
    assert strip_comment("# whole line") == ""


def test_iter_statements_numbers_lines():
    script = "# header\n\nT1 := ROLLUP(T0, D, All)\n  # note\nT1\n"
    assert list(iter_statements(script)) == [
        (3, "T1 := ROLLUP(T0, D, All)"),
        (5, "T1"),
    ]


def test_line_col():
    src = "abc\nde\nf"
    assert line_col(src, 0) == (1, 1)
    assert line_col(src, 4) == (2, 1)
    assert line_col(src, 7) == (3, 1)


# ---------------------------------------------------------------- evaluation

def test_workspace_binds_and_autonames(ws):
    name, tm = ws.run(T0_TEXT)
    assert name == "T0"
    assert ws.env["T0"] is tm
    auto, _ = ws.run("ROLLUP(T0, DATES, All)")
    assert auto == "T1"
    ws.run("T2 := ROLLUP(T0, DATES, All)")
    skipped, _ = ws.run("ROLLUP(T0, DATES, All)")
    assert skipped == "T3"  # T2 is taken


def test_workspace_bare_name_rebinds_itself(ws):
    ws.run(T0_TEXT)
    name, tm = ws.run("T0")
    assert name == "T0" and tm is ws.env["T0"]


def test_unbound_name(ws):
    with pytest.raises(UnboundName):
        ws.run("ROLLUP(T99, DATES, All)")


def test_nested_evaluation(ws):
    ws.run(T0_TEXT)
    _, tm = ws.run("SWITCH(DRILLDOWN(T0, FOURNISSEURS, Pays), DATES, Annee, 2004, 2005)")
    assert [u.param for u in tm.line.displayed] == ["Continent", "Pays"]
    assert tm.order_override("DATES", "Annee") == (2005, 2004)


def test_evaluation_error_carries_span_and_cause(ws):
    ws.run(T0_TEXT)
    text = "ROLLUP(DRILLDOWN(T0, FOURNISSEURS, Pays), PRODUITS, All)"
    with pytest.raises(EvaluationError) as exc:
        ws.run(text)
    assert exc.value.span == (0, len(text))
    assert isinstance(exc.value.cause, DimensionNotOnAxis)
    assert str(exc.value).startswith("ROLLUP:")


def test_argument_coercion_errors(ws):
    ws.run(T0_TEXT)
    for text in [
        "DISPLAY(SH_IMPORT, IMPORTATIONS, {SUM(Montant)}, FOURNISSEURS, HGeo, DATES, HTps)",
        "SELECT(T0, T0)",
        "SELECT(T0, DATES.Annee)",  # a comparison, not just a qualified name
        "DRILLDOWN(T0, FOURNISSEURS, 'Pays')",
        "SWITCH(T0, DATES, Annee, Annee, 2005)",
        "FROTATE(T0, EFFECTIFS, SUM(NbEmployes))",
    ]:
        with pytest.raises(QueryError):
            ws.run(text)


def test_environment_is_left_alone_by_failures(ws):
    ws.run(T0_TEXT)
    before = dict(ws.env)
    with pytest.raises(QueryError):
        ws.run("oops := ROLLUP(T0, PRODUITS, All)")
    assert ws.env == before
