"""The textual query language.

Expressions are nested operator calls over table values:

    DISPLAY('SH_IMPORT', Importations, {SUM(Montant)}, Fournisseurs, HGeo, Dates, HTps)
    SELECT(T1, Produits.Classe = 'Electronique' AND Dates.Annee = 2005)

Leaves are DISPLAY calls or names bound in the evaluation environment.
parse and print_expr are exact inverses on the canonical form; the
unicode comparison and connector glyphs are accepted and printed back
as their ASCII synonyms.  docs/query_language.md holds the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import core_ops, derived_ops
from .data import Dataset
from .errors import (
    ArityError,
    EvaluationError,
    OlapError,
    QueryError,
    QuerySyntaxError,
    UnboundName,
    UnknownOperator,
)
from .table import (
    AGGREGATE_FNS,
    Atom,
    MultidimensionalTable,
    ParamUnit,
    Restriction,
    WeakUnit,
)

Span = tuple[int, int]

ARITY = {
    "DISPLAY": 7, "DROTATE": 4, "DRILLDOWN": 3, "ROLLUP": 3, "NEST": 5,
    "SELECT": 2, "SWITCH": 5, "AGREGATE": 3, "UNAGREGATE": 1, "PUSH": 3,
    "PULL": 3, "ADDM": 2, "DELM": 2,
    "HROTATE": 3, "PLOT": 3, "ORDER": 4, "FROTATE": 3, "UNSELECT": 1,
    "HISTORY": 3,
}

_CMP_SYNONYMS = {"≠": "!=", "≤": "<=", "≥": ">="}
_COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")


# --------------------------------------------------------------------------
# Syntax tree
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    span: Span = field(compare=False, kw_only=True, default=(0, 0))


@dataclass(frozen=True)
class Name(Node):
    value: str


@dataclass(frozen=True)
class Str(Node):
    value: str


@dataclass(frozen=True)
class Num(Node):
    value: int | float


@dataclass(frozen=True)
class Qualified(Node):
    qualifier: str
    name: str


@dataclass(frozen=True)
class Term(Node):
    """fn(measure), also used for AGREGATE's fn(attribute)."""

    fn: str
    name: str


@dataclass(frozen=True)
class TermSet(Node):
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class ParamSel(Node):
    """Attribute selector `Pays` / `Pays(NomLocal)`."""

    name: str
    weak: tuple[str, ...] = ()


@dataclass(frozen=True)
class WeakSel(Node):
    """Attribute selector `(NomLocal) of Pays`."""

    weak: tuple[str, ...]
    owner: str


@dataclass(frozen=True)
class PredAtom(Node):
    qualifier: str
    name: str
    cmp: str
    value: str | int | float


@dataclass(frozen=True)
class Pred(Node):
    """Conjunction of disjunction clauses; no clauses is `true`."""

    clauses: tuple[tuple[PredAtom, ...], ...]


@dataclass(frozen=True)
class Call(Node):
    op: str
    args: tuple[Node, ...]


Expr = Node


# --------------------------------------------------------------------------
# Lexer
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # NAME NUMBER STRING PUNCT CMP AND OR ASSIGN END
    value: str | int | float
    span: Span


def _lex(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            i += 1
            continue
        start = i
        if ch == "'":
            i += 1
            out = []
            while i < n and src[i] != "'":
                if src[i] == "\\" and i + 1 < n:
                    out.append(src[i + 1])
                    i += 2
                else:
                    out.append(src[i])
                    i += 1
            if i >= n:
                raise QuerySyntaxError("unterminated string literal", (start, n))
            i += 1
            tokens.append(_Token("STRING", "".join(out), (start, i)))
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and src[i + 1].isdigit()):
            j = i + 1
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            text = src[i:j]
            value = float(text) if "." in text else int(text)
            tokens.append(_Token("NUMBER", value, (i, j)))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            if word == "AND":
                tokens.append(_Token("AND", word, (i, j)))
            elif word == "OR":
                tokens.append(_Token("OR", word, (i, j)))
            else:
                tokens.append(_Token("NAME", word, (i, j)))
            i = j
            continue
        if ch == "∧":
            tokens.append(_Token("AND", "AND", (i, i + 1)))
            i += 1
            continue
        if ch == "∨":
            tokens.append(_Token("OR", "OR", (i, i + 1)))
            i += 1
            continue
        if ch in _CMP_SYNONYMS:
            tokens.append(_Token("CMP", _CMP_SYNONYMS[ch], (i, i + 1)))
            i += 1
            continue
        if src.startswith(":=", i):
            tokens.append(_Token("ASSIGN", ":=", (i, i + 2)))
            i += 2
            continue
        if src.startswith(("<=", ">=", "!="), i):
            tokens.append(_Token("CMP", src[i:i + 2], (i, i + 2)))
            i += 2
            continue
        if ch in "<>=":
            tokens.append(_Token("CMP", ch, (i, i + 1)))
            i += 1
            continue
        if ch in "(){},.":
            tokens.append(_Token("PUNCT", ch, (i, i + 1)))
            i += 1
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", (i, i + 1))
    tokens.append(_Token("END", "", (n, n)))
    return tokens


def line_col(src: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a source offset."""
    line = src.count("\n", 0, offset) + 1
    col = offset - (src.rfind("\n", 0, offset) + 1) + 1
    return line, col


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _lex(src)
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "END":
            self.pos += 1
        return tok

    def expect(self, kind: str, value=None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise QuerySyntaxError(f"expected {want!r}, found {tok.value!r}", tok.span)
        return self.next()

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.value == ch

    # -------------------------------------------------------------- atoms

    def parse_expression(self) -> Expr:
        node = self.parse_argument()
        self.expect("END")
        if not isinstance(node, (Call, Name)):
            raise QuerySyntaxError("expected an operator call or a table name", node.span)
        return node

    def parse_argument(self) -> Node:
        tok = self.peek()
        if tok.kind == "NAME" and tok.value == "true" and not (
            self.peek(1).kind == "PUNCT" and self.peek(1).value in ".("
        ):
            self.next()
            return Pred((), span=tok.span)
        first = self.clause_or_operand()
        if isinstance(first, (tuple, PredAtom)) or self.peek().kind == "AND":
            clauses: list[tuple[PredAtom, ...]] = []
            start = tok.span[0]
            if isinstance(first, tuple):
                clauses.append(first)
            elif isinstance(first, PredAtom):
                clauses.append((first,))
            else:
                raise QuerySyntaxError("expected a comparison", self.peek().span)
            while self.peek().kind == "AND":
                self.next()
                clauses.append(self.parse_clause())
            end = clauses[-1][-1].span[1]
            return Pred(tuple(clauses), span=(start, end))
        return first

    def clause_or_operand(self):
        """An operand, a bare comparison atom, or a parenthesized clause."""
        if self.at_punct("("):
            saved = self.pos
            try:
                return self.parse_weak_selector()
            except QuerySyntaxError:
                self.pos = saved
            return self.parse_clause()
        node = self.parse_operand()
        if isinstance(node, Qualified) and self.peek().kind == "CMP":
            return self.finish_atom(node)
        return node

    def parse_clause(self) -> tuple[PredAtom, ...]:
        if self.at_punct("("):
            self.next()
            atoms = [self.parse_atom()]
            while self.peek().kind == "OR":
                self.next()
                atoms.append(self.parse_atom())
            self.expect("PUNCT", ")")
            return tuple(atoms)
        return (self.parse_atom(),)

    def parse_atom(self) -> PredAtom:
        node = self.parse_operand()
        if not isinstance(node, Qualified):
            raise QuerySyntaxError("a comparison starts with Qualifier.Name", node.span)
        if self.peek().kind != "CMP":
            raise QuerySyntaxError("expected a comparison operator", self.peek().span)
        return self.finish_atom(node)

    def finish_atom(self, left: Qualified) -> PredAtom:
        cmp = self.next().value
        tok = self.peek()
        if tok.kind == "STRING":
            self.next()
            value: str | int | float = tok.value
        elif tok.kind == "NUMBER":
            self.next()
            value = tok.value
        else:
            raise QuerySyntaxError("comparison value must be a string or a number", tok.span)
        return PredAtom(left.qualifier, left.name, cmp, value, span=(left.span[0], tok.span[1]))

    def parse_weak_selector(self) -> WeakSel:
        open_tok = self.expect("PUNCT", "(")
        names = [self.expect("NAME")]
        while self.at_punct(","):
            self.next()
            names.append(self.expect("NAME"))
        self.expect("PUNCT", ")")
        of = self.expect("NAME")
        if of.value != "of":
            raise QuerySyntaxError("expected 'of'", of.span)
        owner = self.expect("NAME")
        return WeakSel(
            tuple(t.value for t in names), owner.value,
            span=(open_tok.span[0], owner.span[1]),
        )

    def parse_operand(self) -> Node:
        tok = self.peek()
        if tok.kind == "STRING":
            self.next()
            return Str(tok.value, span=tok.span)
        if tok.kind == "NUMBER":
            self.next()
            return Num(tok.value, span=tok.span)
        if self.at_punct("{"):
            return self.parse_term_set()
        if self.at_punct("("):
            return self.parse_weak_selector()
        if tok.kind == "NAME":
            self.next()
            if self.at_punct("("):
                return self.parse_callish(tok)
            if self.at_punct("."):
                self.next()
                attr = self.expect("NAME")
                return Qualified(tok.value, attr.value, span=(tok.span[0], attr.span[1]))
            return Name(tok.value, span=tok.span)
        raise QuerySyntaxError(f"unexpected {tok.value!r}", tok.span)

    def parse_callish(self, head: _Token) -> Node:
        """NAME '(' ... ')': an operator call, fn(measure), or Param(weak...)."""
        name = head.value
        self.expect("PUNCT", "(")
        if name in ARITY:
            args: list[Node] = []
            if not self.at_punct(")"):
                args.append(self.parse_argument())
                while self.at_punct(","):
                    self.next()
                    args.append(self.parse_argument())
            close = self.expect("PUNCT", ")")
            span = (head.span[0], close.span[1])
            if len(args) != ARITY[name]:
                raise ArityError(
                    f"{name} takes {ARITY[name]} arguments, got {len(args)}", span
                )
            return Call(name, tuple(args), span=span)
        if name in AGGREGATE_FNS:
            inner = self.expect("NAME")
            close = self.expect("PUNCT", ")")
            return Term(name, inner.value, span=(head.span[0], close.span[1]))
        if name.isupper():
            raise UnknownOperator(f"unknown operator {name!r}", head.span)
        names = [self.expect("NAME")]
        while self.at_punct(","):
            self.next()
            names.append(self.expect("NAME"))
        close = self.expect("PUNCT", ")")
        return ParamSel(
            name, tuple(t.value for t in names), span=(head.span[0], close.span[1])
        )

    def parse_term_set(self) -> TermSet:
        open_tok = self.expect("PUNCT", "{")
        terms = [self.parse_term()]
        while self.at_punct(","):
            self.next()
            terms.append(self.parse_term())
        close = self.expect("PUNCT", "}")
        return TermSet(tuple(terms), span=(open_tok.span[0], close.span[1]))

    def parse_term(self) -> Term:
        fn = self.expect("NAME")
        if fn.value not in AGGREGATE_FNS:
            raise QuerySyntaxError(
                f"expected an aggregation ({', '.join(AGGREGATE_FNS)})", fn.span
            )
        self.expect("PUNCT", "(")
        inner = self.expect("NAME")
        close = self.expect("PUNCT", ")")
        return Term(fn.value, inner.value, span=(fn.span[0], close.span[1]))


def parse(src: str) -> Expr:
    """Parse one expression; raises QuerySyntaxError / UnknownOperator / ArityError."""
    return _Parser(src).parse_expression()


def parse_statement(src: str) -> tuple[str | None, Expr]:
    """Parse `name := EXPR` or a bare expression."""
    tokens = _lex(src)
    if len(tokens) >= 2 and tokens[0].kind == "NAME" and tokens[1].kind == "ASSIGN":
        p = _Parser(src)
        p.pos = 2
        node = p.parse_argument()
        p.expect("END")
        if not isinstance(node, (Call, Name)):
            raise QuerySyntaxError("expected an operator call or a table name", node.span)
        return tokens[0].value, node
    return None, parse(src)


# --------------------------------------------------------------------------
# Printer
# --------------------------------------------------------------------------

def _print_value(v: str | int | float) -> str:
    if isinstance(v, str):
        return "'" + v.replace("\\", "\\\\").replace("'", "\\'") + "'"
    return repr(v)


def print_expr(node: Node) -> str:
    """Canonical text of a syntax tree; parse(print_expr(e)) == e."""
    if isinstance(node, Name):
        return node.value
    if isinstance(node, Str):
        return _print_value(node.value)
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Qualified):
        return f"{node.qualifier}.{node.name}"
    if isinstance(node, Term):
        return f"{node.fn}({node.name})"
    if isinstance(node, TermSet):
        return "{" + ", ".join(print_expr(t) for t in node.terms) + "}"
    if isinstance(node, ParamSel):
        return node.name + (f"({', '.join(node.weak)})" if node.weak else "")
    if isinstance(node, WeakSel):
        return f"({', '.join(node.weak)}) of {node.owner}"
    if isinstance(node, PredAtom):
        return f"{node.qualifier}.{node.name} {node.cmp} {_print_value(node.value)}"
    if isinstance(node, Pred):
        if not node.clauses:
            return "true"
        parts = []
        for clause in node.clauses:
            text = " OR ".join(print_expr(a) for a in clause)
            parts.append(f"({text})" if len(clause) > 1 else text)
        return " AND ".join(parts)
    if isinstance(node, Call):
        return f"{node.op}(" + ", ".join(print_expr(a) for a in node.args) + ")"
    raise TypeError(f"not a syntax node: {node!r}")


# --------------------------------------------------------------------------
# Evaluator
# --------------------------------------------------------------------------

def _want(node: Node, kind: type, what: str) -> Node:
    if not isinstance(node, kind):
        raise QueryError(f"expected {what}", node.span)
    return node


def _name(node: Node) -> str:
    return _want(node, Name, "a name").value


def _string(node: Node) -> str:
    return _want(node, Str, "a quoted string").value


def _value(node: Node):
    if isinstance(node, (Str, Num)):
        return node.value
    raise QueryError("expected a literal value", node.span)


def _measures(node: Node) -> list[tuple[str, str]]:
    return [(t.fn, t.name) for t in _want(node, TermSet, "a measure set {FN(m), ...}").terms]


def _term(node: Node) -> tuple[str, str]:
    t = _want(node, Term, "an aggregated measure FN(m)")
    return t.fn, t.name


def _selector(node: Node):
    if isinstance(node, Name):
        return ParamUnit(node.value)
    if isinstance(node, ParamSel):
        return ParamUnit(node.name, node.weak)
    if isinstance(node, WeakSel):
        return WeakUnit(node.owner, node.weak)
    raise QueryError("expected an attribute selector", node.span)


def _pred(node: Node) -> Restriction:
    p = _want(node, Pred, "a predicate")
    return Restriction(tuple(
        tuple(Atom(a.qualifier, a.name, a.cmp, a.value) for a in clause)
        for clause in p.clauses
    ))


def strip_comment(line: str) -> str:
    """Drop a trailing # comment, ignoring # inside string literals."""
    quoted = False
    i = 0
    while i < len(line):
        ch = line[i]
        if ch == "\\" and quoted:
            i += 2
            continue
        if ch == "'":
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
        i += 1
    return line


def iter_statements(text: str):
    """Yield (line_number, statement_text) for the non-blank lines of a script."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stmt = strip_comment(raw).strip()
        if stmt:
            yield lineno, stmt


class Workspace:
    """Named tables plus an auto-naming counter for unnamed results."""

    def __init__(self, ds: Dataset):
        self.ds = ds
        self.env: dict[str, MultidimensionalTable] = {}
        self._counter = 0

    def fresh_name(self) -> str:
        self._counter += 1
        while f"T{self._counter}" in self.env:
            self._counter += 1
        return f"T{self._counter}"

    def run(self, text: str) -> tuple[str, MultidimensionalTable]:
        """Parse and evaluate one statement; bind and return (name, table)."""
        name, expr = parse_statement(text)
        tm = evaluate(self.ds, expr, self.env)
        if name is None:
            name = expr.value if isinstance(expr, Name) else self.fresh_name()
        self.env[name] = tm
        return name, tm


def evaluate(ds: Dataset, expr: Expr, env: dict[str, MultidimensionalTable]) -> MultidimensionalTable:
    """Evaluate innermost-first against env; env itself is never modified.

    Operator failures come back as EvaluationError carrying the source
    span of the failing call and the original error.
    """
    if isinstance(expr, Name):
        try:
            return env[expr.value]
        except KeyError:
            raise UnboundName(f"no table named {expr.value!r}", expr.span) from None
    if not isinstance(expr, Call):
        raise QueryError("expected an operator call or a table name", expr.span)

    a = expr.args
    try:
        if expr.op == "DISPLAY":
            return core_ops.display(
                ds, _string(a[0]), _name(a[1]), _measures(a[2]),
                _name(a[3]), _name(a[4]), _name(a[5]), _name(a[6]),
            )
        t = evaluate(ds, a[0], env)
        if expr.op == "DROTATE":
            return core_ops.drotate(ds, t, _name(a[1]), _name(a[2]), _name(a[3]))
        if expr.op == "DRILLDOWN":
            return core_ops.drilldown(ds, t, _name(a[1]), _selector(a[2]))
        if expr.op == "ROLLUP":
            return core_ops.rollup(ds, t, _name(a[1]), _name(a[2]))
        if expr.op == "NEST":
            return core_ops.nest(ds, t, _name(a[1]), _name(a[2]), _name(a[3]), _name(a[4]))
        if expr.op == "SELECT":
            return core_ops.select(ds, t, _pred(a[1]))
        if expr.op == "SWITCH":
            return core_ops.switch(ds, t, _name(a[1]), _name(a[2]), _value(a[3]), _value(a[4]))
        if expr.op == "AGREGATE":
            fn, att = _term(a[2])
            return core_ops.agregate(ds, t, _name(a[1]), fn, att)
        if expr.op == "UNAGREGATE":
            return core_ops.unagregate(ds, t)
        if expr.op == "PUSH":
            return core_ops.push(ds, t, _name(a[1]), _name(a[2]))
        if expr.op == "PULL":
            fn, m = _term(a[1])
            return core_ops.pull(ds, t, fn, m, _name(a[2]))
        if expr.op == "ADDM":
            fn, m = _term(a[1])
            return core_ops.addm(ds, t, fn, m)
        if expr.op == "DELM":
            fn, m = _term(a[1])
            return core_ops.delm(ds, t, fn, m)
        if expr.op == "HROTATE":
            return derived_ops.hrotate(ds, t, _name(a[1]), _name(a[2]))
        if expr.op == "PLOT":
            return derived_ops.plot(ds, t, _name(a[1]), _selector(a[2]))
        if expr.op == "ORDER":
            return derived_ops.order(ds, t, _name(a[1]), _name(a[2]), _name(a[3]))
        if expr.op == "FROTATE":
            return derived_ops.frotate(ds, t, _name(a[1]), _measures(a[2]))
        if expr.op == "UNSELECT":
            return derived_ops.unselect(ds, t)
        if expr.op == "HISTORY":
            return derived_ops.history(ds, t, _name(a[1]), evaluate(ds, a[2], env))
        raise UnknownOperator(f"unknown operator {expr.op!r}", expr.span)
    except QueryError:
        raise
    except OlapError as exc:
        raise EvaluationError(f"{expr.op}: {exc}", expr.span, exc) from exc
