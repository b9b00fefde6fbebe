import pytest
from hypothesis import given, strategies as hs

from trilogic.errors import ArityError, ArityMismatch, FormulaSyntaxError, SortError, UnknownPredicate, UnknownRelation
from trilogic.logic import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Not,
    Or,
    RelAtom,
    check,
    free_vars,
    parse,
    parse_queries,
    quantifier_depth,
    to_text,
)
from trilogic.model import Schema

from pathlib import Path

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def test_parse_shapes():
    f = parse("exists t2 (R(t2) & PartOf(t1, t2))")
    assert isinstance(f, Exists) and isinstance(f.body, And)
    assert free_vars(f) == ["t1"]
    g = parse("PartOf(a,b) | !PartOf(b,a)")
    assert g == Or((Atom("PartOf", ("a", "b")), Not(Atom("PartOf", ("b", "a")))))


def test_precedence():
    assert parse("!A(x) & B(y) | C(z)") == Or((And((Not(RelAtom("A", ("x",))), RelAtom("B", ("y",)))), RelAtom("C", ("z",))))
    # implication is sugar for a disjunction and binds loosest
    assert parse("A(x) & B(x) -> C(x)") == Or((Not(And((RelAtom("A", ("x",)), RelAtom("B", ("x",))))), RelAtom("C", ("x",))))
    # an unparenthesized quantifier body extends to the right
    assert parse("exists x A(x) & B(x)") == Exists("x", And((RelAtom("A", ("x",)), RelAtom("B", ("x",)))))


def test_parse_errors():
    with pytest.raises(ArityError):
        parse("Between(t1,t2)", "PT")
    with pytest.raises(UnknownPredicate):
        parse("Cas(a,b,c,d,e,f)", "TRI")
    with pytest.raises(FormulaSyntaxError):
        parse("PartOf(a,b) &")
    with pytest.raises(FormulaSyntaxError):
        parse("PartOf(a b)")
    with pytest.raises(SortError):
        parse_queries("query Q(x: pt) := R(x) ;", "TRI")
    with pytest.raises(SortError):
        parse_queries("query Q(x) := PartOf(x, y) ;", "TRI")


def test_check_against_schema():
    schema = Schema({"R": 1, "S": 2})
    check(parse("exists t (R(t) & S(t, u))"), schema)
    with pytest.raises(ArityMismatch):
        check(parse("R(a, b)"), schema)
    with pytest.raises(UnknownRelation):
        check(parse("T(a)"), schema)
    # point languages see relations at three times the arity
    check(parse("R(a, b, c)", "PT"), schema, points=True)
    with pytest.raises(ArityMismatch):
        check(parse("R(a)", "PT"), schema, points=True)


def test_closed_formula_has_no_free_vars():
    assert free_vars(parse("forall a exists b PartOf(a, b)")) == []
    assert free_vars(parse("PartOf(b, a) & exists b PartOf(a, b)")) == ["b", "a"]


def test_queries_may_call_earlier_queries():
    qs = parse_queries("""
        query Inside(t) := exists u (R(u) & PartOf(t, u)) ;   # a comment
        query Both(t) := Inside(t) & Point(t) ;
    """)
    assert list(qs) == ["Inside", "Both"]
    assert qs["Both"].params == ("t",)
    assert "Point(t)" in to_text(qs["Both"].formula)
    assert not any(isinstance(a, RelAtom) and a.rel == "Inside" for a in [qs["Both"].formula])


@pytest.mark.parametrize("name,lang", [("butterfly.q", "TRI"), ("safety.q", "TRI")])
def test_corpus_queries_parse(name, lang):
    qs = parse_queries((CORPUS / name).read_text(), lang)
    assert qs
    for q in qs.values():
        assert parse(to_text(q.formula), lang) == q.formula


def test_unicode_connectives():
    assert parse("∃t (R(t) ∧ ¬Point(t))") == parse("exists t (R(t) & !Point(t))")
    assert parse("∀t (R(t) → Point(t))") == parse("forall t (R(t) -> Point(t))")


# -- round trip on random trees --------------------------------------------------------------

VARS = ["a", "b", "c", "t1"]
leaf = hs.one_of(
    hs.builds(lambda x, y: Atom("PartOf", (x, y)), hs.sampled_from(VARS), hs.sampled_from(VARS)),
    hs.builds(lambda x: Atom("Point", (x,)), hs.sampled_from(VARS)),
    hs.builds(lambda x: RelAtom("R", (x,)), hs.sampled_from(VARS)),
    hs.builds(Eq, hs.sampled_from(VARS), hs.sampled_from(VARS)),
)


def _nary(kind):
    return lambda sub: hs.lists(sub, min_size=2, max_size=3).map(lambda ps: kind(tuple(ps)))


formulas = hs.recursive(
    leaf,
    lambda sub: hs.one_of(
        sub.map(Not),
        _nary(And)(sub),
        _nary(Or)(sub),
        hs.builds(Exists, hs.sampled_from(VARS), sub),
        hs.builds(Forall, hs.sampled_from(VARS), sub),
    ),
    max_leaves=12,
)


def _normal(f):
    """Flatten nested And/Or, which the printer cannot distinguish from n-ary ones."""
    if isinstance(f, (And, Or)):
        parts = []
        for p in map(_normal, f.parts):
            parts.extend(p.parts if type(p) is type(f) else (p,))
        return type(f)(tuple(parts))
    if isinstance(f, Not):
        return Not(_normal(f.body))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, _normal(f.body))
    return f


@given(formulas)
def test_print_parse_round_trip(f):
    g = parse(to_text(f))
    assert g == _normal(f)
    assert parse(to_text(g)) == g
    assert free_vars(g) == free_vars(f)
    assert quantifier_depth(g) == quantifier_depth(f)
