import pytest
from hypothesis import given, strategies as hs

from trilogic.errors import NotTriple, UnsupportedConstruct
from trilogic.logic import And, Atom, Eq, Exists, Forall, Not, Or, RelAtom, atoms, free_vars, parse, to_text
from trilogic.translate import expand_macros, lift, lift_spatial, lift_st, lower, lower_spatial, lower_st


def text(rep):
    return to_text(rep.output)


def test_part_of_lowers_to_in_triangle_conjunction():
    rep = lower_spatial(parse("PartOf(t1,t2)"))
    assert rep.output == And(tuple(Atom("InTriangle", (f"t1_{i}", "t2_1", "t2_2", "t2_3")) for i in (1, 2, 3)))
    expanded = expand_macros(rep.output, "PT")
    assert isinstance(expanded, And) and len(expanded.parts) == 3
    for part in expanded.parts:
        assert isinstance(part, Exists)
        assert [a.pred for a in atoms(part)] == ["Between", "Between"]


def test_equality_lowerings():
    six = lower(parse("t1 = t2"), "TRI", eq_mode="corners").output
    assert isinstance(six, Or) and len(six.parts) == 6
    assert all(isinstance(p, And) and all(isinstance(e, Eq) for e in p.parts) for p in six.parts)
    drawing = lower(parse("t1 = t2"), "TRI").output
    assert [a.pred for a in atoms(drawing)] == ["InTriangle"] * 6


def test_relation_lowering_and_var_map():
    rep = lower_spatial(parse("exists t2 (R(t2) & PartOf(t1, t2))"))
    assert RelAtom("R", ("t2_1", "t2_2", "t2_3")) in atoms(rep.output)
    assert rep.var_map == {"t1": ("t1_1", "t1_2", "t1_3"), "t2": ("t2_1", "t2_2", "t2_3")}
    images = [p for ps in rep.var_map.values() for p in ps]
    assert len(images) == len(set(images))
    assert free_vars(rep.output) == ["t1_1", "t1_2", "t1_3"]


def test_fresh_names_avoid_clashes():
    rep = lower_spatial(parse("PartOf(t, t_1)"))
    images = [p for ps in rep.var_map.values() for p in ps]
    assert len(set(images)) == 6
    assert "t_1" not in rep.var_map["t"]


def test_st_lowerings():
    rep = lower_st(parse("BeforeTri(s1,s2)", "TRI_ST_CAS"))
    assert Atom("Before", ("s1_1", "s2_1")) in rep.output.parts
    assert len(rep.guards) == 2 and all(a.pred == "Cotemp" for g in rep.guards for a in atoms(g))
    cas = lower_st(parse("Cas(s1,s2,s3,s4,s5,s6)", "TRI_ST_CAS")).output.parts[-1]
    assert isinstance(cas, Exists)
    assert [a.pred for a in atoms(cas)] == ["CenterOM"] * 3 + ["EqCrST"]
    assert Atom("EqCrST", ("v1", "v2", "v3", "s4_1", "s5_1", "s6_1")) in atoms(cas)
    nosp = lower(parse("NoSp(s1,s2)", "TRI_ST_V"), "TRI_ST_V").output.parts[-1]
    assert [a.pred for a in atoms(nosp)] == ["CenterOM", "CenterOM", "EqSpace"]


def test_spatial_liftings():
    between = lift_spatial(parse("Between(x1,x2,x3)", "PT")).output
    assert between.parts[:3] == tuple(Atom("Point", (x,)) for x in ("x1", "x2", "x3"))
    assert isinstance(between.parts[3], Forall)
    assert [a.args for a in atoms(between.parts[3])] == [("x1", "t1"), ("x3", "t1"), ("x2", "t1")]
    assert text(lift_spatial(parse("x1 = x2", "PT"))) == "Point(x1) & Point(x2) & x1 = x2"
    rel = lift_spatial(parse("R(x11,x12,x13)", "PT")).output.parts[-1]
    assert rel == Exists("t1", And((RelAtom("R", ("t1",)), Atom("CornerP", ("x11", "x12", "x13", "t1")))))


def test_st_liftings():
    assert text(lift_st(parse("EqSpace(u,v)", "PT_ST_V"), "PT_ST_V")) == "Point(u) & Point(v) & NoSp(u, v)"
    acc = lift_st(parse("Between(p,q,r)", "PT_ST_AC"), "PT_ST_AC").output.parts[-1]
    assert isinstance(acc, Or) and Atom("SAS", ("p", "q", "q", "r")) in acc.parts
    assert Atom("BeforeTri", ("p", "q")) in lift_st(parse("Before(p,q)", "PT_ST_A")).output.parts
    lex = lift_st(parse("EqCrST(a,b,c,d,e,f)", "PT_ST_A"), "PT_ST_A", "TRI_ST_LEX").output
    assert "Lex" in {a.pred for a in atoms(lex) if isinstance(a, Atom)}
    cas = lift_st(parse("EqCrST(a,b,c,d,e,f)", "PT_ST_A"), "PT_ST_A", "TRI_ST_CAS").output
    assert Atom("Cas", tuple("abcdef")) in atoms(cas)


def test_query_form():
    rep = lift(parse("Between(a,b,c)", "PT"), "PT", query_form=True)
    assert free_vars(rep.output) == ["t2"]
    assert rep.var_map == {"t2": ("a", "b", "c")}
    with pytest.raises(NotTriple):
        lift(parse("Between(a,b,b) & a = c & d = d", "PT"), "PT", query_form=True)
    with pytest.raises(NotTriple):
        lift(parse("a = b", "PT"), "PT", query_form=True)


def test_unsupported_and_bad_languages():
    with pytest.raises(UnsupportedConstruct):
        lower_spatial(parse("Sim(a,b)"))
    with pytest.raises(ValueError):
        lower(parse("Between(a,b,c)", "PT"), "PT")
    with pytest.raises(ValueError):
        lift(parse("Between(a,b,c)", "PT"), "PT", "TRI_ST_CAS")


def test_translation_is_deterministic():
    f = parse("forall a (R(a) -> exists b (PartOf(a, b) & !Point(b)))")
    assert text(lower_spatial(f)) == text(lower_spatial(f))
    g = parse("exists y (Between(x, y, z) & R(x, y, z))", "PT")
    assert text(lift_spatial(g)) == text(lift_spatial(g))


# -- compositionality ------------------------------------------------------------------

VARS = ["a", "b", "c"]
tri_atoms = hs.one_of(
    hs.builds(lambda x, y: Atom("PartOf", (x, y)), hs.sampled_from(VARS), hs.sampled_from(VARS)),
    hs.builds(lambda x: RelAtom("R", (x,)), hs.sampled_from(VARS)),
    hs.builds(Eq, hs.sampled_from(VARS), hs.sampled_from(VARS)),
)


@given(tri_atoms, tri_atoms)
def test_lowering_is_compositional(x, y):
    env = {"a", "b", "c"}
    whole = lower_spatial(And((x, y)))
    parts = (lower_spatial(x).output, lower_spatial(y).output)
    assert whole.output == And(tuple(q for p in parts for q in (p.parts if isinstance(p, And) else (p,))))
    assert lower_spatial(Not(x)).output == Not(lower_spatial(x).output)
    assert set(whole.var_map) <= env


@given(tri_atoms, hs.sampled_from(VARS))
def test_quantifier_lowering_binds_three_points(x, v):
    out = lower_spatial(Exists(v, x)).output
    names = []
    while isinstance(out, Exists):
        names.append(out.var)
        out = out.body
    assert names == [f"{v}_1", f"{v}_2", f"{v}_3"]
    assert not (set(free_vars(lower_spatial(Exists(v, x)).output)) & set(names))
