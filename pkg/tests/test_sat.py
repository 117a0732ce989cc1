import random

import pytest

from mwthard.embedding import UP, layout, validate_embedding
from mwthard.sat import (Formula1in3, FreshNamer, MalformedInstance, Planar3SatInstance, TooLarge,
                         brute_force_1in3, brute_force_cnf, build_gadget, check_1in3, format_instance,
                         inequality_gadget, one_in_three_count, parse_instance, parse_literal,
                         random_planar_instance, solve_1in3, transform_instance)


def test_single_clause():
    r = brute_force_1in3(Formula1in3(("a", "b", "c"), [("a", "b", "c")]))
    assert r.satisfiable and r.model_count == 3
    assert r.witness == {"a": 1, "b": 0, "c": 0}


def test_inequality_gadget_forced():
    fresh = FreshNamer(("x", "y"))
    g = inequality_gadget("x", "y", fresh)
    assert len(g.clauses) == 4 and len(g.fresh) == 4
    f = Formula1in3.from_clauses(g.clauses)
    assert not brute_force_1in3(f, {"x": 1, "y": 1}).satisfiable
    assert brute_force_1in3(f, {"x": 1, "y": 0}).satisfiable


def test_equality_forces_equal():
    g = build_gadget("equality", "x", "y", FreshNamer(("x", "y")))
    f = Formula1in3.from_clauses(g.clauses)
    for x in (0, 1):
        for y in (0, 1):
            assert brute_force_1in3(f, {"x": x, "y": y}).satisfiable == (x == y)


def test_inequality_with_itself():
    with pytest.raises(MalformedInstance):
        Formula1in3.from_clauses(inequality_gadget("x", "x", FreshNamer(("x",))).clauses)


def test_formula_invariants():
    with pytest.raises(MalformedInstance):
        Formula1in3(("a", "b"), [("a", "b", "b")])
    with pytest.raises(MalformedInstance):
        Formula1in3(("a", "b", "c"), [("a", "b", "d")])


def test_too_large():
    names = tuple(f"v{k}" for k in range(30))
    with pytest.raises(TooLarge):
        brute_force_1in3(Formula1in3(names, [names[:3]]))


def test_solvers_agree():
    rng = random.Random(9)
    for _ in range(150):
        n = rng.randint(3, 9)
        names = [f"v{k}" for k in range(n)]
        clauses = [tuple(rng.sample(names, 3)) for _ in range(rng.randint(1, 6))]
        f = Formula1in3(tuple(names), clauses)
        a = brute_force_1in3(f)
        b = solve_1in3(f.clauses, f.variables)
        assert a.satisfiable == b.satisfiable
        if b.satisfiable:
            assert check_1in3(f.clauses, b.witness)


def _inst(clauses, names):
    lits = [tuple(parse_literal(t) for t in c) for c in clauses]
    emb = layout(list(names), [tuple(v for v, _ in c) for c in lits])
    return Planar3SatInstance(tuple(names), lits, emb)


def test_figure_formula():
    inst = _inst([("x1", "~x3", "x5"), ("~x1", "x2", "x3"), ("x2", "x4", "~x5")], ["x1", "x2", "x3", "x4", "x5"])
    res = transform_instance(inst)
    f = res.formula
    assert brute_force_cnf(inst.variables, inst.clauses).satisfiable
    assert solve_1in3(f.clauses, f.variables).satisfiable
    assert all(not v.startswith(("~", "-")) for c in f.clauses for v in c)
    assert validate_embedding(res.embedding, f.clauses).ok


def test_unit_and_contradiction():
    one = transform_instance(_inst([("x",)], ["x"]))
    assert solve_1in3(one.formula.clauses, one.formula.variables).satisfiable
    bad = transform_instance(_inst([("x",), ("~x",)], ["x"]))
    assert not solve_1in3(bad.formula.clauses, bad.formula.variables).satisfiable


def test_instance_round_trip():
    inst = random_planar_instance(random.Random(2), 4, 3)
    text = format_instance(inst)
    back = parse_instance(text)
    assert format_instance(back) == text
    res = transform_instance(inst)
    t2 = format_instance(res.formula, res.embedding)
    f, emb = parse_instance(t2)
    assert format_instance(f, emb) == t2


def test_parse_errors():
    with pytest.raises(MalformedInstance):
        parse_instance("t a b c\n")
    with pytest.raises(MalformedInstance):
        parse_instance("p 1in3 3 2\nx a b c\nt a b c\n")


def test_count_with_fixed():
    r = one_in_three_count([("a", "b", "c"), ("c", "d", "e")], fixed={"c": 1})
    assert r.satisfiable and r.model_count == 1
