from __future__ import annotations

import random
from fractions import Fraction

import pytest

from vxcalc.charts import build_chart_cdo
from vxcalc.dsl import (Deriv, DslEvalError, DslSyntaxError, Group, Mode, Num, Product, Sum, Term, Vacuum, Var,
                        evaluate, parse_expr, parse_state, state_to_text, to_text)
from vxcalc.fock import A, FockSpace, State
from vxcalc.suites import StateSampler

CHART = build_chart_cdo(2, gram=[[1, 0], [0, 0]])
SPACE = FockSpace(CHART.table)


def random_factor(rng, depth):
    kinds = ["num", "var", "mode", "vac"] + (["deriv", "group"] if depth < 2 else [])
    k = rng.choice(kinds)
    if k == "num":
        return Num(Fraction(rng.randint(-5, 5), rng.choice([1, 1, 2, 7])))
    if k == "var":
        return Var(rng.choice(["x1", "x2", "y", "t0"]), rng.choice([1, 1, 2, -1]))
    if k == "mode":
        return Mode(rng.choice("abh"), rng.randint(1, 3), rng.randint(-4, 4))
    if k == "vac":
        return Vacuum()
    if k == "deriv":
        return Deriv(random_expr(rng, depth + 1))
    return Group(random_expr(rng, depth + 1))


def random_sum(rng, depth):
    return Sum(tuple(Term(tuple(random_factor(rng, depth) for _ in range(rng.randint(1, 3))))
                     for _ in range(rng.randint(1, 3))))


def random_expr(rng, depth=0):
    if depth < 2 and rng.random() < 0.3:
        return Product(random_sum(rng, depth), rng.randint(-3, 3), random_expr(rng, depth + 1))
    return random_sum(rng, depth)


def test_print_parse_roundtrip_on_random_trees():
    rng = random.Random(2024)
    for _ in range(200):
        tree = random_expr(rng)
        text = to_text(tree)
        assert parse_expr(text) == tree, text


def test_examples():
    tau = parse_state("a[1](-1) |0>", SPACE)
    assert tau == CHART.tau(0)
    assert parse_state("a[1](-1)|0> _(0) x1 |0>", SPACE) == State.vacuum(CHART.ring)
    with pytest.raises(DslSyntaxError) as err:
        parse_expr("a[1](-1")
    assert err.value.column == 7


@pytest.mark.parametrize("text,column", [
    ("a[1](-1", 7),
    ("a[1]", 4),
    ("+ x1", 0),
    ("x1 + ", 5),
    ("q[1](0)", 0),
    ("a[0](-1)", 0),
    ("x1 $", 3),
    ("a[1](1/2)", 5),
    ("(x1", 3),
])
def test_error_columns(text, column):
    with pytest.raises(DslSyntaxError) as err:
        parse_expr(text)
    assert err.value.column == column


def test_evaluation_errors():
    with pytest.raises(DslEvalError, match="unknown variable"):
        parse_state("z |0>", SPACE)
    with pytest.raises(DslEvalError):
        parse_state("a[3](-1)|0>", SPACE)
    with pytest.raises(DslEvalError, match="cannot act"):
        parse_state("|0> |0>", SPACE)


def test_implicit_vacuum_and_translation():
    assert parse_state("x1", SPACE) == parse_state("x1 |0>", SPACE)
    assert parse_state("d(x1)", SPACE) == parse_state("b[1](-1)|0>", SPACE)
    assert parse_state("2/3 a[2](-2) |0>", SPACE) == State.monomial(CHART.ring, ((A, 1, -2),), Fraction(2, 3))


def test_state_text_roundtrip():
    sampler = StateSampler(CHART.table, 2)
    rng = random.Random(5)
    for _ in range(50):
        s = sampler.state(rng, 3, terms=3, mixed=True)
        assert parse_state(state_to_text(s), SPACE) == s
    assert parse_state(state_to_text(State(CHART.ring)), SPACE) == State(CHART.ring)
