import pytest
from hypothesis import given

from helpers import formulas
from slcs.logic import (
    DERIVED_KINDS,
    And,
    Atom,
    Bottom,
    Implies,
    Near,
    Not,
    Or,
    ParseError,
    Prop,
    Reach,
    Surr,
    Top,
    desugar,
    is_core,
    parse,
    render,
    subformulas,
)

a, b, c = Atom("a"), Atom("b"), Atom("c")


@pytest.mark.parametrize(
    "text, tree",
    [
        ("p0 & !(N p1)", And(Atom("p0"), Not(Near(Atom("p1"))))),
        ("p1 R p0", Reach(Atom("p1"), Atom("p0"))),
        ("a S b", Surr(a, b)),
        ("a P b", Prop(a, b)),
        ("true", Top()),
        ("false", Bottom()),
        ("a & b & c", And(And(a, b), c)),
        ("a | b | c", Or(Or(a, b), c)),
        ("a -> b -> c", Implies(a, Implies(b, c))),
        ("a | b & c", Or(a, And(b, c))),
        ("!a & b", And(Not(a), b)),
        ("N !N a", Near(Not(Near(a)))),
        ("a & b R c | a", Reach(And(a, b), Or(c, a))),
        ("(a R b) P c", Prop(Reach(a, b), c)),
        ("a -> b R c", Reach(Implies(a, b), c)),
        ("Np & NR", And(Atom("Np"), Atom("NR"))),
        ("N(p)", Near(Atom("p"))),
    ],
)
def test_parse(text, tree):
    assert parse(text) == tree


def test_surrounded_desugars_to_reach():
    expected = And(a, Not(Reach(a, Not(Or(a, b)))))
    assert desugar(parse("a S b")) == desugar(expected)
    assert desugar(Surr(a, b)) == And(a, Not(Reach(a, Not(Not(And(Not(a), Not(b)))))))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("a R b R c", 1, 7),
        ("a & ", 1, 5),
        ("a - b", 1, 3),
        ("(a & b", 1, 7),
        ("a b", 1, 3),
        ("N", 1, 2),
        ("a &\n  # b", 2, 3),
        ("R a", 1, 1),
        ("a P b S c", 1, 7),
    ],
)
def test_parse_errors(text, line, column):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_reserved_words_are_not_atoms():
    with pytest.raises(ValueError):
        Atom("N")
    with pytest.raises(ValueError):
        Atom("true")
    with pytest.raises(ValueError):
        Atom("1x")


@pytest.mark.parametrize(
    "tree, text",
    [
        (Atom("p"), "p"),
        (Near(And(a, b)), "N (a & b)"),
        (Reach(a, Reach(b, c)), "a R (b R c)"),
        (Not(Near(a)), "!N a"),
        (And(a, And(b, c)), "a & (b & c)"),
        (And(And(a, b), c), "a & b & c"),
        (Implies(Implies(a, b), c), "(a -> b) -> c"),
        (Implies(a, Implies(b, c)), "a -> b -> c"),
        (Or(a, And(b, c)), "a | b & c"),
        (And(Or(a, b), c), "(a | b) & c"),
        (Reach(Or(a, b), Implies(b, c)), "a | b R b -> c"),
        (Implies(Reach(a, b), c), "(a R b) -> c"),
        (Not(Top()), "!true"),
    ],
)
def test_render(tree, text):
    assert render(tree) == text
    assert parse(text) == tree


@given(formulas(max_depth=4))
def test_round_trip(f):
    assert parse(render(f)) == f


@given(formulas(max_depth=4))
def test_desugar_is_core_and_idempotent(f):
    d = desugar(f)
    assert is_core(d)
    assert not any(isinstance(g, DERIVED_KINDS) for g in subformulas(d))
    assert desugar(d) == d


def test_desugar_examples():
    assert desugar(Bottom()) == Not(Top())
    assert desugar(Or(a, b)) == Not(And(Not(a), Not(b)))
    assert desugar(Implies(a, b)) == Not(And(a, Not(b)))
