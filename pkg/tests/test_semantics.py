import random

import pytest

from boolsolve import (
    And,
    Atom,
    BOT,
    Not,
    Or,
    TOP,
    TruthTable,
    UnboundAtom,
    entails,
    equivalent,
    evaluate,
    exists,
    formula_from_table,
    free_atoms,
    is_substitutible,
    is_valid,
    parse,
    simplify,
    substitute,
    truth_table,
)
from genutil import QUANT_POOL, random_formula


def test_evaluate():
    assert evaluate(parse("a -> b"), {"a": True, "b": False}) is False
    assert evaluate(parse("exists p . p & a"), {"a": True}) is True
    assert evaluate(parse("forall p . p | a"), {"a": False}) is False
    with pytest.raises(UnboundAtom):
        evaluate(parse("a & b"), {"a": True})


def test_is_valid():
    assert is_valid(parse("a | ~a"))
    assert is_valid(parse("exists p . (p <-> a)"))
    assert not is_valid(parse("a -> b"))


def test_entails_equivalent():
    assert equivalent(parse("~(a & b)"), parse("~a | ~b"))
    assert entails(parse("a & b"), parse("a"))
    assert not entails(parse("a"), parse("a & b"))


def test_truth_table_encoding():
    # basis sorted ascending, atom i contributes bit i, index 0 leftmost
    t = truth_table(parse("a & ~b"), ["a", "b"])
    assert t.basis == ("a", "b")
    assert t.bit_string() == "0100"
    assert truth_table(TOP, ["a"]).bit_string() == "11"
    assert truth_table(parse("exists p . p & a"), ["a"]) == truth_table(
        Atom("a"), ["a"]
    )
    assert t.to_text() == "basis: a b\nbits: 0100"


def test_truth_table_requires_basis_coverage():
    with pytest.raises(UnboundAtom):
        truth_table(parse("a & c"), ["a", "b"])


def test_formula_from_table():
    assert formula_from_table(TruthTable(("a",), (False, False))) == BOT
    assert formula_from_table(TruthTable(("a",), (True, True))) == TOP
    f = formula_from_table(truth_table(parse("a -> b"), ["a", "b"]))
    assert f == parse("(~a & ~b) | (~a & b) | (a & b)")
    assert equivalent(f, parse("a -> b"))


def test_table_round_trip():
    rng = random.Random(23)
    for _ in range(300):
        f = random_formula(rng, ("a", "b", "c"), depth=4, quant_pool=QUANT_POOL)
        basis = tuple(sorted(set(free_atoms(f)) | {"a", "b", "c"}))
        assert equivalent(formula_from_table(truth_table(f, basis)), f)


def test_evaluate_agrees_with_table_bits():
    rng = random.Random(29)
    for _ in range(200):
        f = random_formula(rng, ("a", "b"), depth=4, quant_pool=QUANT_POOL)
        t = truth_table(f, ("a", "b"))
        for idx, bit in enumerate(t.bits):
            valuation = {"a": bool(idx & 1), "b": bool(idx >> 1 & 1)}
            assert evaluate(f, valuation) == bit


def test_simplify_examples():
    assert simplify(parse("(a -> true) & (true -> b)")) == Atom("b")
    assert simplify(parse("~~a")) == Atom("a")
    assert simplify(parse("a & a")) == Atom("a")
    assert simplify(parse("a -> false")) == Not(Atom("a"))
    assert simplify(parse("exists p . a")) == Atom("a")
    # no complement rule: parameters must survive simplification
    assert simplify(parse("t | ~t")) == Or(Atom("t"), Not(Atom("t")))


def test_simplify_preserves_tables():
    rng = random.Random(31)
    for _ in range(400):
        f = random_formula(rng, ("a", "b", "c"), depth=5, quant_pool=QUANT_POOL)
        basis = tuple(sorted(set(free_atoms(f)) | {"a"}))
        assert truth_table(simplify(f), basis) == truth_table(f, basis)


def test_expansion_law():
    rng = random.Random(37)
    for _ in range(200):
        f = random_formula(rng, ("p", "a", "b"), depth=4)
        expanded = Or(substitute(f, ["p"], [TOP]), substitute(f, ["p"], [BOT]))
        assert is_valid(exists(["p"], f)) == is_valid(expanded)


def test_distribution_through_selector():
    # f[p := (s & v) | (~s & w)] splits into the two selector cases
    rng = random.Random(41)
    done = 0
    while done < 200:
        f = random_formula(rng, ("p", "a", "b"), depth=4, quant_pool=QUANT_POOL)
        v = random_formula(rng, ("a", "b"), depth=2)
        w = random_formula(rng, ("a", "b"), depth=2)
        s = random_formula(rng, ("a", "b"), depth=2)
        mixed = Or(And(s, v), And(Not(s), w))
        if not is_substitutible([mixed], ["p"], f):
            continue
        lhs = substitute(f, ["p"], [mixed])
        rhs = Or(
            And(s, substitute(f, ["p"], [v])),
            And(Not(s), substitute(f, ["p"], [w])),
        )
        assert equivalent(lhs, rhs)
        done += 1
