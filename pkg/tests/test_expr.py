"""Expression language: tokens, parsing, printing, evaluation."""

from __future__ import annotations

from fractions import Fraction

import pytest

from loopbv.expr import (
    BinOp,
    Call,
    ExpressionError,
    Gen,
    Neg,
    Num,
    Pow,
    evaluate,
    parse,
    to_text,
)
from loopbv.kernel import ModelSpec, Ring
from loopbv.loop import a, loop_unit, u
from loopbv.cohomology import alpha, v

from exprgen import corpus

S3 = ModelSpec("s3", (3,))
SU3 = ModelSpec("su3", (3, 5))


# -- parsing ------------------------------------------------------------------


def test_parse_bracket_call():
    node = parse("bracket(a1, u1^3)")
    assert node == Call("bracket", (Gen("a", 1), Pow(Gen("u", 1), 3)))


def test_parse_nested_call():
    node = parse("cap(Delta(alpha1), u1^2)")
    assert node == Call("cap", (Call("Delta", (Gen("alpha", 1),)), Pow(Gen("u", 1), 2)))


def test_parse_double_star_is_an_error_at_second_star():
    with pytest.raises(ExpressionError) as err:
        parse("a1 ** u1")
    assert err.value.line == 1 and err.value.col == 5
    assert "unexpected '*'" in str(err.value)


def test_parse_precedence():
    assert parse("1 + 2*a1") == BinOp("+", Num(Fraction(1)), BinOp("*", Num(Fraction(2)), Gen("a", 1)))
    assert parse("-u1^2") == Neg(Pow(Gen("u", 1), 2))
    assert parse("a1 - u1 - v1") == BinOp(
        "-", BinOp("-", Gen("a", 1), Gen("u", 1)), Gen("v", 1)
    )
    assert parse("(a1 + u1)^2") == Pow(BinOp("+", Gen("a", 1), Gen("u", 1)), 2)


def test_parse_rational_literals():
    assert parse("3/2") == Num(Fraction(3, 2))
    assert parse("4/2") == Num(Fraction(2))
    with pytest.raises(ExpressionError, match="zero denominator"):
        parse("1/0")


def test_parse_bad_exponents():
    with pytest.raises(ExpressionError, match="exponent"):
        parse("a1^-2")
    with pytest.raises(ExpressionError, match="exponent"):
        parse("a1^u1")
    with pytest.raises(ExpressionError, match="exponent"):
        parse("a1^3/2")


def test_parse_unknown_identifier():
    with pytest.raises(ExpressionError, match="unknown identifier 'foo'"):
        parse("foo + 1")
    with pytest.raises(ExpressionError, match="unknown identifier 'b2'"):
        parse("b2")
    with pytest.raises(ExpressionError, match="index must be >= 1"):
        parse("a0")


def test_parse_arity_errors():
    with pytest.raises(ExpressionError, match="cap expects 2"):
        parse("cap(a1)")
    with pytest.raises(ExpressionError, match="s expects 1"):
        parse("s(a1, a1)")


def test_parse_lexical_error_position():
    with pytest.raises(ExpressionError) as err:
        parse("a1 $ u1")
    assert err.value.col == 4
    with pytest.raises(ExpressionError, match="unexpected"):
        parse("a1 u1")
    with pytest.raises(ExpressionError, match="unexpected"):
        parse("")


def test_parse_intersect_lists():
    node = parse("intersect([alpha1, alpha2], [], u1)")
    assert node.func == "intersect"
    first, second, family = node.args
    assert [item for item in first.items] == [Gen("alpha", 1), Gen("alpha", 2)]
    assert second.items == ()
    assert family == Gen("u", 1)


# -- printing round trip -----------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    [
        "bracket(a1, u1^3)",
        "cap(Delta(alpha1), u1^2)",
        "-a1*u1 + 3/2*u1^4 - 2",
        "intersect([alpha1], [alpha2, alpha1], u1*u2)",
        "product(s(a1), u1)",
        "Dinv(D(a1))",
        "-(a1 + u1)^3",
        "1/2 - -u1",
        "a1 - u1 - v1 + alpha1",
    ],
)
def test_round_trip_handwritten(text):
    tree = parse(text)
    printed = to_text(tree)
    assert parse(printed) == tree
    assert to_text(parse(printed)) == printed


def test_round_trip_generated_corpus():
    for text in corpus(250, seed="round-trip", rank=3):
        tree = parse(text)
        assert parse(to_text(tree)) == tree


# -- evaluation ----------------------------------------------------------------------


def test_evaluate_bracket_example():
    value = evaluate("bracket(a1, u1)", S3)
    assert value == -loop_unit(S3)
    assert value.degree() == 0


def test_evaluate_cap_example():
    assert evaluate("cap(Delta(alpha1), u1^2)", S3) == 2 * u(S3, 1)


def test_evaluate_product_example():
    assert evaluate("product(s(a1), u1)", S3) == a(S3, 1) * u(S3, 1)


def test_evaluate_scalars():
    assert evaluate("3/2 - 1/2", S3) == Fraction(1)
    assert evaluate("2*a1 - a1", S3) == a(S3, 1)
    assert evaluate("Delta(3)", S3) == Fraction(0)
    assert evaluate("u1^0", S3) == loop_unit(S3)
    assert evaluate("2 + u1 - u1", S3) == 2 * loop_unit(S3)


def test_evaluate_cohomology_ring():
    value = evaluate("alpha1*v1^2", SU3)
    assert value == alpha(SU3, 1) * v(SU3, 1) ** 2
    assert value.ring is Ring.COH


def test_evaluate_duality_round_trip():
    assert evaluate("Dinv(D(a1*a2))", SU3) == a(SU3, 1) * a(SU3, 2)
    assert evaluate("D(a1)", SU3) == alpha(SU3, 1)


def test_evaluate_intersect():
    assert evaluate("intersect([], [alpha1], u1^2)", S3) == 2 * u(S3, 1)
    assert evaluate("intersect([alpha1], [], u1)", S3) == a(S3, 1) * u(S3, 1)


def test_evaluate_ring_mixing_diagnostics():
    with pytest.raises(ExpressionError, match="single ring.*cap"):
        evaluate("a1*alpha1", S3)
    with pytest.raises(ExpressionError, match="loop-homology"):
        evaluate("bracket(alpha1, u1)", S3)
    with pytest.raises(ExpressionError, match="cohomology"):
        evaluate("cap(u1, u1)", S3)
    with pytest.raises(ExpressionError, match="sums live in a single ring"):
        evaluate("a1 + alpha1", S3)


def test_evaluate_unknown_generator_for_model():
    with pytest.raises(ExpressionError, match="unknown identifier for model 's3': a3"):
        evaluate("a3", S3)
    with pytest.raises(ExpressionError, match="alpha9"):
        evaluate("cap(alpha9, u1)", SU3)


def test_evaluate_subring_guards():
    with pytest.raises(ExpressionError, match="exterior"):
        evaluate("s(u1)", S3)
    with pytest.raises(ExpressionError, match="exterior"):
        evaluate("D(u1)", S3)
    with pytest.raises(ExpressionError, match="base"):
        evaluate("Dinv(v1)", S3)
    with pytest.raises(ExpressionError, match="base"):
        evaluate("intersect([v1], [], u1)", S3)


def test_evaluate_inhomogeneous_intersect_rejected():
    with pytest.raises(ExpressionError, match="inhomogeneous"):
        evaluate("intersect([], [1 + alpha1], u1)", SU3)
