"""Loop homology: product, BV operator, bracket, constant-loop inclusion."""

from __future__ import annotations

import random

import pytest

from loopbv.kernel import AlgebraError, Element, ModelSpec, Ring, random_element, sign_pow
from loopbv.loop import (
    a,
    bv_delta,
    is_constant_loop_class,
    loop_bracket,
    loop_product,
    loop_unit,
    s_star,
    u,
)

from oracles import delta_oracle, bracket_of_generator_oracle

S3 = ModelSpec("s3", (3,))
SU3 = ModelSpec("su3", (3, 5))
E357 = ModelSpec("e357", (3, 5, 7))
MODELS = [S3, SU3, E357]


def _hdeg(x):
    d = x.degree()
    return d if isinstance(d, int) else 0


def _rand_loop(model, tag, trial, terms=2):
    rng = random.Random("loop|%s|%s|%d" % (model.name, tag, trial))
    d = model.dimension
    return random_element(model, Ring.LOOP, (-d - 2, 2 * d), terms, rng, even_cap=5)


# -- product -------------------------------------------------------------------


def test_loop_product_examples():
    a1, u1 = a(S3, 1), u(S3, 1)
    assert loop_product(a1, u1) == a1 * u1
    b = a1 * u1 ** 2
    assert loop_product(loop_unit(S3), b) == b
    assert loop_product(b, loop_unit(S3)) == b
    assert loop_product(a1, a1).is_zero()


def test_loop_product_requires_loop_ring():
    with pytest.raises(AlgebraError):
        loop_product(a(S3, 1), Element.generator(S3, Ring.COH, "odd", 1))
    with pytest.raises(AlgebraError, match="model mismatch"):
        loop_product(a(S3, 1), a(SU3, 1))


# -- BV operator ---------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_delta_on_ladder(k):
    a1, u1 = a(S3, 1), u(S3, 1)
    assert bv_delta(a1 * u1 ** k) == k * u1 ** (k - 1)
    assert bv_delta(u1 ** k).is_zero()


def test_delta_crossing_sign_example():
    expected = -a(SU3, 1)
    assert bv_delta(a(SU3, 1) * a(SU3, 2) * u(SU3, 2)) == expected


def test_delta_raises_degree_by_one():
    for model in MODELS:
        for trial in range(25):
            b = _rand_loop(model, "deg", trial)
            image = bv_delta(b)
            if not image.is_zero():
                assert image.degree() == _hdeg(b) + 1


@pytest.mark.parametrize("model", MODELS)
def test_delta_matches_direct_differentiation(model):
    for trial in range(60):
        b = _rand_loop(model, "oracle", trial, terms=3)
        assert bv_delta(b) == delta_oracle(b)


@pytest.mark.parametrize("model", MODELS)
def test_delta_squares_to_zero(model):
    for trial in range(60):
        b = _rand_loop(model, "dd", trial, terms=3)
        assert bv_delta(bv_delta(b)).is_zero()


def test_delta_vanishes_on_constant_classes():
    for model in MODELS:
        assert bv_delta(loop_unit(model)).is_zero()
        for trial in range(20):
            rng = random.Random("const|%s|%d" % (model.name, trial))
            x = random_element(model, Ring.LOOP, (-model.dimension, 0), 2, rng, even_cap=0)
            assert bv_delta(s_star(x)).is_zero()


# -- bracket -------------------------------------------------------------------


def test_bracket_examples():
    a1, u1 = a(S3, 1), u(S3, 1)
    assert loop_bracket(a1, u1) == -loop_unit(S3)
    assert loop_bracket(a1, a1).is_zero()
    for k in (1, 2, 4):
        assert loop_bracket(a1, u1 ** k) == -k * u1 ** (k - 1)


def test_bracket_of_generators_matches_partial_derivative_oracle():
    for model in MODELS:
        for i in range(1, model.rank + 1):
            for trial in range(25):
                b = _rand_loop(model, "gen|%d" % i, trial, terms=3)
                assert loop_bracket(a(model, i), b) == bracket_of_generator_oracle(model, i, b)


def test_bracket_degree_and_bilinearity():
    for trial in range(25):
        b = _rand_loop(SU3, "deg1", trial)
        c = _rand_loop(SU3, "deg2", trial)
        br = loop_bracket(b, c)
        if not br.is_zero():
            assert br.degree() == _hdeg(b) + _hdeg(c) + 1
        # bilinear over inhomogeneous sums
        e = _rand_loop(SU3, "deg3", trial)
        assert loop_bracket(b + e, c) == loop_bracket(b, c) + loop_bracket(e, c)
        assert loop_bracket(c, b + e) == loop_bracket(c, b) + loop_bracket(c, e)


def test_bracket_poisson_induction_cross_check():
    # {a1, u1^k} should satisfy the inductive Poisson step
    # {a1, u1^k} = {a1, u1} u1^{k-1} + u1 {a1, u1^{k-1}}  (all signs even here)
    a1, u1 = a(S3, 1), u(S3, 1)
    for k in range(2, 7):
        direct = loop_bracket(a1, u1 ** k)
        induct = loop_bracket(a1, u1) * u1 ** (k - 1) + u1 * loop_bracket(a1, u1 ** (k - 1))
        assert direct == induct


def test_bv_identity_defines_bracket():
    for model in MODELS:
        for trial in range(40):
            b = _rand_loop(model, "bv1", trial)
            c = _rand_loop(model, "bv2", trial)
            s = sign_pow(_hdeg(b))
            lhs = bv_delta(b * c)
            rhs = bv_delta(b) * c + (b * bv_delta(c)).scale(s) + loop_bracket(b, c).scale(s)
            assert lhs == rhs


# -- constant-loop classes -------------------------------------------------------


def test_s_star_examples():
    assert s_star(loop_unit(SU3)) == loop_unit(SU3)
    both = a(SU3, 1) * a(SU3, 2)
    assert s_star(both) == both
    assert not is_constant_loop_class(u(SU3, 1))
    assert is_constant_loop_class(a(SU3, 2))
    with pytest.raises(AlgebraError, match="exterior"):
        s_star(u(SU3, 1))
