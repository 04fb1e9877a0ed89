"""The loop-homology BV algebra of a model.

The ring is the free graded-commutative algebra on a_i (odd, degree -d_i)
and u_i (even, degree d_i - 1); the unit is the class of constant loops.
The BV operator is the second-order odd differential operator

    Delta = sum_i (d/du_i) o (d/da_i),

where d/da_i is a left derivation (a factor of -1 for each odd generator
standing before a_i) and d/du_i the plain partial derivative.  The bracket
is not a separate structure: it is defined through the BV identity

    {b, c} = (-1)^{|b|} (Delta(b*c) - Delta(b)*c - (-1)^{|b|} b*Delta(c)),

extended bilinearly over the homogeneous components of b.  With these
conventions {a_i, u_j} = -delta_ij.
"""

from __future__ import annotations

from fractions import Fraction

from .kernel import (
    AlgebraError,
    Element,
    ModelSpec,
    Monomial,
    Ring,
    sign_pow,
)


def loop_unit(model: ModelSpec) -> Element:
    """s_*[M], the class of constant loops; unit of the loop product."""
    return Element.unit(model, Ring.LOOP)


def a(model: ModelSpec, index: int) -> Element:
    return Element.generator(model, Ring.LOOP, "odd", index)


def u(model: ModelSpec, index: int) -> Element:
    return Element.generator(model, Ring.LOOP, "even", index)


def _require_loop(x: Element, op: str):
    if x.ring is not Ring.LOOP:
        raise AlgebraError("%s: expected a loop-homology class, got %s" % (op, x.ring.value))


def loop_product(b: Element, c: Element) -> Element:
    _require_loop(b, "loop_product")
    _require_loop(c, "loop_product")
    return b * c


def bv_delta(b: Element) -> Element:
    _require_loop(b, "bv_delta")
    terms = {}
    for mono, coeff in b.terms.items():
        for pos, i in enumerate(mono.odds):
            k = mono.exps[i - 1]
            if k == 0:
                continue
            odds = mono.odds[:pos] + mono.odds[pos + 1:]
            exps = list(mono.exps)
            exps[i - 1] = k - 1
            new = Monomial(odds, tuple(exps))
            # d/da_i passes over `pos` odd generators; d/du_i brings down k
            contrib = coeff * k * sign_pow(pos)
            acc = terms.get(new, Fraction(0)) + contrib
            if acc == 0:
                terms.pop(new, None)
            else:
                terms[new] = acc
    return Element(b.model, Ring.LOOP, terms)


def loop_bracket(b: Element, c: Element) -> Element:
    _require_loop(b, "loop_bracket")
    _require_loop(c, "loop_bracket")
    if b.model != c.model:
        raise AlgebraError("loop_bracket: model mismatch (%r vs %r)" % (b.model.name, c.model.name))
    result = Element.zero(b.model, Ring.LOOP)
    delta_c = bv_delta(c)
    for deg, part in b.homogeneous_components().items():
        s = sign_pow(deg)
        result = result + (
            bv_delta(part * c) - bv_delta(part) * c - (part * delta_c).scale(s)
        ).scale(s)
    return result


def is_constant_loop_class(b: Element) -> bool:
    """True when b lies in the image of s_*, i.e. uses no u generators."""
    _require_loop(b, "is_constant_loop_class")
    return all(not any(mono.exps) for mono in b.terms)


def s_star(x: Element) -> Element:
    """Include a class of the base manifold into loop homology.

    Base homology classes are written in the exterior generators a_i, so the
    inclusion is the identity on the stored data; the point of the map is the
    subring check.
    """
    _require_loop(x, "s_star")
    if not is_constant_loop_class(x):
        raise AlgebraError("s_star: input is not in the exterior subring (has u factors)")
    return x
