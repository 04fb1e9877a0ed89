"""The loop-space cohomology ring of a model and Poincare duality.

The full ring is free graded-commutative on alpha_i (odd, degree d_i) and
v_i (even, degree d_i - 1); the base subring H^*(M) is exterior on the
alpha_i alone.  The circle-action operator is the odd derivation of degree
-1 fixed on generators by

    coh_delta(alpha_i) = v_i,      coh_delta(v_i) = 0,

so v_i is an independent ring generator that coh_delta identifies with the
image of alpha_i.  Poincare duality D maps the exterior subring of loop
homology multiplicatively onto the base subring, D(a_i) = alpha_i; its
inverse realises base cohomology classes as constant-loop homology classes.
"""

from __future__ import annotations

from fractions import Fraction

from .kernel import AlgebraError, Element, ModelSpec, Monomial, Ring, sign_pow
from .loop import is_constant_loop_class


def coh_unit(model: ModelSpec) -> Element:
    return Element.unit(model, Ring.COH)


def base_unit(model: ModelSpec) -> Element:
    return Element.unit(model, Ring.BASE)


def alpha(model: ModelSpec, index: int, ring: Ring = Ring.COH) -> Element:
    return Element.generator(model, ring, "odd", index)


def v(model: ModelSpec, index: int) -> Element:
    return Element.generator(model, Ring.COH, "even", index)


def _require_coh(x: Element, op: str):
    if x.ring not in (Ring.COH, Ring.BASE):
        raise AlgebraError("%s: expected a cohomology class, got %s" % (op, x.ring.value))


def cup(x: Element, y: Element) -> Element:
    _require_coh(x, "cup")
    _require_coh(y, "cup")
    return x * y


def coh_delta(x: Element) -> Element:
    """The odd derivation with coh_delta(alpha_i) = v_i; squares to zero."""
    _require_coh(x, "coh_delta")
    out = {}
    for mono, coeff in x.terms.items():
        for pos, i in enumerate(mono.odds):
            odds = mono.odds[:pos] + mono.odds[pos + 1:]
            exps = list(mono.exps)
            exps[i - 1] += 1
            new = Monomial(odds, tuple(exps))
            # the derivation passes over `pos` odd generators; v_i is even,
            # so sliding it into the exponent block costs nothing
            contrib = coeff * sign_pow(pos)
            acc = out.get(new, Fraction(0)) + contrib
            if acc == 0:
                out.pop(new, None)
            else:
                out[new] = acc
    return Element(x.model, Ring.COH, out)


def is_base(x: Element) -> bool:
    """True when the class lies in the base subring (no v factors)."""
    _require_coh(x, "is_base")
    return all(not any(mono.exps) for mono in x.terms)


def decompose_monomial(mono: Monomial) -> tuple[Monomial, tuple[int, ...]]:
    """Split a cohomology monomial into its exterior part and v exponents.

    All v_i are even, so no reordering sign arises.
    """
    base_part = Monomial(mono.odds, (0,) * len(mono.exps))
    return base_part, mono.exps


def to_full(x: Element) -> Element:
    """Include a base-cohomology class into the full cohomology ring."""
    if x.ring is Ring.COH:
        return x
    if x.ring is not Ring.BASE:
        raise AlgebraError("to_full: expected a cohomology class, got %s" % x.ring.value)
    return Element(x.model, Ring.COH, x.terms)


def to_base(x: Element) -> Element:
    """Project-check a full cohomology class into the base subring."""
    if x.ring is Ring.BASE:
        return x
    _require_coh(x, "to_base")
    if not is_base(x):
        raise AlgebraError("to_base: class has v factors, not in the base subring")
    return Element(x.model, Ring.BASE, x.terms)


def poincare_dual(x: Element) -> Element:
    """D: exterior loop-homology classes to base cohomology, D(a_i) = alpha_i.

    Multiplicative by construction, D(x*y) = D(x) cup D(y): the Koszul signs
    for reordering the a_i and the alpha_i are identical.
    """
    if x.ring is not Ring.LOOP:
        raise AlgebraError("poincare_dual: expected a loop-homology class, got %s" % x.ring.value)
    if not is_constant_loop_class(x):
        raise AlgebraError("poincare_dual: input is not in the exterior subring (has u factors)")
    return Element(x.model, Ring.BASE, x.terms)


def poincare_dual_inverse(w: Element) -> Element:
    """D^{-1}: base cohomology back to constant-loop homology classes."""
    if w.ring is Ring.COH:
        w = to_base(w)
    elif w.ring is not Ring.BASE:
        raise AlgebraError(
            "poincare_dual_inverse: expected a base-cohomology class, got %s" % w.ring.value
        )
    return Element(w.model, Ring.LOOP, w.terms)
