"""Seeded exact-equality verification of the BV identity catalog.

Every identity the engine claims is kept in one catalog, keyed by a stable
id, and checked on random homogeneous draws with exact rational equality.
Runs are deterministic: the draw for trial t of identity I under seed S
comes from ``random.Random("S|I|t")``, so a failing report can always be
replayed bit for bit from (model, seed, identity, trial).

A registry of deliberately broken primitive bundles ("mutations": one sign
flipped or one term dropped in Delta, the bracket, the product, the cap, or
the cohomology Delta) exists so tests can confirm the suite actually detects
broken algebra rather than passing vacuously.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from .kernel import (
    AlgebraError,
    Element,
    ModelSpec,
    Monomial,
    Ring,
    random_element,
    sign_pow,
)
from .loop import bv_delta, loop_bracket, s_star
from .loop import a as loop_a
from .loop import u as loop_u
from .cohomology import (
    alpha,
    coh_delta,
    poincare_dual,
    poincare_dual_inverse,
    to_full,
    v,
)
from .extended import (
    BVOps,
    STANDARD_OPS,
    ExtendedClass,
    cap,
    extended_bracket,
    extended_delta,
    extended_product,
    loop_intersection,
)

CATALOG_VERSION = "1"

# windows default to (-d-2, 2d) with this per-argument even-exponent cap:
# small enough for sub-second trials, large enough to hit all sign branches
SUITE_EVEN_CAP = 6


@dataclass(frozen=True)
class ArgSpec:
    """How to draw one random argument: a draw kind, term bound, degree window."""

    kind: str
    max_terms: int = 2
    window: tuple[int, int] | None = None


@dataclass(frozen=True)
class IdentityCase:
    identity_id: str
    statement: str
    args: tuple[ArgSpec, ...]
    evaluate: Callable  # (ops, model, args) -> list of (label, lhs, rhs)

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass
class CheckReport:
    identity: str
    model: str
    trials: int
    seed: object
    status: str  # "pass" or "fail"
    ops: str = "standard"
    catalog: str = CATALOG_VERSION
    witness: dict | None = None

    def failed(self) -> bool:
        return self.status != "pass"

    def to_json(self) -> str:
        data = {
            "identity": self.identity,
            "model": self.model,
            "trials": self.trials,
            "seed": self.seed,
            "status": self.status,
            "ops": self.ops,
            "catalog": self.catalog,
        }
        if self.witness is not None:
            data["witness"] = self.witness
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "CheckReport":
        data = json.loads(line)
        return cls(
            identity=data["identity"],
            model=data["model"],
            trials=data["trials"],
            seed=data["seed"],
            status=data["status"],
            ops=data.get("ops", "standard"),
            catalog=data.get("catalog", CATALOG_VERSION),
            witness=data.get("witness"),
        )


def reports_to_jsonl(reports) -> str:
    return "\n".join(report.to_json() for report in reports)


# ---------------------------------------------------------------------------
# random draws


def _default_window(model: ModelSpec) -> tuple[int, int]:
    d = model.dimension
    return (-d - 2, 2 * d)


def _hdeg(x) -> int:
    """Degree as an int for sign purposes; zero elements count as degree 0."""
    deg = x.degree()
    return deg if isinstance(deg, int) else 0


def _draw_extended(model: ModelSpec, rng: random.Random, max_terms: int) -> ExtendedClass:
    lo, hi = _default_window(model)
    # candidate homological degrees where either summand is populated
    from .kernel import _degree_buckets

    loop_degs = set(_degree_buckets(model, Ring.LOOP, SUITE_EVEN_CAP))
    base_degs = set(_degree_buckets(model, Ring.BASE, 0))
    candidates = sorted(
        {n for n in loop_degs if lo <= n <= hi}
        | {-k for k in base_degs if lo <= -k <= hi}
    )
    n = rng.choice(candidates)
    coh = Element.zero(model, Ring.BASE)
    loop = Element.zero(model, Ring.LOOP)
    want_coh = -n in base_degs and rng.random() < 0.6
    want_loop = n in loop_degs and (rng.random() < 0.8 or not want_coh)
    if want_coh:
        coh = random_element(model, Ring.BASE, (-n, -n), max_terms, rng)
    if want_loop:
        loop = random_element(model, Ring.LOOP, (n, n), max_terms, rng, even_cap=SUITE_EVEN_CAP)
    if coh.is_zero() and loop.is_zero():
        loop = random_element(model, Ring.LOOP, (0, 0), max_terms, rng, even_cap=SUITE_EVEN_CAP)
    return ExtendedClass(coh, loop)


def _draw_intersect_config(model: ModelSpec, rng: random.Random):
    d = model.dimension
    at_count = rng.randint(0, 3)
    free_count = rng.randint(0, 3)
    ats = [random_element(model, Ring.BASE, (0, d), 1, rng) for _ in range(at_count)]
    frees = [random_element(model, Ring.BASE, (0, d), 2, rng) for _ in range(free_count)]
    family = random_element(
        model, Ring.LOOP, _default_window(model), 2, rng, even_cap=SUITE_EVEN_CAP
    )
    return (ats, frees, family)


def _draw(spec: ArgSpec, model: ModelSpec, rng: random.Random):
    d = model.dimension
    window = spec.window if spec.window is not None else _default_window(model)
    kind = spec.kind
    if kind == "loop":
        return random_element(model, Ring.LOOP, window, spec.max_terms, rng, even_cap=SUITE_EVEN_CAP)
    if kind == "exterior":
        return random_element(model, Ring.LOOP, (-d, 0), spec.max_terms, rng, even_cap=0)
    if kind == "base":
        return random_element(model, Ring.BASE, (0, d), spec.max_terms, rng)
    if kind == "coh":
        return random_element(model, Ring.COH, (0, 2 * d), spec.max_terms, rng, even_cap=SUITE_EVEN_CAP)
    if kind == "ext":
        return _draw_extended(model, rng, spec.max_terms)
    if kind == "intersect-config":
        return _draw_intersect_config(model, rng)
    raise AlgebraError("unknown draw kind %r" % kind)


# ---------------------------------------------------------------------------
# identity evaluators

_LOOP2 = (ArgSpec("loop"), ArgSpec("loop"))
_LOOP3 = (ArgSpec("loop"), ArgSpec("loop"), ArgSpec("loop"))
_EXT2 = (ArgSpec("ext"), ArgSpec("ext"))
_EXT3 = (ArgSpec("ext"), ArgSpec("ext"), ArgSpec("ext"))


def _xc(w: Element) -> ExtendedClass:
    return ExtendedClass.from_coh(w)


def _xl(b: Element) -> ExtendedClass:
    return ExtendedClass.from_loop(b)


def _ev_model_structure(ops, model, args):
    checks = []
    r = model.rank
    lz = Element.zero(model, Ring.LOOP)
    cz = Element.zero(model, Ring.COH)
    lu = Element.unit(model, Ring.LOOP)
    for i in range(1, r + 1):
        ai, ui = loop_a(model, i), loop_u(model, i)
        ali, vi = alpha(model, i), v(model, i)
        checks.append(("coh_delta(alpha%d) = v%d" % (i, i), ops.coh_delta(ali), vi))
        checks.append(("Delta(a%d*u%d) = 1" % (i, i), ops.delta(ops.product(ai, ui)), lu))
        checks.append(("a%d^2 = 0" % i, ops.product(ai, ai), lz))
        checks.append(("alpha%d^2 = 0" % i, ali * ali, cz))
        checks.append(("Delta(a%d) = 0" % i, ops.delta(ai), lz))
        checks.append(("Delta(u%d) = 0" % i, ops.delta(ui), lz))
        checks.append(("coh_delta(v%d) = 0" % i, ops.coh_delta(vi), cz))
        for j in range(1, r + 1):
            if j != i:
                checks.append(
                    ("Delta(a%d*u%d) = 0" % (i, j), ops.delta(ops.product(ai, loop_u(model, j))), lz)
                )
        for j in range(i + 1, r + 1):
            aj, uj, vj = loop_a(model, j), loop_u(model, j), v(model, j)
            checks.append(("u%du%d = u%du%d" % (i, j, j, i), ops.product(ui, uj), ops.product(uj, ui)))
            checks.append(("v%dv%d = v%dv%d" % (i, j, j, i), vi * vj, vj * vi))
            checks.append(("a%da%d = -a%da%d" % (i, j, j, i), ops.product(ai, aj), -ops.product(aj, ai)))
    return checks


def _ev_loop_commutativity(ops, model, args):
    b, c = args
    return [
        (
            "b*c = (-1)^{|b||c|} c*b",
            ops.product(b, c),
            ops.product(c, b).scale(sign_pow(_hdeg(b) * _hdeg(c))),
        )
    ]


def _ev_loop_associativity(ops, model, args):
    b, c, e = args
    return [("(b*c)*e = b*(c*e)", ops.product(ops.product(b, c), e), ops.product(b, ops.product(c, e)))]


def _ev_loop_unit(ops, model, args):
    (b,) = args
    one = Element.unit(model, Ring.LOOP)
    return [("1*b = b", ops.product(one, b), b), ("b*1 = b", ops.product(b, one), b)]


def _ev_bracket_antisymmetry(ops, model, args):
    b, c = args
    return [
        (
            "{b,c} = -(-1)^{(|b|+1)(|c|+1)} {c,b}",
            ops.bracket(b, c),
            ops.bracket(c, b).scale(-sign_pow((_hdeg(b) + 1) * (_hdeg(c) + 1))),
        )
    ]


def _ev_bv_identity(ops, model, args):
    b, c = args
    s = sign_pow(_hdeg(b))
    lhs = ops.delta(ops.product(b, c))
    rhs = (
        ops.product(ops.delta(b), c)
        + ops.product(b, ops.delta(c)).scale(s)
        + ops.bracket(b, c).scale(s)
    )
    return [("Delta(b*c) = Delta(b)*c + (-1)^{|b|}(b*Delta(c) + {b,c})", lhs, rhs)]


def _ev_poisson(ops, model, args):
    b, c, e = args
    lhs = ops.bracket(b, ops.product(c, e))
    rhs = ops.product(ops.bracket(b, c), e) + ops.product(c, ops.bracket(b, e)).scale(
        sign_pow(_hdeg(c) * (_hdeg(b) + 1))
    )
    return [("{b,c*e} = {b,c}*e + (-1)^{|c|(|b|+1)} c*{b,e}", lhs, rhs)]


def _ev_jacobi(ops, model, args):
    b, c, e = args
    lhs = ops.bracket(b, ops.bracket(c, e))
    rhs = ops.bracket(ops.bracket(b, c), e) + ops.bracket(c, ops.bracket(b, e)).scale(
        sign_pow((_hdeg(b) + 1) * (_hdeg(c) + 1))
    )
    return [("{b,{c,e}} = {{b,c},e} + (-1)^{(|b|+1)(|c|+1)} {c,{b,e}}", lhs, rhs)]


def _ev_delta_squared(ops, model, args):
    (b,) = args
    return [("Delta(Delta(b)) = 0", ops.delta(ops.delta(b)), Element.zero(model, Ring.LOOP))]


def _ev_delta_constant(ops, model, args):
    (x,) = args
    lz = Element.zero(model, Ring.LOOP)
    return [
        ("Delta(s_star(x)) = 0", ops.delta(s_star(x)), lz),
        ("Delta(1) = 0", ops.delta(Element.unit(model, Ring.LOOP)), lz),
    ]


def _ev_operator_product(ops, model, args):
    b, c, e = args
    lhs = ops.bracket(b, ops.product(c, e)) - ops.product(c, ops.bracket(b, e)).scale(
        sign_pow((_hdeg(b) + 1) * _hdeg(c))
    )
    rhs = ops.product(ops.bracket(b, c), e)
    return [("[D_b, M_c] = M_{{b,c}} on e", lhs, rhs)]


def _ev_operator_bracket(ops, model, args):
    b, c, e = args
    lhs = ops.bracket(b, ops.bracket(c, e)) - ops.bracket(c, ops.bracket(b, e)).scale(
        sign_pow((_hdeg(b) + 1) * (_hdeg(c) + 1))
    )
    rhs = ops.bracket(ops.bracket(b, c), e)
    return [("[D_b, D_c] = D_{{b,c}} on e", lhs, rhs)]


def _ev_s_star_ring_map(ops, model, args):
    x, y = args
    return [
        ("s(x)*s(y) = s(x*y)", ops.product(s_star(x), s_star(y)), s_star(ops.product(x, y))),
        ("s(1) = 1", s_star(Element.unit(model, Ring.LOOP)), Element.unit(model, Ring.LOOP)),
    ]


def _ev_dual_multiplicative(ops, model, args):
    x, y = args
    return [
        ("D(x*y) = D(x) cup D(y)", poincare_dual(ops.product(x, y)), poincare_dual(x) * poincare_dual(y)),
        ("Dinv(D(x)) = x", poincare_dual_inverse(poincare_dual(x)), x),
    ]


def _ev_base_cap_commutes(ops, model, args):
    al, x, y = args
    alf = to_full(al)
    k = _hdeg(al)
    lhs = ops.cap(alf, ops.product(x, y))
    return [
        ("alpha cap (x*y) = (alpha cap x)*y", lhs, ops.product(ops.cap(alf, x), y)),
        (
            "alpha cap (x*y) = (-1)^{|alpha||x|} x*(alpha cap y)",
            lhs,
            ops.product(x, ops.cap(alf, y)).scale(sign_pow(k * _hdeg(x))),
        ),
    ]


def _ev_coh_delta_derivation(ops, model, args):
    x, y = args
    lhs = ops.coh_delta(x * y)
    rhs = ops.coh_delta(x) * y + (x * ops.coh_delta(y)).scale(sign_pow(_hdeg(x)))
    return [("coh_delta(x cup y) = coh_delta(x) cup y + (-1)^{|x|} x cup coh_delta(y)", lhs, rhs)]


def _ev_coh_delta_squared(ops, model, args):
    (x,) = args
    return [("coh_delta(coh_delta(x)) = 0", ops.coh_delta(ops.coh_delta(x)), Element.zero(model, Ring.COH))]


def _ev_cap_commutes_product(ops, model, args):
    al, b, c = args
    alf = to_full(al)
    k = _hdeg(al)
    lhs = ops.cap(alf, ops.product(b, c))
    return [
        ("alpha cap (b*c) = (alpha cap b)*c", lhs, ops.product(ops.cap(alf, b), c)),
        (
            "alpha cap (b*c) = (-1)^{|alpha||b|} b*(alpha cap c)",
            lhs,
            ops.product(b, ops.cap(alf, c)).scale(sign_pow(k * _hdeg(b))),
        ),
    ]


def _ev_cap_derivation(ops, model, args):
    al, b, c = args
    da = ops.coh_delta(to_full(al))
    k = _hdeg(al)
    lhs = ops.cap(da, ops.product(b, c))
    rhs = ops.product(ops.cap(da, b), c) + ops.product(b, ops.cap(da, c)).scale(
        sign_pow((k - 1) * _hdeg(b))
    )
    return [("Dalpha cap (b*c) = (Dalpha cap b)*c + (-1)^{(|alpha|-1)|b|} b*(Dalpha cap c)", lhs, rhs)]


def _ev_cap_bracket_derivation(ops, model, args):
    al, b, c = args
    da = ops.coh_delta(to_full(al))
    k = _hdeg(al)
    lhs = ops.cap(da, ops.bracket(b, c))
    rhs = ops.bracket(ops.cap(da, b), c) + ops.bracket(b, ops.cap(da, c)).scale(
        sign_pow((k - 1) * (_hdeg(b) + 1))
    )
    return [("Dalpha cap {b,c} = {Dalpha cap b,c} + (-1)^{(|alpha|-1)(|b|+1)} {b,Dalpha cap c}", lhs, rhs)]


def _ev_delta_cap_derivation(ops, model, args):
    w, b = args
    lhs = ops.delta(ops.cap(w, b))
    rhs = ops.cap(ops.coh_delta(w), b) + ops.cap(w, ops.delta(b)).scale(sign_pow(_hdeg(w)))
    return [("Delta(w cap b) = coh_delta(w) cap b + (-1)^{|w|} w cap Delta(b)", lhs, rhs)]


def _ev_cap_constant_trivial(ops, model, args):
    al, x = args
    lhs = ops.cap(ops.coh_delta(to_full(al)), s_star(x))
    return [("Dalpha cap s_star(x) = 0", lhs, Element.zero(model, Ring.LOOP))]


def _ev_cap_module_axiom(ops, model, args):
    w1, w2, b = args
    return [
        ("(w1 cup w2) cap b = w1 cap (w2 cap b)", ops.cap(w1 * w2, b), ops.cap(w1, ops.cap(w2, b))),
        ("1 cap b = b", ops.cap(Element.unit(model, Ring.COH), b), b),
    ]


def _ev_cap_is_intersection(ops, model, args):
    al, b = args
    alf = to_full(al)
    a_dual = poincare_dual_inverse(al)
    return [
        ("alpha cap b = Dinv(alpha)*b", ops.cap(alf, b), ops.product(a_dual, b)),
        (
            "(-1)^{|alpha|} Dalpha cap b = {Dinv(alpha),b}",
            ops.cap(ops.coh_delta(alf), b).scale(sign_pow(_hdeg(al))),
            ops.bracket(a_dual, b),
        ),
    ]


def _ev_nested_brackets(ops, model, args):
    w, b = args
    degs = model.generator_degrees
    if w.is_zero():
        zero = Element.zero(model, Ring.LOOP)
        return [("cap(0,b) = 0", ops.cap(w, b), zero)]
    ((mono, coeff),) = tuple(w.terms.items())
    factors = [("odd", i) for i in mono.odds]
    for idx, k in enumerate(mono.exps):
        factors.extend(("even", idx + 1) for _ in range(k))

    def single(factor, y):
        kind, i = factor
        if kind == "odd":
            return ops.product(loop_a(model, i), y)
        return ops.bracket(loop_a(model, i), y).scale(sign_pow(degs[i - 1]))

    route_a = ops.cap(w, b)
    y = b
    for factor in reversed(factors):
        y = single(factor, y)
    route_b = y.scale(coeff)
    odd_count = len(mono.odds)
    rev_sign = sign_pow(odd_count * (odd_count - 1) // 2)
    y = b
    for factor in factors:
        y = single(factor, y)
    route_c = y.scale(coeff * rev_sign)
    return [
        ("cap(w,b) = iterated single caps, canonical order", route_a, route_b),
        ("cap(w,b) = iterated single caps, reversed order with Koszul sign", route_a, route_c),
    ]


def _ev_intertwiner(ops, model, args):
    al, b = args
    a_dual = poincare_dual_inverse(al)
    return [
        (
            "{(alpha,0),(0,b)} = (0,{Dinv(alpha),b})",
            extended_bracket(_xc(al), _xl(b), ops=ops),
            _xl(ops.bracket(a_dual, b)),
        ),
        (
            "(alpha,0)*(0,b) = (0,Dinv(alpha)*b)",
            extended_product(_xc(al), _xl(b), ops=ops),
            _xl(ops.product(a_dual, b)),
        ),
    ]


def _ev_def_mixed_conventions(ops, model, args):
    al, b, be = args
    A, B, C = _xc(al), _xl(b), _xc(be)
    k, n = _hdeg(al), _hdeg(b)
    ab = extended_product(A, B, ops=ops)
    br = extended_bracket(A, B, ops=ops)
    return [
        ("alpha.b = alpha cap b", ab, _xl(ops.cap(to_full(al), b))),
        (
            "{alpha,b} = (-1)^{|alpha|} Dalpha cap b",
            br,
            _xl(ops.cap(ops.coh_delta(to_full(al)), b).scale(sign_pow(k))),
        ),
        ("b.alpha = (-1)^{|alpha||b|} alpha.b", extended_product(B, A, ops=ops), ab.scale(sign_pow(k * n))),
        (
            "{b,alpha} = -(-1)^{(|alpha|+1)(|b|+1)} {alpha,b}",
            extended_bracket(B, A, ops=ops),
            br.scale(-sign_pow((k + 1) * (n + 1))),
        ),
        ("{alpha,beta} = 0", extended_bracket(A, C, ops=ops), ExtendedClass.zero(model)),
    ]


def _ext_poisson_checks(ops, model, x, y, z, label):
    lhs = extended_bracket(x, extended_product(y, z, ops=ops), ops=ops)
    rhs = extended_product(extended_bracket(x, y, ops=ops), z, ops=ops) + extended_product(
        y, extended_bracket(x, z, ops=ops), ops=ops
    ).scale(sign_pow(_hdeg(y) * (_hdeg(x) + 1)))
    return [(label, lhs, rhs)]


def _ext_jacobi_checks(ops, model, x, y, z, label):
    lhs = extended_bracket(x, extended_bracket(y, z, ops=ops), ops=ops)
    rhs = extended_bracket(extended_bracket(x, y, ops=ops), z, ops=ops) + extended_bracket(
        y, extended_bracket(x, z, ops=ops), ops=ops
    ).scale(sign_pow((_hdeg(x) + 1) * (_hdeg(y) + 1)))
    return [(label, lhs, rhs)]


def _ev_eq_4_11(ops, model, args):
    al, be, c = args
    return _ext_poisson_checks(
        ops, model, _xc(al), _xc(be), _xl(c),
        "{alpha,beta.c} = {alpha,beta}.c + (-1)^{|beta|(|alpha|+1)} beta.{alpha,c}",
    )


def _ev_eq_4_12(ops, model, args):
    al, be, c = args
    x, y, z = _xc(al), _xc(be), _xl(c)
    lhs = extended_bracket(extended_product(x, y, ops=ops), z, ops=ops)
    rhs = extended_product(x, extended_bracket(y, z, ops=ops), ops=ops) + extended_product(
        y, extended_bracket(x, z, ops=ops), ops=ops
    ).scale(sign_pow(_hdeg(x) * _hdeg(y)))
    return [("{alpha cup beta,c} = alpha.{beta,c} + (-1)^{|alpha||beta|} beta.{alpha,c}", lhs, rhs)]


def _ev_eq_4_13(ops, model, args):
    al, b, c = args
    return _ext_poisson_checks(
        ops, model, _xc(al), _xl(b), _xl(c),
        "{alpha,b*c} = {alpha,b}*c + (-1)^{|b|(|alpha|+1)} b*{alpha,c}",
    )


def _ev_eq_4_14(ops, model, args):
    al, b, c = args
    x, y, z = _xc(al), _xl(b), _xl(c)
    lhs = extended_bracket(extended_product(x, y, ops=ops), z, ops=ops)
    rhs = extended_product(x, extended_bracket(y, z, ops=ops), ops=ops) + extended_product(
        y, extended_bracket(x, z, ops=ops), ops=ops
    ).scale(sign_pow(_hdeg(x) * _hdeg(y)))
    return [("{alpha.b,c} = alpha.{b,c} + (-1)^{|alpha||b|} b.{alpha,c}", lhs, rhs)]


def _ev_eq_4_15(ops, model, args):
    al, be, c = args
    return _ext_jacobi_checks(
        ops, model, _xc(al), _xc(be), _xl(c),
        "{alpha,{beta,c}} = {{alpha,beta},c} + (-1)^{(|alpha|+1)(|beta|+1)} {beta,{alpha,c}}",
    )


def _ev_eq_4_16(ops, model, args):
    al, b, c = args
    return _ext_jacobi_checks(
        ops, model, _xc(al), _xl(b), _xl(c),
        "{alpha,{b,c}} = {{alpha,b},c} + (-1)^{(|alpha|+1)(|b|+1)} {b,{alpha,c}}",
    )


def _ev_ext_commutativity(ops, model, args):
    x, y = args
    return [
        (
            "x.y = (-1)^{|x||y|} y.x",
            extended_product(x, y, ops=ops),
            extended_product(y, x, ops=ops).scale(sign_pow(_hdeg(x) * _hdeg(y))),
        )
    ]


def _ev_ext_associativity(ops, model, args):
    x, y, z = args
    return [
        (
            "(x.y).z = x.(y.z)",
            extended_product(extended_product(x, y, ops=ops), z, ops=ops),
            extended_product(x, extended_product(y, z, ops=ops), ops=ops),
        )
    ]


def _ev_ext_unit(ops, model, args):
    (x,) = args
    one = ExtendedClass.unit(model)
    return [
        ("(1,0).x = x", extended_product(one, x, ops=ops), x),
        ("x.(1,0) = x", extended_product(x, one, ops=ops), x),
    ]


def _ev_ext_bv_identity(ops, model, args):
    x, y = args
    s = sign_pow(_hdeg(x))
    lhs = extended_delta(extended_product(x, y, ops=ops), ops=ops)
    rhs = (
        extended_product(extended_delta(x, ops=ops), y, ops=ops)
        + extended_product(x, extended_delta(y, ops=ops), ops=ops).scale(s)
        + extended_bracket(x, y, ops=ops).scale(s)
    )
    return [("D(x.y) = D(x).y + (-1)^{|x|}(x.D(y) + {x,y})", lhs, rhs)]


def _ev_ext_poisson(ops, model, args):
    x, y, z = args
    return _ext_poisson_checks(
        ops, model, x, y, z, "{x,y.z} = {x,y}.z + (-1)^{|y|(|x|+1)} y.{x,z}"
    )


def _ev_ext_jacobi(ops, model, args):
    x, y, z = args
    return _ext_jacobi_checks(
        ops, model, x, y, z, "{x,{y,z}} = {{x,y},z} + (-1)^{(|x|+1)(|y|+1)} {y,{x,z}}"
    )


def _ev_ext_antisymmetry(ops, model, args):
    x, y = args
    return [
        (
            "{x,y} = -(-1)^{(|x|+1)(|y|+1)} {y,x}",
            extended_bracket(x, y, ops=ops),
            extended_bracket(y, x, ops=ops).scale(-sign_pow((_hdeg(x) + 1) * (_hdeg(y) + 1))),
        )
    ]


def _ev_ext_delta_squared(ops, model, args):
    (x,) = args
    return [
        (
            "D(D(x)) = 0",
            extended_delta(extended_delta(x, ops=ops), ops=ops),
            ExtendedClass.zero(model),
        )
    ]


def _ev_curious_identity(ops, model, args):
    al, b, c = args
    A, B, C = _xc(al), _xl(b), _xl(c)
    k, n = _hdeg(al), _hdeg(b)
    sn = sign_pow(n)
    t1 = extended_bracket(A, extended_product(B, C, ops=ops), ops=ops) + extended_product(
        A, extended_bracket(B, C, ops=ops), ops=ops
    ).scale(sn)
    t2 = extended_product(extended_bracket(A, B, ops=ops), C, ops=ops) + extended_bracket(
        extended_product(A, B, ops=ops), C, ops=ops
    ).scale(sn)
    t3 = (
        extended_product(B, extended_bracket(A, C, ops=ops), ops=ops)
        + extended_bracket(B, extended_product(A, C, ops=ops), ops=ops).scale(sign_pow(k))
    ).scale(sign_pow((k + 1) * n))
    return [
        ("{alpha,b.c} + (-1)^{|b|}alpha.{b,c} = {alpha,b}.c + (-1)^{|b|}{alpha.b,c}", t1, t2),
        ("... = (-1)^{(|alpha|+1)|b|}(b.{alpha,c} + (-1)^{|alpha|}{b,alpha.c})", t2, t3),
    ]


def _ev_loop_intersection(ops, model, args):
    ((ats, frees, family),) = args
    lhs = loop_intersection(ats, frees, family, ops=ops)
    # independent assembly: sign and monomial recomputed here, cup folded
    # right to left
    sign_exp = -len(frees)
    pieces = [to_full(w) for w in ats]
    for j, w in enumerate(frees, start=1):
        sign_exp += j * _hdeg(w)
        pieces.append(ops.coh_delta(to_full(w)))
    omega = Element.unit(model, Ring.COH)
    for piece in reversed(pieces):
        omega = piece * omega
    rhs = ops.cap(omega, family).scale(sign_pow(sign_exp))
    return [("intersection family = sign * cap(assembled class, family)", lhs, rhs)]


def _build_catalog() -> dict[str, IdentityCase]:
    entries = [
        IdentityCase(
            "model-structure",
            "generator relations: odd squares vanish, evens commute, Delta(a_i u_j) = delta_ij, coh_delta(alpha_i) = v_i",
            (),
            _ev_model_structure,
        ),
        IdentityCase("loop-commutativity", "b*c = (-1)^{|b||c|} c*b", _LOOP2, _ev_loop_commutativity),
        IdentityCase("loop-associativity", "(b*c)*e = b*(c*e)", _LOOP3, _ev_loop_associativity),
        IdentityCase("loop-unit", "s_star[M] is a two-sided unit", (ArgSpec("loop"),), _ev_loop_unit),
        IdentityCase(
            "bracket-antisymmetry",
            "{b,c} = -(-1)^{(|b|+1)(|c|+1)} {c,b}",
            _LOOP2,
            _ev_bracket_antisymmetry,
        ),
        IdentityCase(
            "bv-identity",
            "Delta(b*c) = Delta(b)*c + (-1)^{|b|} b*Delta(c) + (-1)^{|b|} {b,c}",
            _LOOP2,
            _ev_bv_identity,
        ),
        IdentityCase(
            "poisson-identity",
            "{b,c*e} = {b,c}*e + (-1)^{|c|(|b|+1)} c*{b,e}",
            _LOOP3,
            _ev_poisson,
        ),
        IdentityCase(
            "jacobi-identity",
            "{b,{c,e}} = {{b,c},e} + (-1)^{(|b|+1)(|c|+1)} {c,{b,e}}",
            _LOOP3,
            _ev_jacobi,
        ),
        IdentityCase("delta-squared-zero", "Delta o Delta = 0", (ArgSpec("loop"),), _ev_delta_squared),
        IdentityCase(
            "delta-constant-loops",
            "Delta vanishes on constant-loop classes and on the unit",
            (ArgSpec("exterior"),),
            _ev_delta_constant,
        ),
        IdentityCase(
            "operator-commutator-product",
            "[D_b, M_c] = M_{{b,c}} as graded operator commutators",
            _LOOP3,
            _ev_operator_product,
        ),
        IdentityCase(
            "operator-commutator-bracket",
            "[D_b, D_c] = D_{{b,c}} as graded operator commutators",
            _LOOP3,
            _ev_operator_bracket,
        ),
        IdentityCase(
            "s-star-ring-map",
            "s_star is a unital ring map from the intersection ring",
            (ArgSpec("exterior"), ArgSpec("exterior")),
            _ev_s_star_ring_map,
        ),
        IdentityCase(
            "dual-multiplicative",
            "D(x*y) = D(x) cup D(y) and Dinv o D = id on the exterior subring",
            (ArgSpec("exterior"), ArgSpec("exterior")),
            _ev_dual_multiplicative,
        ),
        IdentityCase(
            "eq-1.1-base-cap-commutes",
            "alpha cap (x*y) = (alpha cap x)*y = (-1)^{|alpha||x|} x*(alpha cap y) on constant classes",
            (ArgSpec("base"), ArgSpec("exterior"), ArgSpec("exterior")),
            _ev_base_cap_commutes,
        ),
        IdentityCase(
            "eq-4.4-coh-delta-derivation",
            "coh_delta is an odd derivation for the cup product",
            (ArgSpec("coh"), ArgSpec("coh")),
            _ev_coh_delta_derivation,
        ),
        IdentityCase(
            "coh-delta-squared-zero",
            "coh_delta o coh_delta = 0",
            (ArgSpec("coh"),),
            _ev_coh_delta_squared,
        ),
        IdentityCase(
            "eq-4.6-cap-commutes-product",
            "cap with a base class graded-commutes with the loop product",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_cap_commutes_product,
        ),
        IdentityCase(
            "eq-4.7-cap-derivation",
            "cap with coh_delta(alpha) is a derivation of the loop product",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_cap_derivation,
        ),
        IdentityCase(
            "eq-4.10-cap-bracket-derivation",
            "cap with coh_delta(alpha) is a derivation of the loop bracket",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_cap_bracket_derivation,
        ),
        IdentityCase(
            "eq-4.24-delta-cap-derivation",
            "Delta(w cap b) = coh_delta(w) cap b + (-1)^{|w|} w cap Delta(b), any ring class w",
            (ArgSpec("coh"), ArgSpec("loop")),
            _ev_delta_cap_derivation,
        ),
        IdentityCase(
            "cap-on-constants-trivial",
            "cap of coh_delta(alpha) with constant-loop classes vanishes",
            (ArgSpec("base"), ArgSpec("exterior")),
            _ev_cap_constant_trivial,
        ),
        IdentityCase(
            "cap-module-axiom",
            "(w1 cup w2) cap b = w1 cap (w2 cap b) and 1 cap b = b",
            (ArgSpec("coh"), ArgSpec("coh"), ArgSpec("loop")),
            _ev_cap_module_axiom,
        ),
        IdentityCase(
            "eq-5.1-cap-is-intersection",
            "alpha cap b = Dinv(alpha)*b and (-1)^{|alpha|} coh_delta(alpha) cap b = {Dinv(alpha),b}",
            (ArgSpec("base"), ArgSpec("loop")),
            _ev_cap_is_intersection,
        ),
        IdentityCase(
            "eq-5.2-nested-brackets",
            "cap with a monomial equals the signed nested-bracket expansion, any factor order",
            (ArgSpec("coh", max_terms=1), ArgSpec("loop")),
            _ev_nested_brackets,
        ),
        IdentityCase(
            "intertwiner-duality",
            "extended product/bracket against (0,b) realise Dinv: {(alpha,0),(0,b)} = (0,{Dinv(alpha),b})",
            (ArgSpec("base"), ArgSpec("loop")),
            _ev_intertwiner,
        ),
        IdentityCase(
            "mixed-product-conventions",
            "mixed product/bracket conventions between base cohomology and loop classes",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("base")),
            _ev_def_mixed_conventions,
        ),
        IdentityCase(
            "eq-4.11-poisson-extended",
            "extended Poisson: cohomology, cohomology, loop",
            (ArgSpec("base"), ArgSpec("base"), ArgSpec("loop")),
            _ev_eq_4_11,
        ),
        IdentityCase(
            "eq-4.12-poisson-extended",
            "extended Poisson for a cup product in the first slot",
            (ArgSpec("base"), ArgSpec("base"), ArgSpec("loop")),
            _ev_eq_4_12,
        ),
        IdentityCase(
            "eq-4.13-poisson-extended",
            "extended Poisson: cohomology, loop, loop",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_eq_4_13,
        ),
        IdentityCase(
            "eq-4.14-poisson-extended",
            "extended Poisson for a mixed product in the first slot",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_eq_4_14,
        ),
        IdentityCase(
            "eq-4.15-jacobi-extended",
            "extended Jacobi: cohomology, cohomology, loop",
            (ArgSpec("base"), ArgSpec("base"), ArgSpec("loop")),
            _ev_eq_4_15,
        ),
        IdentityCase(
            "eq-4.16-jacobi-extended",
            "extended Jacobi: cohomology, loop, loop",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_eq_4_16,
        ),
        IdentityCase("ext-commutativity", "extended product graded commutativity", _EXT2, _ev_ext_commutativity),
        IdentityCase("ext-associativity", "extended product associativity", _EXT3, _ev_ext_associativity),
        IdentityCase("ext-unit", "(1,0) is the extended unit", (ArgSpec("ext"),), _ev_ext_unit),
        IdentityCase("ext-bv-identity", "extended BV identity", _EXT2, _ev_ext_bv_identity),
        IdentityCase("ext-poisson", "extended Poisson identity on general classes", _EXT3, _ev_ext_poisson),
        IdentityCase("ext-jacobi", "extended Jacobi identity on general classes", _EXT3, _ev_ext_jacobi),
        IdentityCase("ext-bracket-antisymmetry", "extended bracket antisymmetry", _EXT2, _ev_ext_antisymmetry),
        IdentityCase("ext-delta-squared-zero", "extended BV operator squares to zero", (ArgSpec("ext"),), _ev_ext_delta_squared),
        IdentityCase(
            "eq-4.19-curious-identity",
            "three-way symmetric bracket/product identity in extended arithmetic",
            (ArgSpec("base"), ArgSpec("loop"), ArgSpec("loop")),
            _ev_curious_identity,
        ),
        IdentityCase(
            "loop-intersection-formula",
            "loop_intersection equals its signed cap-product formula",
            (ArgSpec("intersect-config"),),
            _ev_loop_intersection,
        ),
    ]
    catalog = {}
    for case in entries:
        if case.identity_id in catalog:
            raise AlgebraError("duplicate identity id %r" % case.identity_id)
        catalog[case.identity_id] = case
    return catalog


CATALOG: dict[str, IdentityCase] = _build_catalog()


# ---------------------------------------------------------------------------
# mutated primitive bundles


def _partial_u(b: Element, index: int) -> Element:
    terms = {}
    for mono, coeff in b.terms.items():
        k = mono.exps[index - 1]
        if k == 0:
            continue
        exps = list(mono.exps)
        exps[index - 1] = k - 1
        terms[Monomial(mono.odds, tuple(exps))] = coeff * k
    return Element(b.model, Ring.LOOP, terms)


def _partial_a(b: Element, index: int) -> Element:
    terms = {}
    for mono, coeff in b.terms.items():
        if index not in mono.odds:
            continue
        pos = mono.odds.index(index)
        odds = mono.odds[:pos] + mono.odds[pos + 1 :]
        new = Monomial(odds, mono.exps)
        acc = terms.get(new, Fraction(0)) + coeff * sign_pow(pos)
        if acc == 0:
            terms.pop(new, None)
        else:
            terms[new] = acc
    return Element(b.model, Ring.LOOP, terms)


def _delta_drop_last(b: Element) -> Element:
    last = b.model.rank
    result = bv_delta(b)
    # subtract the contribution of the final generator pair
    return result - _partial_u(_partial_a(b, last), last)


def _bracket_from_delta(delta):
    def bracket(b, c):
        result = Element.zero(b.model, Ring.LOOP)
        delta_c = delta(c)
        for deg, part in b.homogeneous_components().items():
            s = sign_pow(deg)
            result = result + (
                delta(part * c) - delta(part) * c - (part * delta_c).scale(s)
            ).scale(s)
        return result

    return bracket


def _cap_from_bracket(bracket):
    def capped(w, b):
        return cap(w, b, bracket=bracket)

    return capped


def mutations() -> dict[str, BVOps]:
    """Named broken primitive bundles, each one sign flip or one term away."""
    exterior_delta = lambda b: bv_delta(b) + _partial_a(b, 1)
    exterior_bracket = _bracket_from_delta(exterior_delta)
    muts = {
        "delta-sign-flip": replace(
            STANDARD_OPS, name="delta-sign-flip", delta=lambda b: -bv_delta(b)
        ),
        "delta-drop-term": replace(
            STANDARD_OPS, name="delta-drop-term", delta=_delta_drop_last
        ),
        "delta-extra-term": replace(
            STANDARD_OPS, name="delta-extra-term", delta=lambda b: bv_delta(b) + _partial_u(b, 1)
        ),
        "bracket-sign-flip": replace(
            STANDARD_OPS, name="bracket-sign-flip", bracket=lambda b, c: -loop_bracket(b, c)
        ),
        "bracket-drop-term": replace(
            STANDARD_OPS,
            name="bracket-drop-term",
            bracket=lambda b, c: sum(
                ((bv_delta(part * c) - bv_delta(part) * c).scale(sign_pow(deg))
                 for deg, part in b.homogeneous_components().items()),
                Element.zero(b.model, Ring.LOOP),
            ),
        ),
        "delta-exterior-term": replace(
            STANDARD_OPS,
            name="delta-exterior-term",
            delta=exterior_delta,
            bracket=exterior_bracket,
            cap=_cap_from_bracket(exterior_bracket),
        ),
        "cap-sign-flip": replace(
            STANDARD_OPS, name="cap-sign-flip", cap=lambda w, b: -cap(w, b)
        ),
        "product-sign-flip": replace(
            STANDARD_OPS, name="product-sign-flip", product=lambda b, c: -(b * c)
        ),
        "product-swap-unsigned": replace(
            STANDARD_OPS, name="product-swap-unsigned", product=lambda b, c: c * b
        ),
        "coh-delta-sign-flip": replace(
            STANDARD_OPS, name="coh-delta-sign-flip", coh_delta=lambda w: -coh_delta(w)
        ),
        "coh-delta-extra-term": replace(
            STANDARD_OPS,
            name="coh-delta-extra-term",
            coh_delta=lambda w: coh_delta(w) + alpha(w.model, 1) * w,
        ),
    }
    return muts


#: the seeded sign/term mutations of Delta or the bracket
DELTA_BRACKET_MUTATIONS = (
    "delta-sign-flip",
    "delta-drop-term",
    "delta-extra-term",
    "bracket-sign-flip",
    "bracket-drop-term",
)


def get_ops(name_or_ops) -> BVOps:
    if isinstance(name_or_ops, BVOps):
        return name_or_ops
    if name_or_ops == "standard":
        return STANDARD_OPS
    muts = mutations()
    if name_or_ops in muts:
        return muts[name_or_ops]
    raise AlgebraError(
        "unknown ops bundle %r (known: standard, %s)" % (name_or_ops, ", ".join(sorted(muts)))
    )


# ---------------------------------------------------------------------------
# running, witnesses, replay


def _render_value(value) -> str:
    if isinstance(value, (Element, ExtendedClass)):
        return str(value)
    if isinstance(value, tuple) and len(value) == 3:
        ats, frees, family = value
        return "at=[%s] free=[%s] family=%s" % (
            "; ".join(str(w) for w in ats),
            "; ".join(str(w) for w in frees),
            family,
        )
    return repr(value)


def _evaluate_checks(case: IdentityCase, ops: BVOps, model: ModelSpec, args):
    return case.evaluate(ops, model, list(args))


def _failing_checks(case, ops, model, args):
    return [
        {"check": label, "lhs": _render_value(lhs), "rhs": _render_value(rhs)}
        for label, lhs, rhs in _evaluate_checks(case, ops, model, args)
        if lhs != rhs
    ]


def _drop_one_term(value):
    """Yield copies of `value` with a single monomial term removed."""
    if isinstance(value, Element):
        for mono in sorted(value.terms):
            smaller = dict(value.terms)
            del smaller[mono]
            yield Element(value.model, value.ring, smaller)
    elif isinstance(value, ExtendedClass):
        for coh in _drop_one_term(value.coh):
            yield ExtendedClass(coh, value.loop)
        for loop in _drop_one_term(value.loop):
            yield ExtendedClass(value.coh, loop)
    elif isinstance(value, tuple) and len(value) == 3:
        ats, frees, family = value
        for idx, w in enumerate(ats):
            for smaller in _drop_one_term(w):
                yield (ats[:idx] + [smaller] + ats[idx + 1 :], frees, family)
        for idx, w in enumerate(frees):
            for smaller in _drop_one_term(w):
                yield (ats, frees[:idx] + [smaller] + frees[idx + 1 :], family)
        for smaller in _drop_one_term(family):
            yield (ats, frees, smaller)


def _minimize_args(case, ops, model, args):
    """Greedily drop monomial terms from the arguments while the failure persists."""
    args = list(args)
    changed = True
    while changed:
        changed = False
        for idx in range(len(args)):
            for smaller in _drop_one_term(args[idx]):
                candidate = args[:idx] + [smaller] + args[idx + 1 :]
                try:
                    still_failing = bool(_failing_checks(case, ops, model, candidate))
                except AlgebraError:
                    # dropping the term made the arguments degenerate
                    still_failing = False
                if still_failing:
                    args = candidate
                    changed = True
                    break
            if changed:
                break
    return args


def _build_witness(case, ops, model, trial, args):
    failing = _failing_checks(case, ops, model, args)
    minimized = _minimize_args(case, ops, model, args)
    return {
        "trial": trial,
        "args": [_render_value(v) for v in args],
        "failing": failing,
        "minimized_args": [_render_value(v) for v in minimized],
        "minimized_failing": _failing_checks(case, ops, model, minimized),
    }


def trial_rng(seed, identity_id: str, trial: int) -> random.Random:
    """The deterministic generator for one trial; strings seed via sha512."""
    return random.Random("%s|%s|%d" % (seed, identity_id, trial))


def run_suite(
    model: ModelSpec,
    trials: int,
    seed,
    selection=None,
    ops="standard",
) -> list[CheckReport]:
    """Check identities on seeded random draws; one report per identity.

    `selection` is an iterable of identity ids (None means the full catalog);
    an unknown id is an error, not a silent no-op.  Reports come back in
    catalog order.  `ops` names a primitive bundle from the registry, for
    running the suite against deliberately broken algebra.
    """
    if trials < 1:
        raise AlgebraError("trials must be >= 1, got %d" % trials)
    ops_obj = get_ops(ops)
    if selection is None:
        chosen = list(CATALOG)
    else:
        chosen = list(selection)
        for ident in chosen:
            if ident not in CATALOG:
                raise AlgebraError(
                    "unknown identity id %r (see the catalog for known ids)" % ident
                )
        chosen = [ident for ident in CATALOG if ident in set(chosen)]
    reports = []
    for ident in chosen:
        case = CATALOG[ident]
        status, witness = "pass", None
        for trial in range(trials):
            rng = trial_rng(seed, ident, trial)
            args = [_draw(spec, model, rng) for spec in case.args]
            if _failing_checks(case, ops_obj, model, args):
                status = "fail"
                witness = _build_witness(case, ops_obj, model, trial, args)
                break
        reports.append(
            CheckReport(
                identity=ident,
                model=model.name,
                trials=trials,
                seed=seed,
                status=status,
                ops=ops_obj.name,
                witness=witness,
            )
        )
    return reports


def replay(report: CheckReport, model: ModelSpec | None = None) -> CheckReport:
    """Re-run one report's identity from its seed; must reproduce it exactly.

    The model is resolved from the report's model name unless given; catalog
    or ops mismatches are reported as errors rather than silently ignored.
    """
    if report.catalog != CATALOG_VERSION:
        raise AlgebraError(
            "catalog version mismatch: report has %r, current is %r"
            % (report.catalog, CATALOG_VERSION)
        )
    if report.identity not in CATALOG:
        raise AlgebraError("unknown identity id %r in report" % report.identity)
    if model is None:
        from .models import resolve_model

        model = resolve_model(report.model)
    if model.name != report.model:
        raise AlgebraError(
            "model mismatch: report is for %r, given model is %r" % (report.model, model.name)
        )
    return run_suite(model, report.trials, report.seed, [report.identity], ops=report.ops)[0]
