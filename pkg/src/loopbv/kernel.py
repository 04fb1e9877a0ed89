"""Exact graded-commutative monomial arithmetic over the rationals.

A model is a free graded-commutative algebra on r odd generators and r even
generators, realised in three gradings ("rings"):

* loop homology   -- odd generator a_i of degree -d_i, even u_i of degree d_i - 1,
* cohomology      -- odd generator alpha_i of degree d_i, even v_i of degree d_i - 1,
* base cohomology -- the exterior subring on the alpha_i alone.

All coefficients are exact `fractions.Fraction`s; equality is exact.  Signs
are produced by the Koszul rule (-1)^{pq} on parities, where the parity of a
generator is its kind (odd/even), never its degree: loop-homology degrees are
negative for the a_i but their parity is odd.

Elements are immutable after construction and all operations are pure, so
models and elements can be shared freely across threads or workers.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, NamedTuple


class AlgebraError(ValueError):
    """Bad algebraic usage: ring or model mixing, non-subring input."""


class Ring(Enum):
    LOOP = "loop-homology"
    COH = "cohomology"
    BASE = "base-cohomology"


@dataclass(frozen=True)
class ModelSpec:
    """A manifold model: one odd degree per exterior cohomology generator.

    `generator_degrees` lists (d_1, ..., d_r); every d_i must be odd and >= 1.
    The model dimension is d = sum(d_i).
    """

    name: str
    generator_degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "generator_degrees", tuple(self.generator_degrees))
        if len(self.generator_degrees) < 1:
            raise AlgebraError("model %r: need at least one generator degree" % self.name)
        for pos, deg in enumerate(self.generator_degrees):
            if not isinstance(deg, int) or isinstance(deg, bool):
                raise AlgebraError(
                    "model %r: generator_degrees[%d] = %r is not an integer"
                    % (self.name, pos, deg)
                )
            if deg < 1 or deg % 2 == 0:
                raise AlgebraError(
                    "model %r: generator_degrees[%d] = %d must be an odd integer >= 1"
                    % (self.name, pos, deg)
                )

    @property
    def rank(self) -> int:
        return len(self.generator_degrees)

    @property
    def dimension(self) -> int:
        return sum(self.generator_degrees)

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AlgebraError("model JSON is unreadable: %s" % exc) from exc
        if not isinstance(data, dict):
            raise AlgebraError("model JSON must be an object with 'name' and 'generator_degrees'")
        try:
            name = data["name"]
            degrees = data["generator_degrees"]
        except KeyError as exc:
            raise AlgebraError("model JSON is missing the %s field" % exc) from exc
        if not isinstance(name, str):
            raise AlgebraError("model JSON: 'name' must be a string")
        if not isinstance(degrees, list):
            raise AlgebraError("model JSON: 'generator_degrees' must be a list of odd integers")
        return cls(name=name, generator_degrees=tuple(degrees))

    def to_json(self) -> str:
        return json.dumps(
            {"name": self.name, "generator_degrees": list(self.generator_degrees)},
            sort_keys=True,
        )


class Monomial(NamedTuple):
    """One basis word: ascending odd-generator indices plus even exponents.

    `odds` holds the 1-based indices of the odd generators present (each at
    most once, strictly ascending); `exps` has one nonnegative entry per even
    generator.  The empty monomial ((), (0,...,0)) is the ring unit.
    """

    odds: tuple[int, ...]
    exps: tuple[int, ...]


def _unit_monomial(model: ModelSpec) -> Monomial:
    return Monomial((), (0,) * model.rank)


def _merge_odds(left: tuple[int, ...], right: tuple[int, ...]):
    """Merge two ascending index tuples; return (sign, merged) or (0, None).

    The sign counts transpositions needed to interleave `right` into `left`:
    one factor of -1 per pair (i in left, j in right) with i > j.  A shared
    index squares an odd generator, so the product vanishes.
    """
    if not left:
        return 1, right
    if not right:
        return 1, left
    sign = 1
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        li, rj = left[i], right[j]
        if li == rj:
            return 0, None
        if li < rj:
            merged.append(li)
            i += 1
        else:
            merged.append(rj)
            # rj jumps over everything still ahead in `left`, all odd
            if (len(left) - i) % 2:
                sign = -sign
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return sign, tuple(merged)


def _mono_mul(a: Monomial, b: Monomial):
    sign, odds = _merge_odds(a.odds, b.odds)
    if sign == 0:
        return 0, None
    exps = tuple(x + y for x, y in zip(a.exps, b.exps))
    return sign, Monomial(odds, exps)


def _mono_degree(model: ModelSpec, ring: Ring, m: Monomial) -> int:
    degs = model.generator_degrees
    odd_part = sum(degs[i - 1] for i in m.odds)
    even_part = sum(k * (degs[i] - 1) for i, k in enumerate(m.exps))
    if ring is Ring.LOOP:
        return -odd_part + even_part
    return odd_part + even_part


_GEN_NAMES = {
    Ring.LOOP: ("a", "u"),
    Ring.COH: ("alpha", "v"),
    Ring.BASE: ("alpha", "v"),
}

_UNICODE_GEN_NAMES = {
    Ring.LOOP: ("a", "u"),
    Ring.COH: ("α", "v"),
    Ring.BASE: ("α", "v"),
}


def _mono_str(ring: Ring, m: Monomial, unicode: bool = False) -> str:
    odd_name, even_name = (_UNICODE_GEN_NAMES if unicode else _GEN_NAMES)[ring]
    sep = "·" if unicode else "*"
    parts = [f"{odd_name}{i}" for i in m.odds]
    for i, k in enumerate(m.exps):
        if k == 1:
            parts.append(f"{even_name}{i + 1}")
        elif k > 1:
            parts.append(f"{even_name}{i + 1}^{k}")
    return sep.join(parts) if parts else "1"


class DegreeMarker:
    """Marker degrees: the zero element is homogeneous of every degree, and
    elements whose terms disagree have no degree at all."""

    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self):
        return self.label


ANY_DEGREE = DegreeMarker("any-degree")
INHOMOGENEOUS = DegreeMarker("inhomogeneous")


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise AlgebraError("coefficients must be exact rationals, got %r" % (q,))


class Element:
    """A finite rational linear combination of monomials in one ring.

    Stored terms never carry a zero coefficient and every monomial is
    canonical, so `==` is exact coefficient-wise comparison.  Instances are
    treated as immutable; arithmetic returns fresh elements.
    """

    __slots__ = ("model", "ring", "terms")

    def __init__(self, model: ModelSpec, ring: Ring, terms: Mapping[Monomial, Fraction] | None = None):
        self.model = model
        self.ring = ring
        clean: dict[Monomial, Fraction] = {}
        if terms:
            r = model.rank
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff == 0:
                    continue
                if not isinstance(mono, Monomial):
                    mono = Monomial(tuple(mono[0]), tuple(mono[1]))
                if len(mono.exps) != r:
                    raise AlgebraError("monomial %r: expected %d even exponents" % (mono, r))
                if any(k < 0 for k in mono.exps):
                    raise AlgebraError("monomial %r: negative exponent" % (mono,))
                if tuple(sorted(set(mono.odds))) != mono.odds:
                    raise AlgebraError("monomial %r: odd indices must be strictly ascending" % (mono,))
                if mono.odds and not (1 <= mono.odds[0] and mono.odds[-1] <= r):
                    raise AlgebraError("monomial %r: odd index out of range 1..%d" % (mono, r))
                if ring is Ring.BASE and any(mono.exps):
                    raise AlgebraError("base-cohomology admits no even generators: %r" % (mono,))
                clean[mono] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, model: ModelSpec, ring: Ring) -> "Element":
        return cls(model, ring)

    @classmethod
    def unit(cls, model: ModelSpec, ring: Ring) -> "Element":
        return cls(model, ring, {_unit_monomial(model): Fraction(1)})

    @classmethod
    def generator(cls, model: ModelSpec, ring: Ring, kind: str, index: int) -> "Element":
        if not 1 <= index <= model.rank:
            raise AlgebraError(
                "generator index %d out of range: model %r has generators 1..%d"
                % (index, model.name, model.rank)
            )
        if kind == "odd":
            mono = Monomial((index,), (0,) * model.rank)
        elif kind == "even":
            if ring is Ring.BASE:
                raise AlgebraError("base-cohomology admits only odd generators")
            exps = [0] * model.rank
            exps[index - 1] = 1
            mono = Monomial((), tuple(exps))
        else:
            raise AlgebraError("generator kind must be 'odd' or 'even', got %r" % kind)
        return cls(model, ring, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, model: ModelSpec, ring: Ring, mono: Monomial, coeff=1) -> "Element":
        return cls(model, ring, {mono: _as_fraction(coeff)})

    # -- predicates and grading -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self):
        """Common degree of all terms, ANY_DEGREE for zero, else INHOMOGENEOUS."""
        if not self.terms:
            return ANY_DEGREE
        degs = {_mono_degree(self.model, self.ring, m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return INHOMOGENEOUS

    def is_homogeneous(self) -> bool:
        return self.degree() is not INHOMOGENEOUS

    def homogeneous_components(self) -> dict[int, "Element"]:
        buckets: dict[int, dict[Monomial, Fraction]] = {}
        for mono, coeff in self.terms.items():
            buckets.setdefault(_mono_degree(self.model, self.ring, mono), {})[mono] = coeff
        return {
            deg: Element(self.model, self.ring, terms)
            for deg, terms in sorted(buckets.items())
        }

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "Element", op: str):
        if self.model != other.model:
            raise AlgebraError(
                "%s: model mismatch (%r vs %r)" % (op, self.model.name, other.model.name)
            )
        if self.ring is not other.ring:
            raise AlgebraError(
                "%s: ring mismatch (%s vs %s)" % (op, self.ring.value, other.ring.value)
            )

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check_compatible(other, "add")
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = terms.get(mono)
            if acc is None:
                terms[mono] = coeff
            else:
                acc = acc + coeff
                if acc == 0:
                    del terms[mono]
                else:
                    terms[mono] = acc
        out = Element.__new__(Element)
        out.model, out.ring, out.terms = self.model, self.ring, terms
        return out

    def __neg__(self) -> "Element":
        out = Element.__new__(Element)
        out.model, out.ring = self.model, self.ring
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, q) -> "Element":
        q = _as_fraction(q)
        out = Element.__new__(Element)
        out.model, out.ring = self.model, self.ring
        out.terms = {} if q == 0 else {m: q * c for m, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check_compatible(other, "multiply")
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, mono = _mono_mul(m1, m2)
                if sign == 0:
                    continue
                coeff = c1 * c2 if sign > 0 else -(c1 * c2)
                acc = terms.get(mono)
                if acc is None:
                    terms[mono] = coeff
                else:
                    acc = acc + coeff
                    if acc == 0:
                        del terms[mono]
                    else:
                        terms[mono] = acc
        out = Element.__new__(Element)
        out.model, out.ring, out.terms = self.model, self.ring, terms
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        if not isinstance(n, int) or n < 0:
            raise AlgebraError("powers must be nonnegative integers, got %r" % (n,))
        result = Element.unit(self.model, self.ring)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return (
            self.model == other.model
            and self.ring is other.ring
            and self.terms == other.terms
        )

    __hash__ = None

    # -- rendering ---------------------------------------------------------

    def render(self, unicode: bool = False) -> str:
        if not self.terms:
            return "0"
        def sort_key(item):
            mono, _ = item
            return (_mono_degree(self.model, self.ring, mono), mono.odds, mono.exps)
        pieces = []
        for mono, coeff in sorted(self.terms.items(), key=sort_key):
            mstr = _mono_str(self.ring, mono, unicode=unicode)
            if mstr == "1":
                body = str(coeff)
            elif coeff == 1:
                body = mstr
            elif coeff == -1:
                body = "-" + mstr
            else:
                body = "%s%s%s" % (coeff, "·" if unicode else "*", mstr)
            if not pieces:
                pieces.append(body)
            elif body.startswith("-"):
                pieces.append("- " + body[1:])
            else:
                pieces.append("+ " + body)
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return "<%s %s | %s>" % (self.ring.value, self.render(), self.model.name)


# -- module-level operation names ------------------------------------------


def degree(x: Element):
    return x.degree()


def multiply(x: Element, y: Element) -> Element:
    return x * y


def add(x: Element, y: Element) -> Element:
    return x + y


def scale(q, x: Element) -> Element:
    return x.scale(q)


def equal(x: Element, y: Element) -> bool:
    if x.model != y.model or x.ring is not y.ring:
        raise AlgebraError(
            "equal: cannot compare %s over %r with %s over %r"
            % (x.ring.value, x.model.name, y.ring.value, y.model.name)
        )
    return x.terms == y.terms


def sign_pow(n: int) -> int:
    """(-1)**n for any integer n, negative degrees included."""
    return -1 if n % 2 else 1


# -- basis enumeration and random elements ----------------------------------

DEFAULT_EVEN_CAP = 8


def _exponent_vectors(rank: int, cap: int):
    if rank == 0:
        yield ()
        return
    for head in range(cap + 1):
        for tail in _exponent_vectors(rank - 1, cap - head):
            yield (head,) + tail


@lru_cache(maxsize=None)
def _degree_buckets(model: ModelSpec, ring: Ring, even_cap: int) -> dict[int, tuple[Monomial, ...]]:
    """All canonical monomials with total even exponent <= even_cap, by degree."""
    r = model.rank
    subsets = []
    for size in range(r + 1):
        subsets.extend(itertools.combinations(range(1, r + 1), size))
    if ring is Ring.BASE:
        exps_list = [(0,) * r]
    else:
        exps_list = list(_exponent_vectors(r, even_cap))
    buckets: dict[int, list[Monomial]] = {}
    for odds in subsets:
        for exps in exps_list:
            mono = Monomial(odds, exps)
            buckets.setdefault(_mono_degree(model, ring, mono), []).append(mono)
    return {deg: tuple(sorted(monos)) for deg, monos in buckets.items()}


_COEFF_NUMERATORS = (-3, -2, -1, 1, 2, 3)
_COEFF_DENOMINATORS = (1, 1, 2, 3)


def random_element(
    model: ModelSpec,
    ring: Ring,
    degree_window,
    max_terms: int,
    seed,
    *,
    even_cap: int = DEFAULT_EVEN_CAP,
) -> Element:
    """Deterministic homogeneous element with degree inside `degree_window`.

    The basis is enumerated up to `even_cap` total even exponent; a degree in
    the window is chosen, then up to `max_terms` distinct monomials of that
    degree with small nonzero rational coefficients.  Returns zero only when
    the window admits no monomial.  Passing the same seed twice gives
    identical output; `seed` may also be a `random.Random` to draw from.
    """
    if max_terms < 1:
        raise AlgebraError("max_terms must be >= 1, got %d" % max_terms)
    lo, hi = degree_window
    if lo > hi:
        raise AlgebraError("empty degree window (%r, %r)" % (lo, hi))
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    buckets = _degree_buckets(model, ring, even_cap)
    degrees = sorted(d for d in buckets if lo <= d <= hi)
    if not degrees:
        return Element.zero(model, ring)
    deg = rng.choice(degrees)
    monos = buckets[deg]
    count = min(max_terms, len(monos))
    chosen = monos if count == len(monos) else tuple(rng.sample(monos, count))
    terms = {}
    for mono in chosen:
        terms[mono] = Fraction(rng.choice(_COEFF_NUMERATORS), rng.choice(_COEFF_DENOMINATORS))
    return Element(model, ring, terms)
