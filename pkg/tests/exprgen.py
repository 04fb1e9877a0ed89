"""Seeded random expression corpus for round-trip and determinism tests."""

from __future__ import annotations

import random
from fractions import Fraction

from loopbv.expr import BinOp, Call, ClassList, Gen, Neg, Num, Pow, to_text

_FAMILIES = ("a", "u", "alpha", "v")


def _leaf(rng: random.Random, rank: int):
    if rng.random() < 0.4:
        num = rng.randint(0, 9)
        if rng.random() < 0.4:
            return Num(Fraction(num, rng.randint(1, 9)))
        return Num(Fraction(num))
    return Gen(rng.choice(_FAMILIES), rng.randint(1, rank))


def random_node(rng: random.Random, rank: int, depth: int = 0):
    if depth >= 3:
        return _leaf(rng, rank)
    roll = rng.random()
    if roll < 0.30:
        return _leaf(rng, rank)
    if roll < 0.40:
        return Neg(random_node(rng, rank, depth + 1))
    if roll < 0.50:
        return Pow(random_node(rng, rank, depth + 1), rng.randint(0, 4))
    if roll < 0.70:
        op = rng.choice(("+", "-", "*"))
        return BinOp(op, random_node(rng, rank, depth + 1), random_node(rng, rank, depth + 1))
    func = rng.choice(("cap", "bracket", "product", "s", "Delta", "D", "Dinv", "intersect"))
    if func == "intersect":
        first = ClassList(tuple(random_node(rng, rank, depth + 2) for _ in range(rng.randint(0, 2))))
        second = ClassList(tuple(random_node(rng, rank, depth + 2) for _ in range(rng.randint(0, 2))))
        return Call(func, (first, second, random_node(rng, rank, depth + 1)))
    if func in ("s", "Delta", "D", "Dinv"):
        return Call(func, (random_node(rng, rank, depth + 1),))
    return Call(func, (random_node(rng, rank, depth + 1), random_node(rng, rank, depth + 1)))


def corpus(count: int, seed, rank: int = 2) -> list[str]:
    rng = random.Random("expr-corpus|%s" % seed)
    return [to_text(random_node(rng, rank)) for _ in range(count)]


def evaluable_corpus(count: int, seed, rank: int = 2) -> list[str]:
    """Well-typed expressions over a rank-`rank` model, for CLI determinism runs."""
    rng = random.Random("expr-eval-corpus|%s" % seed)
    out = []
    while len(out) < count:
        kind = rng.randrange(6)
        i = rng.randint(1, rank)
        j = rng.randint(1, rank)
        k = rng.randint(0, 3)
        q = "%d/%d" % (rng.randint(1, 5), rng.randint(1, 5))
        if kind == 0:
            out.append("bracket(a%d, u%d^%d)" % (i, j, k))
        elif kind == 1:
            out.append("cap(Delta(alpha%d), u%d^%d)" % (i, j, k))
        elif kind == 2:
            out.append("%s*a%d*u%d + u%d^%d" % (q, i, j, j, k + 1))
        elif kind == 3:
            out.append("product(s(a%d), u%d)" % (i, j))
        elif kind == 4:
            out.append("intersect([alpha%d], [alpha%d], u%d^%d)" % (i, j, j, k))
        else:
            out.append("Dinv(D(a%d)) - a%d" % (i, i))
    return out
