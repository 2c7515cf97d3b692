"""Fixture rings, fixture ideals and the instance streams the checks iterate over."""

import logging
from functools import lru_cache
from typing import List, NamedTuple, Sequence, Tuple

from engine.fdalg import algebraize, enumerate_ideals
from engine.poly import Polynomial, QuotientRing
from utils.session import parse_ring

logger = logging.getLogger(__name__)

FIXTURE_RINGS = {
    "exterior": "F2[x,y]/(x^2, y^2)",
    "chain": "F3[x]/(x^4)",
    "square-of-max": "F2[x,y]/(x^2, x*y, y^2)",
    "node": "F5[x,y]/(x*y)",
    "x2y2": "Q[x,y]/(x^2*y^2)",
    "semigroup": "Q[a:3,b:4,c:5]/(b^2 - a*c, c^2 - a^2*b, b*c - a^3)",
    "plane": "Q[x,y]",
    "double-line": "F5[x,y]/(x^2)",
    "dual-numbers": "F5[x]/(x^2)",
}

# Artinian fixtures the censuses run over; square-of-max is the only non-Gorenstein one
ARTINIAN_FIXTURES = ("exterior", "chain", "square-of-max", "dual-numbers")
GORENSTEIN_FIXTURES = ("exterior", "chain", "dual-numbers")

# ideals of the semigroup ring whose traces must be 0, m or R
SEMIGROUP_IDEALS = (
    ("a",), ("b",), ("c",),
    ("a", "b"), ("a", "c"), ("b", "c"), ("a", "b", "c"),
    ("a^2", "b"), ("a^2", "c"), ("b", "c", "a^2"),
    ("a^2", "a*b"), ("a*b", "a*c"),
)

FIXTURE_IDEALS = {
    "node": (("y",), ("x",), ("x", "y"), ("x + y",), ("x^2", "y"), ("y^2",)),
    "x2y2": (("x^5", "x*y^7"), ("x^2", "x*y^2"), ("x*y",), ("x + y",), ("x", "y"), ("x^2",)),
    "semigroup": SEMIGROUP_IDEALS,
    "plane": (("x", "y"), ("x",), ("x^2", "y"), ("x*y",), ("x^2", "x*y", "y^2")),
    "double-line": (("x",), ("x", "y"), ("y",), ("x*y",), ("x", "y^2")),
}

# (ring, generators, expected grade class): grade zero primary to the maximal ideal, or grade at least two
NON_RIGID_FIXTURES = (
    ("dual-numbers", ("x",), "zero"),
    ("double-line", ("x",), "zero"),
    ("exterior", ("x", "y"), "zero"),
    ("plane", ("x", "y"), "two"),
    ("plane", ("x^2", "y"), "two"),
)


class Instance(NamedTuple):
    index: int
    label: str
    generators: Tuple[Polynomial, ...]


@lru_cache(maxsize=None)
def fixture_ring(name: str) -> QuotientRing:
    if name not in FIXTURE_RINGS:
        raise KeyError(f"unknown fixture ring {name!r}")
    return parse_ring(FIXTURE_RINGS[name])


def fixture_name(R: QuotientRing) -> str:
    """Name of the fixture equal to R, or "" when R is not one of them"""
    for name in FIXTURE_RINGS:
        if fixture_ring(name) == R:
            return name
    return ""


def ideal_label(gens: Sequence[Polynomial]) -> str:
    return "(" + ", ".join(str(g) for g in gens) + ")" if gens else "(0)"


def parse_ideals(R: QuotientRing, texts: Sequence[Sequence[str]]) -> List[Tuple[str, Tuple[Polynomial, ...]]]:
    out = []
    for gens in texts:
        polys = tuple(R.element(g) for g in gens)
        out.append((ideal_label(polys), polys))
    return out


def default_ideals(R: QuotientRing) -> List[Tuple[str, Tuple[Polynomial, ...]]]:
    """Variables, their squares, pairwise products and the maximal ideal"""
    candidates: List[Tuple[Polynomial, ...]] = [()]
    xs = R.generators_of_maximal_ideal()
    candidates.extend((x,) for x in xs)
    candidates.extend((R.multiply(x, x),) for x in xs)
    candidates.extend((R.multiply(xs[i], xs[j]),) for i in range(len(xs)) for j in range(i + 1, len(xs)))
    candidates.append(tuple(xs))
    candidates.append((R.one(),))
    out, seen = [], set()
    for gens in candidates:
        gens = tuple(g for g in gens if not g.is_zero())
        label = ideal_label(gens)
        if label not in seen:
            seen.add(label)
            out.append((label, gens))
    return out


def fixture_ideals(R: QuotientRing) -> List[Tuple[str, Tuple[Polynomial, ...]]]:
    name = fixture_name(R)
    if name in FIXTURE_IDEALS:
        return parse_ideals(R, FIXTURE_IDEALS[name])
    return default_ideals(R)


def ideal_instances(R: QuotientRing, source: str = "fixture", seed: int = 0, count: int = 200) -> List[Instance]:
    """
    Ideals of R to run a check on

    Args:
        R: the ring
        source: "fixture" (named fixture ideals, or generic ones), "monomial_exhaustive"
            or "random" (both need R Artinian)
        seed: seed of the random stream
        count: number of random ideals

    Returns:
        Indexed instances, in a deterministic order
    """
    if source == "fixture":
        pairs = fixture_ideals(R)
    else:
        A = algebraize(R)
        pairs = [
            (ideal_label(I.ideal_generators), tuple(I.ideal_generators))
            for I in enumerate_ideals(A, source, seed=seed, count=count)
        ]
    logger.debug("%d %s ideal(s) of %s", len(pairs), source, R)
    return [Instance(i, label, gens) for i, (label, gens) in enumerate(pairs)]


def quotient_partners(R: QuotientRing) -> List[Tuple[str, Tuple[Polynomial, ...]]]:
    """Nonzero proper ideals K used to build ambient modules X = R/K"""
    xs = R.generators_of_maximal_ideal()
    candidates = [(xs[0],), tuple(R.multiply(a, b) for a in xs for b in xs)]
    out = []
    for gens in candidates:
        gens = tuple(g for g in gens if not g.is_zero())
        if gens and ideal_label(gens) not in {label for label, _ in out}:
            out.append((ideal_label(gens), gens))
    return out
