"""Seeded random module elements and series for the check suites."""
from __future__ import annotations

import random
from fractions import Fraction

from .modact import ModuleElem, out_colors
from .quiver import MaterializedQuiver, max_level, targets
from .series import Series


def rational(rng: random.Random, size: int = 5) -> Fraction:
    while True:
        v = Fraction(rng.randint(-size, size), rng.randint(1, 3))
        if v:
            return v


def random_elem(rng: random.Random, Q: MaterializedQuiver, terms: int = 3,
                levels: tuple[int, int] | None = None, max_coord: int | None = None) -> ModuleElem:
    """Nonzero element supported on window vertices.

    ``levels`` restricts the top level (tilde hosts); ``max_coord`` bounds
    every level coordinate.
    """
    pool = Q.vertices
    if levels is not None:
        lo, hi = levels
        pool = [a for a in pool if lo <= a[0] <= hi]
    if max_coord is not None:
        pool = [a for a in pool if max_level(a) <= max_coord]
    if not pool:
        raise ValueError("no vertices match the requested levels")
    chosen = rng.sample(pool, min(terms, len(pool)))
    return ModuleElem(Q.expr, {a: rational(rng) for a in chosen})


def random_walk_word(rng: random.Random, Q: MaterializedQuiver, start, length: int) -> tuple:
    """Color word of a random path from ``start`` that stays in the window."""
    word = []
    here = start
    for _ in range(length):
        colors = out_colors(Q.expr, here, Q.budget)
        if not colors:
            break
        c = rng.choice(colors)
        word.append(c)
        here = targets(Q.expr, here, c)[0]
    return tuple(word)


def random_series(rng: random.Random, Q: MaterializedQuiver, starts, terms: int = 3,
                  max_len: int = 2) -> Series:
    """Polynomial whose words are read off random walks, so it acts nontrivially."""
    starts = list(starts)
    coeffs: dict = {}
    for _ in range(terms):
        w = random_walk_word(rng, Q, rng.choice(starts), rng.randint(0, max_len))
        coeffs[w] = coeffs.get(w, 0) + rational(rng)
    return Series(coeffs)
