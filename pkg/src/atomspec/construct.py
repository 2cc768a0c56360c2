"""Realizing a finite poset by a colored quiver, and the expected atom spectrum.

For a maximal element ``p`` the quiver is ``Loop(p)``. Otherwise it is the
tilde of the disjoint union of the quivers of all ``q > p``. The whole
poset is realized by the disjoint union over all elements. Each sub-quiver
is built once and reused, so repeated copies share their colors.
"""
from __future__ import annotations

from .errors import InvalidInput
from .poset import Poset, _closure
from .quiver import Finite, Loop, QuiverExpr, Sum, Tilde, is_vertex, validate
from .series import ColorId, Series


def realize(P: Poset) -> Sum:
    if len(P) == 0:
        raise InvalidInput("cannot realize the empty poset")
    memo: dict[str, QuiverExpr] = {}

    def build(p):
        if p not in memo:
            above = [q for q in P.elements if P.lt(p, q)]
            if not above:
                memo[p] = Loop(p)
            else:
                memo[p] = Tilde(Sum(tuple((q, build(q)) for q in above)), p)
        return memo[p]

    return validate(Sum(tuple((p, build(p)) for p in P.elements)))


def component(expr: Sum, p: str) -> QuiverExpr:
    """The sub-quiver realizing element ``p`` inside ``realize(P)``."""
    try:
        return expr.part(p)
    except KeyError:
        raise InvalidInput(f"no component tagged {p!r}") from None


def expected_spectrum(expr: QuiverExpr) -> Poset:
    """Atom spectrum predicted by structural recursion.

    A loop contributes one atom; a tilde adds a new atom below everything
    its inner quiver contributes; a disjoint union takes the union, where
    atoms with the same label are the same atom.
    """
    validate(expr)
    elements: set[str] = set()
    pairs: set[tuple[str, str]] = set()

    def walk(e) -> set[str]:
        if isinstance(e, Loop):
            elements.add(e.site)
            return {e.site}
        if isinstance(e, Tilde):
            below = walk(e.inner)
            elements.add(e.site)
            pairs.update((e.site, q) for q in below)
            return below | {e.site}
        if isinstance(e, Sum):
            out: set[str] = set()
            for _, part in e.parts:
                out |= walk(part)
            return out
        raise InvalidInput("expected spectrum is only defined for loop/tilde/sum quivers")

    walk(expr)
    rel = _closure(sorted(elements), pairs)
    for a, b in sorted(rel):
        if a != b and (b, a) in rel:
            raise InvalidInput(f"atoms {a} and {b} would be identified; labels are inconsistent")
    return Poset(tuple(sorted(elements)), frozenset(rel))


# -- inclusion and projection between a quiver and its tilde -----------------

def has_color(expr: QuiverExpr, color: ColorId) -> bool:
    if isinstance(expr, Loop):
        return color == expr.color
    if isinstance(expr, Finite):
        return any(c == color for _, _, c in expr.arrows)
    if isinstance(expr, Tilde):
        if color.is_cross and color.site == expr.site:
            return is_vertex(expr.inner, color.src) and is_vertex(expr.inner, color.tgt)
        return has_color(expr.inner, color)
    return any(has_color(p, color) for _, p in expr.parts)


def _is_fresh(tilde: Tilde, color: ColorId) -> bool:
    return color.is_cross and color.site == tilde.site


def _need_tilde(tilde):
    if not isinstance(tilde, Tilde):
        raise InvalidInput("expected a tilde quiver")
    return tilde


def nu(tilde: Tilde, f: Series) -> Series:
    """Inclusion of series over the inner colors into series over the tilde's colors."""
    _need_tilde(tilde)
    for c in f.colors():
        if not has_color(tilde.inner, c):
            raise InvalidInput(f"color {c} is not a color of the inner quiver")
    return Series(f.coeffs, f.order)


def pi(tilde: Tilde, f: Series) -> Series:
    """Keep only the words spelled in the inner colors."""
    _need_tilde(tilde)
    inner = tilde.inner
    return Series({w: v for w, v in f.coeffs.items()
                   if all(not _is_fresh(tilde, c) and has_color(inner, c) for c in w)},
                  f.order)


def in_ideal(tilde: Tilde, f: Series) -> bool:
    """Whether every word of ``supp f`` uses at least one fresh cross color."""
    _need_tilde(tilde)
    return all(any(_is_fresh(tilde, c) for c in w) for w in f.coeffs)
