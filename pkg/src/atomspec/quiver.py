"""Colored quivers given by expressions, their finite windows, and path search.

A quiver is described by a small expression tree:

* ``Loop(site)`` -- one vertex with one loop colored ``c_site``;
* ``Finite(vertices, arrows)`` -- an explicit finite colored quiver;
* ``Tilde(inner, site)`` -- the layered quiver N x inner, with a fresh
  cross color ``c_{v,w}`` on the arrow ``(i, v) -> (i + 1, w)``;
* ``Sum(parts)`` -- disjoint union of tagged parts, colors shared.

Vertex addresses are tuples read against the expression: a Sum consumes a
tag, a Tilde consumes a level, a Finite consumes a vertex name and a Loop
consumes nothing. Only Tilde components are ints, so the "level
coordinates" of an address are just its int components.

Tilde quivers are infinite, and a cross color can connect a vertex to any
vertex of the next layer, so path searches never enumerate arrows. For a
fixed color, each vertex has finitely many in- and out-arrows, and those
are computed straight from the expression. A :class:`MaterializedQuiver`
only fixes the window used for exactness checks and explicit listings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Union

from .errors import BudgetError, InvalidInput
from .poset import check_id
from .series import Address, ColorId, Series, Word, addr_str, parse_addr, parse_color


@dataclass(frozen=True)
class Loop:
    site: str

    @property
    def color(self) -> ColorId:
        return ColorId.named("c", self.site)


@dataclass(frozen=True)
class Finite:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, ColorId], ...] = ()


@dataclass(frozen=True)
class Tilde:
    inner: "QuiverExpr"
    site: str


@dataclass(frozen=True)
class Sum:
    parts: tuple[tuple[str, "QuiverExpr"], ...] = ()

    def part(self, tag: str) -> "QuiverExpr":
        for t, e in self.parts:
            if t == tag:
                return e
        raise KeyError(tag)


QuiverExpr = Union[Loop, Finite, Tilde, Sum]


def point(name: str = "v") -> Finite:
    """A single vertex with no arrows and no colors."""
    return Finite((name,))


def validate(expr: QuiverExpr) -> QuiverExpr:
    """Check tags, names and sites; a repeated site must mean the same sub-quiver."""
    sites: dict[str, QuiverExpr] = {}

    def walk(e):
        if isinstance(e, (Loop, Tilde)):
            check_id(e.site)
            seen = sites.setdefault(e.site, e)
            if seen is not e and seen != e:
                raise InvalidInput(f"site {e.site!r} is used by two different sub-quivers")
            if isinstance(e, Tilde):
                walk(e.inner)
        elif isinstance(e, Finite):
            names = [check_id(v) for v in e.vertices]
            if len(set(names)) != len(names):
                raise InvalidInput("duplicate vertex names in finite quiver")
            for s, t, c in e.arrows:
                if s not in names or t not in names:
                    raise InvalidInput(f"arrow {s}->{t} leaves the finite quiver")
                if not isinstance(c, ColorId) or c.is_cross:
                    raise InvalidInput("finite quiver arrows need named colors")
        elif isinstance(e, Sum):
            tags = [check_id(t) for t, _ in e.parts]
            if len(set(tags)) != len(tags):
                raise InvalidInput(f"duplicate Sum tags {tags}")
            for _, p in e.parts:
                walk(p)
        else:
            raise InvalidInput(f"not a quiver expression: {e!r}")

    walk(expr)
    return expr


# -- addresses -------------------------------------------------------------

def is_vertex(expr: QuiverExpr, addr: Address) -> bool:
    """Whether ``addr`` names a vertex of the (infinite) quiver."""
    addr = tuple(addr)
    if isinstance(expr, Loop):
        return addr == ()
    if isinstance(expr, Finite):
        return len(addr) == 1 and addr[0] in expr.vertices
    if not addr:
        return False
    head, rest = addr[0], addr[1:]
    if isinstance(expr, Tilde):
        return isinstance(head, int) and not isinstance(head, bool) and head >= 0 \
            and is_vertex(expr.inner, rest)
    if isinstance(expr, Sum):
        if not isinstance(head, str):
            return False
        try:
            return is_vertex(expr.part(head), rest)
        except KeyError:
            return False
    return False


def levels(addr: Address) -> list[int]:
    return [p for p in addr if isinstance(p, int)]


def max_level(addr: Address) -> int:
    return max(levels(addr), default=0)


# -- arrows by color -------------------------------------------------------

def targets(expr: QuiverExpr, addr: Address, color: ColorId) -> list[Address]:
    """Targets of the arrows leaving ``addr`` with color ``color``."""
    if isinstance(expr, Loop):
        return [()] if addr == () and color == expr.color else []
    if isinstance(expr, Finite):
        return [(t,) for s, t, c in expr.arrows if (s,) == addr and c == color]
    head, rest = addr[0], addr[1:]
    if isinstance(expr, Tilde):
        if color.is_cross and color.site == expr.site:
            if rest == color.src and is_vertex(expr.inner, color.tgt):
                return [(head + 1,) + color.tgt]
            return []
        return [(head,) + t for t in targets(expr.inner, rest, color)]
    return [(head,) + t for t in targets(expr.part(head), rest, color)]


def sources(expr: QuiverExpr, addr: Address, color: ColorId) -> list[Address]:
    """Sources of the arrows entering ``addr`` with color ``color``."""
    if isinstance(expr, Loop):
        return [()] if addr == () and color == expr.color else []
    if isinstance(expr, Finite):
        return [(s,) for s, t, c in expr.arrows if (t,) == addr and c == color]
    head, rest = addr[0], addr[1:]
    if isinstance(expr, Tilde):
        if color.is_cross and color.site == expr.site:
            if head >= 1 and rest == color.tgt and is_vertex(expr.inner, color.src):
                return [(head - 1,) + color.src]
            return []
        return [(head,) + s for s in sources(expr.inner, rest, color)]
    return [(head,) + s for s in sources(expr.part(head), rest, color)]


class Arrow(NamedTuple):
    src: Address
    tgt: Address
    color: ColorId


@dataclass(frozen=True)
class Path:
    """A path ``r1 r2 ... rl``; with no arrows it is the trivial path at ``start``."""

    start: Address
    arrows: tuple[Arrow, ...] = ()

    @property
    def source(self) -> Address:
        return self.start

    @property
    def target(self) -> Address:
        return self.arrows[-1].tgt if self.arrows else self.start

    @property
    def word(self) -> Word:
        return tuple(a.color for a in self.arrows)

    def __len__(self):
        return len(self.arrows)

    def vertices(self) -> list[Address]:
        return [self.start] + [a.tgt for a in self.arrows]

    def then(self, other: "Path") -> "Path":
        if self.target != other.start:
            raise InvalidInput("paths are not composable")
        return Path(self.start, self.arrows + other.arrows)


# -- windows ---------------------------------------------------------------

def _window_vertices(expr, N) -> list[Address]:
    if isinstance(expr, Loop):
        return [()]
    if isinstance(expr, Finite):
        return [(v,) for v in expr.vertices]
    if isinstance(expr, Tilde):
        inner = _window_vertices(expr.inner, N)
        return [(i,) + a for i in range(N + 1) for a in inner]
    return [(tag,) + a for tag, part in expr.parts for a in _window_vertices(part, N)]


def _window_arrows(expr, N) -> list[Arrow]:
    if isinstance(expr, Loop):
        return [Arrow((), (), expr.color)]
    if isinstance(expr, Finite):
        return [Arrow((s,), (t,), c) for s, t, c in expr.arrows]
    if isinstance(expr, Tilde):
        inner_arrows = _window_arrows(expr.inner, N)
        inner_vertices = _window_vertices(expr.inner, N)
        out = [Arrow((i,) + a.src, (i,) + a.tgt, a.color)
               for i in range(N + 1) for a in inner_arrows]
        out += [Arrow((i,) + v, (i + 1,) + w, ColorId.cross(expr.site, v, w))
                for i in range(N) for v in inner_vertices for w in inner_vertices]
        return out
    return [Arrow((tag,) + a.src, (tag,) + a.tgt, a.color)
            for tag, part in expr.parts for a in _window_arrows(part, N)]


def window_size(expr: QuiverExpr, N: int) -> int:
    if isinstance(expr, Loop):
        return 1
    if isinstance(expr, Finite):
        return len(expr.vertices)
    if isinstance(expr, Tilde):
        return (N + 1) * window_size(expr.inner, N)
    return sum(window_size(p, N) for _, p in expr.parts)


def window_colors(expr: QuiverExpr, N: int) -> set:
    if isinstance(expr, Loop):
        return {expr.color}
    if isinstance(expr, Finite):
        return {c for _, _, c in expr.arrows}
    if isinstance(expr, Tilde):
        inner = _window_vertices(expr.inner, N)
        return window_colors(expr.inner, N) | {
            ColorId.cross(expr.site, v, w) for v in inner for w in inner}
    return set().union(*(window_colors(p, N) for _, p in expr.parts))


@dataclass(frozen=True)
class MaterializedQuiver:
    """The part of ``expr`` whose level coordinates are all ``<= budget``.

    Vertex and arrow lists are built on first access; membership tests and
    path searches never need them.
    """

    expr: QuiverExpr
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise InvalidInput("budget must be non-negative")

    @cached_property
    def vertices(self) -> list[Address]:
        return _window_vertices(self.expr, self.budget)

    @cached_property
    def arrows(self) -> list[Arrow]:
        return sorted(_window_arrows(self.expr, self.budget),
                      key=lambda a: (self.index[a.src], self.index[a.tgt], a.color.sort_key()))

    @cached_property
    def colors(self) -> list[ColorId]:
        return sorted(window_colors(self.expr, self.budget), key=ColorId.sort_key)

    @cached_property
    def index(self) -> dict[Address, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    def __len__(self):
        return window_size(self.expr, self.budget)

    def __contains__(self, addr) -> bool:
        return is_vertex(self.expr, addr) and max_level(addr) <= self.budget

    def require(self, addr: Address) -> Address:
        addr = tuple(addr)
        if not is_vertex(self.expr, addr):
            raise InvalidInput(f"{addr_str(addr)} is not a vertex of this quiver")
        if max_level(addr) > self.budget:
            raise BudgetError(max_level(addr),
                              f"vertex {addr_str(addr)} lies outside the window N={self.budget}")
        return addr

    def sort_key(self, addr: Address):
        """Canonical vertex order: the order of :attr:`vertices`."""
        return _canonical_key(self.expr, addr)


def _canonical_key(expr, addr):
    # position of addr in _window_vertices order, independent of the budget
    if isinstance(expr, (Loop,)):
        return ()
    if isinstance(expr, Finite):
        return (expr.vertices.index(addr[0]),)
    if isinstance(expr, Tilde):
        return (addr[0],) + _canonical_key(expr.inner, addr[1:])
    tags = [t for t, _ in expr.parts]
    return (tags.index(addr[0]),) + _canonical_key(expr.part(addr[0]), addr[1:])


def materialize(expr: QuiverExpr, N: int) -> MaterializedQuiver:
    return MaterializedQuiver(validate(expr), N)


# -- path search -----------------------------------------------------------

def paths_to(Q: MaterializedQuiver, v: Address, word: Iterable[ColorId]) -> list[Path]:
    """All paths ending at ``v`` whose color word is ``word``.

    The search walks backwards through the full quiver, so the answer does
    not depend on the window; only ``v`` itself has to lie in it.
    """
    v = Q.require(v)
    word = tuple(word)
    partial = [(v, ())]
    for color in reversed(word):
        nxt = []
        for head, arrows in partial:
            for s in sources(Q.expr, head, color):
                nxt.append((s, (Arrow(s, head, color),) + arrows))
        partial = nxt
    paths = [Path(start, arrows) for start, arrows in partial]
    paths.sort(key=lambda p: _canonical_key(Q.expr, p.start))
    return paths


def paths_from(Q: MaterializedQuiver, v: Address, word: Iterable[ColorId]) -> list[Path]:
    """All paths starting at ``v`` with color word ``word``.

    Raises :class:`BudgetError` if some such path leaves the window.
    """
    v = Q.require(v)
    word = tuple(word)
    partial = [(v, ())]
    for color in word:
        nxt = []
        for head, arrows in partial:
            for t in targets(Q.expr, head, color):
                nxt.append((t, arrows + (Arrow(head, t, color),)))
        partial = nxt
    paths = [Path(v, arrows) for _, arrows in partial]
    need = max((max_level(x) for p in paths for x in p.vertices()), default=0)
    if need > Q.budget:
        raise BudgetError(need, f"paths from {addr_str(v)} reach level {need} "
                                f"beyond the window N={Q.budget}")
    paths.sort(key=lambda p: _canonical_key(Q.expr, p.target))
    return paths


def p_v(Q: MaterializedQuiver, v: Address, B: Iterable[Word]) -> list[Path]:
    """Paths ending at ``v`` whose color word lies in ``B``."""
    out = []
    for w in sorted(set(map(tuple, B)), key=lambda w: (len(w), [c.sort_key() for c in w])):
        out.extend(paths_to(Q, v, w))
    return out


@dataclass
class AdmissibilityReport:
    admissible: bool
    counts: dict = field(default_factory=dict)
    window_relative: bool = False


def is_admissible(Q: MaterializedQuiver, f: Series) -> AdmissibilityReport:
    """Count ``P_v(supp f)`` at every window vertex.

    Every color has finite in-degree at every vertex of these quivers, so a
    polynomial always gives finite counts. A truncated series only gets a
    verdict relative to its known coefficients.
    """
    counts = {v: len(p_v(Q, v, f.coeffs)) for v in Q.vertices}
    return AdmissibilityReport(True, counts, window_relative=not f.exact)


# -- output ----------------------------------------------------------------

def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(Q: MaterializedQuiver, name: str = "quiver") -> str:
    lines = [f"digraph {name} {{"]
    for v in Q.vertices:
        lines.append(f"  {_dot_quote(addr_str(v))};")
    for a in Q.arrows:
        lines.append(f"  {_dot_quote(addr_str(a.src))} -> {_dot_quote(addr_str(a.tgt))}"
                     f" [label={_dot_quote(a.color.label())}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def expr_to_json(expr: QuiverExpr) -> dict:
    if isinstance(expr, Loop):
        return {"loop": expr.site}
    if isinstance(expr, Finite):
        return {"finite": {"vertices": list(expr.vertices),
                           "arrows": [[s, t, str(c)] for s, t, c in expr.arrows]}}
    if isinstance(expr, Tilde):
        return {"tilde": expr_to_json(expr.inner), "site": expr.site}
    return {"sum": [[tag, expr_to_json(p)] for tag, p in expr.parts]}


def expr_from_json(data) -> QuiverExpr:
    if isinstance(data, str):
        data = json.loads(data)

    def build(d):
        if not isinstance(d, dict):
            raise InvalidInput(f"bad quiver expression {d!r}")
        if "loop" in d:
            return Loop(d["loop"])
        if "tilde" in d:
            if "site" not in d:
                raise InvalidInput("tilde node needs a site")
            return Tilde(build(d["tilde"]), d["site"])
        if "sum" in d:
            return Sum(tuple((tag, build(p)) for tag, p in d["sum"]))
        if "finite" in d:
            fin = d["finite"]
            arrows = []
            for s, t, c in fin.get("arrows", []):
                arrows.append((s, t, parse_color(c) if ":" in c else ColorId.named(c)))
            return Finite(tuple(fin["vertices"]), tuple(arrows))
        raise InvalidInput(f"unknown quiver node {sorted(d)}")

    try:
        return validate(build(data))
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed quiver JSON: {exc}") from None


def materialized_to_json(Q: MaterializedQuiver) -> dict:
    return {
        "budget": Q.budget,
        "vertices": [addr_str(v) for v in Q.vertices],
        "arrows": [[addr_str(a.src), addr_str(a.tgt), str(a.color)] for a in Q.arrows],
    }


def vertex_from_text(Q: MaterializedQuiver, text: str) -> Address:
    return Q.require(parse_addr(text))
