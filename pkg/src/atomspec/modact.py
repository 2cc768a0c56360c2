"""The right module of finitely supported vertex sums and its action.

An element ``sum mu_v x_v`` is stored as a sparse map from vertex address to
rational. Acting by a series ``f`` sends ``mu_v x_v`` to the sum over all
paths ``r`` starting at ``v`` of ``lambda_{u(r)} mu_v x_{t(r)}``.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import BudgetError, InvalidInput
from .quiver import (
    Finite, Loop, MaterializedQuiver, QuiverExpr, Sum, Tilde, _canonical_key, _window_vertices,
    is_vertex, max_level, targets,
)
from .series import Address, ColorId, Series, addr_str, parse_addr


class ModuleElem:
    """Finite formal sum of vertices of ``host`` with rational coefficients."""

    __slots__ = ("host", "coeffs")

    def __init__(self, host: QuiverExpr, coeffs: Mapping[Address, object] | None = None):
        self.host = host
        clean = {}
        for addr, value in (coeffs or {}).items():
            value = Fraction(value)
            if value:
                clean[tuple(addr)] = value
        self.coeffs: dict[Address, Fraction] = clean

    @classmethod
    def basis(cls, host: QuiverExpr, addr: Address, coeff=1) -> "ModuleElem":
        return cls(host, {tuple(addr): coeff})

    def support(self) -> set:
        return set(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: _canonical_key(self.host, kv[0]))

    def _check_host(self, other):
        if other.host is not self.host and other.host != self.host:
            raise InvalidInput("module elements live over different quivers")

    def __add__(self, other: "ModuleElem") -> "ModuleElem":
        self._check_host(other)
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = out.get(a, 0) + v
        return ModuleElem(self.host, out)

    def __sub__(self, other: "ModuleElem") -> "ModuleElem":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k) -> "ModuleElem":
        k = Fraction(k)
        return ModuleElem(self.host, {a: k * v for a, v in self.coeffs.items()})

    def __rmul__(self, k):
        return self.scale(k)

    def __mul__(self, f):
        if isinstance(f, Series):
            raise TypeError("use act(Q, y, f) so the window is checked")
        return self.scale(f)

    def __eq__(self, other):
        if not isinstance(other, ModuleElem):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.host is other.host or self.host == other.host)

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def max_level(self) -> int:
        return max((max_level(a) for a in self.coeffs), default=0)

    def __repr__(self):
        if not self.coeffs:
            return "ModuleElem(0)"
        body = " + ".join(f"{v}*x[{addr_str(a)}]" for a, v in self.terms())
        return f"ModuleElem({body})"


def _check_host(Q: MaterializedQuiver, y: ModuleElem):
    if y.host is not Q.expr and y.host != Q.expr:
        raise InvalidInput("module element belongs to a different quiver")


def _step(expr, coeffs: dict, color: ColorId) -> dict:
    out: dict = {}
    for addr, value in coeffs.items():
        for t in targets(expr, addr, color):
            out[t] = out.get(t, 0) + value
    return out


def act(Q: MaterializedQuiver, y: ModuleElem, f: Series) -> ModuleElem:
    """``y f`` computed by walking every word of ``supp f`` forward from ``supp y``.

    Only exact series are accepted, and the walk must stay inside the window
    of ``Q``; otherwise :class:`BudgetError` names the budget that would do.
    """
    _check_host(Q, y)
    if not f.exact:
        raise InvalidInput("act needs an exact (polynomial) series; got a truncated one")
    for addr in y.coeffs:
        if not is_vertex(Q.expr, addr):
            raise InvalidInput(f"{addr_str(addr)} is not a vertex of the host quiver")
    start = y.max_level()
    if start > Q.budget:
        raise BudgetError(start)
    result: dict = {}
    need = 0
    # walk a prefix trie so shared prefixes are only followed once
    trie: dict = {}
    for word, lam in f.coeffs.items():
        node = trie
        for c in word:
            node = node.setdefault(c, {})
        node[None] = lam

    def walk(node, current):
        nonlocal need
        lam = node.get(None)
        if lam is not None:
            for addr, value in current.items():
                result[addr] = result.get(addr, 0) + lam * value
        for c, child in node.items():
            if c is None:
                continue
            nxt = _step(Q.expr, current, c)
            if nxt:
                need = max(need, max(max_level(a) for a in nxt))
                walk(child, nxt)

    walk(trie, dict(y.coeffs))
    if need > Q.budget:
        raise BudgetError(need, f"action reaches level {need}; window is N={Q.budget}")
    return ModuleElem(y.host, result)


# -- level filtration on tilde hosts ---------------------------------------

def _tilde(host: QuiverExpr) -> Tilde:
    if not isinstance(host, Tilde):
        raise InvalidInput("level operations need a tilde quiver as host")
    return host


def min_level(y: ModuleElem) -> int:
    """Smallest top level met by ``supp y``."""
    _tilde(y.host)
    if y.is_zero():
        raise InvalidInput("the zero element has no minimal level")
    return min(a[0] for a in y.coeffs)


def in_m_geq(y: ModuleElem, i: int) -> bool:
    _tilde(y.host)
    return all(a[0] >= i for a in y.coeffs)


def project_level(y: ModuleElem, i: int) -> ModuleElem:
    _tilde(y.host)
    return ModuleElem(y.host, {a: v for a, v in y.coeffs.items() if a[0] == i})


def shift(y: ModuleElem, i: int) -> ModuleElem:
    """Move every ``x_(j, v)`` to ``x_(j + i, v)``."""
    _tilde(y.host)
    if i < 0:
        raise InvalidInput("shift amount must be non-negative")
    return ModuleElem(y.host, {(a[0] + i,) + a[1:]: v for a, v in y.coeffs.items()})


def embed_layer(host: Tilde, y: ModuleElem, i: int) -> ModuleElem:
    """Copy an element of the inner module onto layer ``i`` of ``host``."""
    _tilde(host)
    if y.host is not host.inner and y.host != host.inner:
        raise InvalidInput("element does not live over the inner quiver")
    return ModuleElem(host, {(i,) + a: v for a, v in y.coeffs.items()})


def restrict_layer(y: ModuleElem, i: int) -> ModuleElem:
    """Inverse of :func:`embed_layer` on elements supported in layer ``i``."""
    host = _tilde(y.host)
    return ModuleElem(host.inner, {a[1:]: v for a, v in y.coeffs.items() if a[0] == i})


# -- spans -----------------------------------------------------------------

def out_colors(expr: QuiverExpr, addr: Address, N: int) -> list[ColorId]:
    """Colors of arrows leaving ``addr`` whose target lies in the window."""
    if isinstance(expr, Loop):
        return [expr.color]
    if isinstance(expr, Finite):
        return sorted({c for s, _, c in expr.arrows if (s,) == addr}, key=ColorId.sort_key)
    head, rest = addr[0], addr[1:]
    if isinstance(expr, Tilde):
        out = out_colors(expr.inner, rest, N)
        if head + 1 <= N:
            out = out + [ColorId.cross(expr.site, rest, w)
                         for w in _window_vertices(expr.inner, N)]
        return out
    return out_colors(expr.part(head), rest, N)


class _Echelon:
    """Row echelon form over the rationals keyed by canonical vertex order."""

    def __init__(self, key):
        self.key = key
        self.rows: dict = {}  # pivot address -> row dict, pivot coefficient 1

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        heap = [(self.key(a), a) for a in vec]
        heapq.heapify(heap)
        seen = set()
        while heap:
            _, a = heapq.heappop(heap)
            if a in seen:
                continue
            seen.add(a)
            coef = vec.get(a)
            if not coef or a not in self.rows:
                continue
            for b, v in self.rows[a].items():
                nv = vec.get(b, 0) - coef * v
                if nv:
                    if b not in vec:
                        heapq.heappush(heap, (self.key(b), b))
                    vec[b] = nv
                else:
                    vec.pop(b, None)
        return vec

    def insert(self, vec: dict) -> dict | None:
        res = self.reduce(vec)
        if not res:
            return None
        pivot = min(res, key=self.key)
        lead = res[pivot]
        row = {a: v / lead for a, v in res.items()}
        self.rows[pivot] = row
        return row

    def reduced_rows(self) -> list:
        pivots = sorted(self.rows, key=self.key)
        rows = {p: dict(self.rows[p]) for p in pivots}
        # back substitution, last pivot first
        for k in range(len(pivots) - 1, -1, -1):
            p = pivots[k]
            for q in pivots[:k]:
                coef = rows[q].get(p)
                if coef:
                    for b, v in rows[p].items():
                        nv = rows[q].get(b, 0) - coef * v
                        if nv:
                            rows[q][b] = nv
                        else:
                            rows[q].pop(b, None)
        return [(p, rows[p]) for p in pivots]


@dataclass
class SpanBasis:
    """Reduced row echelon basis of a subspace of the window's vertex space.

    With ``quotient_level`` set, the space is taken modulo the submodule of
    elements supported at top level ``> quotient_level``.
    """

    expr: QuiverExpr
    budget: int
    rows: list  # ModuleElem, pivots strictly increasing
    pivots: list
    quotient_level: int | None = None

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, z: ModuleElem) -> bool:
        return membership(z, self) is not None


def _span_key(expr):
    cache: dict = {}

    def key(a):
        k = cache.get(a)
        if k is None:
            k = cache[a] = _canonical_key(expr, a)
        return k

    return key


def _has_tilde(expr) -> bool:
    if isinstance(expr, Tilde):
        return True
    if isinstance(expr, Sum):
        return any(_has_tilde(p) for _, p in expr.parts)
    return False


def _cut(vec: dict, W: int | None) -> dict:
    if W is None:
        return vec
    return {a: v for a, v in vec.items() if a[0] <= W}


def make_basis(Q: MaterializedQuiver, vectors: Iterable[ModuleElem],
               quotient_level: int | None = None) -> SpanBasis:
    """Linear span (no module action) of ``vectors`` as a :class:`SpanBasis`."""
    if quotient_level is not None:
        _tilde(Q.expr)
    ech = _Echelon(_span_key(Q.expr))
    for v in vectors:
        _check_host(Q, v)
        _check_window(Q, v)
        ech.insert(_cut(v.coeffs, quotient_level))
    return _finish(Q, ech, quotient_level)


def _finish(Q, ech, W) -> SpanBasis:
    rows = ech.reduced_rows()
    return SpanBasis(Q.expr, Q.budget, [ModuleElem(Q.expr, r) for _, r in rows],
                     [p for p, _ in rows], W)


def _check_window(Q, v: ModuleElem):
    for a in v.coeffs:
        Q.require(a)


def cyclic_span(Q: MaterializedQuiver, generators: Iterable[ModuleElem], L: int,
                quotient_level: int | None = None) -> SpanBasis:
    """Span of ``g w`` for every generator ``g`` and every word ``w`` with ``|w| <= L``.

    Words range over the colors of the window, and a word only counts while
    its image stays inside the window, so every row is an exact element of
    the submodule generated. Only vectors that enlarged the span at the
    previous length are acted on again; by linearity this spans the same
    space as acting on all words.

    On a tilde host, ``quotient_level=W`` computes modulo the submodule of
    elements living at top level ``> W``.
    """
    generators = list(generators)
    W = quotient_level
    if W is not None:
        _tilde(Q.expr)
        if W > Q.budget:
            raise BudgetError(W, f"quotient level {W} exceeds the window N={Q.budget}")
    for g in generators:
        _check_host(Q, g)
        for a in g.coeffs:
            if not is_vertex(Q.expr, a):
                raise InvalidInput(f"{addr_str(a)} is not a vertex of the host quiver")
        if W is None and _has_tilde(Q.expr):
            need = g.max_level() + L if not g.is_zero() else 0
            if need > Q.budget:
                raise BudgetError(need, f"span of length {L} needs N >= {need}")
        else:
            _check_window(Q, g)
    N = Q.budget
    ech = _Echelon(_span_key(Q.expr))
    frontier = [r for r in (ech.insert(_cut(g.coeffs, W)) for g in generators) if r]
    for _ in range(L):
        nxt = []
        for vec in frontier:
            colors: dict = {}
            for a in vec:
                for c in out_colors(Q.expr, a, N):
                    colors[c] = None
            for c in colors:
                image = _cut(_step(Q.expr, vec, c), W)
                if not image or any(max_level(a) > N for a in image):
                    continue
                row = ech.insert(image)
                if row:
                    nxt.append(row)
        if not nxt:
            break
        frontier = nxt
    return _finish(Q, ech, W)


def membership(z: ModuleElem, B: SpanBasis) -> list[Fraction] | None:
    """Coefficients of ``z`` in the rows of ``B``, or ``None`` if ``z`` is not in the span."""
    if z.host is not B.expr and z.host != B.expr:
        raise InvalidInput("element and basis live over different quivers")
    for a in z.coeffs:
        if not is_vertex(B.expr, a) or max_level(a) > B.budget:
            raise InvalidInput(f"{addr_str(a)} lies outside the basis window N={B.budget}")
    target = _cut(z.coeffs, B.quotient_level)
    coeffs = [target.get(p, Fraction(0)) for p in B.pivots]
    rest = dict(target)
    for c, row in zip(coeffs, B.rows):
        if not c:
            continue
        for a, v in row.coeffs.items():
            nv = rest.get(a, 0) - c * v
            if nv:
                rest[a] = nv
            else:
                rest.pop(a, None)
    return None if rest else coeffs


# -- JSON ------------------------------------------------------------------

def elem_to_json(y: ModuleElem) -> dict:
    return {"terms": [{"vertex": addr_str(a), "num": v.numerator, "den": v.denominator}
                      for a, v in y.terms()]}


def elem_from_json(host: QuiverExpr, data) -> ModuleElem:
    if isinstance(data, str):
        data = json.loads(data)
    coeffs: dict = {}
    try:
        for term in data["terms"]:
            addr = parse_addr(term["vertex"])
            if not is_vertex(host, addr):
                raise InvalidInput(f"{term['vertex']} is not a vertex of the host quiver")
            den = term.get("den", 1)
            if den == 0:
                raise InvalidInput("zero denominator")
            coeffs[addr] = coeffs.get(addr, 0) + Fraction(term["num"], den)
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed module element JSON: {exc}") from None
    return ModuleElem(host, coeffs)
