"""Finite posets, their up-set topology and isomorphism testing.

Elements are opaque strings. Everything that needs a deterministic order
uses plain lexicographic order on the ids.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CycleError, InvalidInput

ENUMERATION_CAP = 16

# characters reserved by the address and color string formats
_RESERVED = set("/:>,@")


def check_id(name) -> str:
    if not isinstance(name, str) or not name:
        raise InvalidInput(f"element ids must be non-empty strings, got {name!r}")
    bad = _RESERVED.intersection(name)
    if bad or name.strip() != name:
        raise InvalidInput(f"element id {name!r} contains reserved characters")
    return name


@dataclass(frozen=True)
class Poset:
    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]

    def __post_init__(self):
        elems = tuple(sorted(self.elements))
        if len(set(elems)) != len(elems):
            raise InvalidInput("duplicate element ids")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "leq", frozenset(self.leq))
        members = set(elems)
        for a, b in self.leq:
            if a not in members or b not in members:
                raise InvalidInput(f"pair ({a}, {b}) mentions an unknown element")
        for a in elems:
            if (a, a) not in self.leq:
                raise InvalidInput(f"relation is not reflexive at {a}")
        for a, b in self.leq:
            if a != b and (b, a) in self.leq:
                raise InvalidInput(f"relation is not antisymmetric: {a}, {b}")
        for a, b in self.leq:
            for c in self.up(b):
                if (a, c) not in self.leq:
                    raise InvalidInput(f"relation is not transitive: {a} <= {b} <= {c}")

    def __len__(self):
        return len(self.elements)

    def le(self, a, b) -> bool:
        return (a, b) in self.leq

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self.leq

    def up(self, a) -> list[str]:
        return [b for b in self.elements if (a, b) in self.leq]

    def down(self, a) -> list[str]:
        return [b for b in self.elements if (b, a) in self.leq]

    def maximal(self) -> list[str]:
        return [a for a in self.elements if self.up(a) == [a]]

    def covers(self) -> list[tuple[str, str]]:
        """Hasse diagram edges (a, b) with a < b and nothing strictly between."""
        out = []
        for a, b in sorted(self.leq):
            if a == b:
                continue
            if not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                out.append((a, b))
        return out

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "leq": [list(p) for p in sorted(self.leq)]}


def _closure(elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> set:
    elements = list(elements)
    rel = {(a, a) for a in elements} | set(pairs)
    succ = {a: {b for x, b in rel if x == a} for a in elements}
    changed = True
    while changed:
        changed = False
        for a in elements:
            new = set().union(*(succ[b] for b in succ[a]))
            if not new <= succ[a]:
                succ[a] |= new
                changed = True
    return {(a, b) for a in elements for b in succ[a]}


def _find_cycle(elements, covers):
    succ = {a: [] for a in elements}
    for a, b in covers:
        succ[a].append(b)
    state = {}
    stack = []

    def visit(a):
        state[a] = 1
        stack.append(a)
        for b in succ[a]:
            if state.get(b) == 1:
                return stack[stack.index(b):] + [b]
            if b not in state:
                found = visit(b)
                if found:
                    return found
        stack.pop()
        state[a] = 2
        return None

    for a in elements:
        if a not in state:
            found = visit(a)
            if found:
                return found
    return None


def from_hasse(elements: Iterable[str], covers: Iterable[Iterable[str]]) -> Poset:
    """Build the poset whose order is the reflexive-transitive closure of ``covers``."""
    elements = [check_id(e) for e in elements]
    if len(set(elements)) != len(elements):
        raise InvalidInput("duplicate element ids")
    members = set(elements)
    pairs = []
    for pair in covers:
        pair = tuple(pair)
        if len(pair) != 2:
            raise InvalidInput(f"cover {pair!r} is not a pair")
        a, b = pair
        for x in (a, b):
            if x not in members:
                raise InvalidInput(f"unknown element {x!r} in cover ({a}, {b})")
        if a == b:
            raise CycleError([a, a])
        pairs.append((a, b))
    cycle = _find_cycle(sorted(members), pairs)
    if cycle:
        raise CycleError(cycle)
    return Poset(tuple(elements), frozenset(_closure(elements, pairs)))


def chain(n: int, prefix: str = "x") -> Poset:
    names = [f"{prefix}{i}" for i in range(n)]
    return from_hasse(names, zip(names, names[1:]))


def antichain(n: int, prefix: str = "x") -> Poset:
    return from_hasse([f"{prefix}{i}" for i in range(n)], [])


def is_upset(P: Poset, members) -> bool:
    members = set(members)
    return all(b in members for a in members for b in P.up(a))


def upward_closed_sets(P: Poset, cap: int = ENUMERATION_CAP) -> list[frozenset]:
    """All up-sets of ``P``, i.e. the open sets of its Alexandrov-type topology.

    Enumerated by deciding elements from the top down, so no subset is
    generated twice and every partial choice stays upward closed.
    """
    if len(P) > cap:
        raise InvalidInput(f"poset has {len(P)} elements; enumeration cap is {cap}")
    # linear extension with larger elements first
    order = sorted(P.elements, key=lambda a: (-len(P.down(a)), a))
    found = []

    def grow(k, chosen):
        if k == len(order):
            found.append(frozenset(chosen))
            return
        a = order[k]
        grow(k + 1, chosen)
        if all(b in chosen for b in P.up(a) if b != a):
            chosen.add(a)
            grow(k + 1, chosen)
            chosen.discard(a)

    grow(0, set())
    found.sort(key=lambda s: (len(s), sorted(s)))
    return found


def specialization_order(elements: Iterable[str], opens: Iterable[Iterable[str]]) -> Poset:
    """Recover the order in which ``a <= b`` iff every open containing ``a`` contains ``b``."""
    elements = sorted(elements)
    opens = [frozenset(U) for U in opens]
    rel = set()
    for a in elements:
        for b in elements:
            if all(b in U for U in opens if a in U):
                rel.add((a, b))
    for a, b in sorted(rel):
        if a != b and (b, a) in rel:
            raise InvalidInput(f"points {a} and {b} are not separated by any open set")
    return Poset(tuple(elements), frozenset(rel))


def _profile(P: Poset, a) -> tuple[int, int]:
    return (len(P.up(a)), len(P.down(a)))


def find_isomorphism(P: Poset, Q: Poset) -> dict[str, str] | None:
    """First order isomorphism ``P -> Q`` in lexicographic backtracking order."""
    if len(P) != len(Q) or len(P.leq) != len(Q.leq):
        return None
    if sorted(map(lambda a: _profile(P, a), P.elements)) != sorted(
        map(lambda b: _profile(Q, b), Q.elements)
    ):
        return None
    src = list(P.elements)
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(k):
        if k == len(src):
            return True
        a = src[k]
        for b in Q.elements:
            if b in used or _profile(P, a) != _profile(Q, b):
                continue
            if all(P.le(a, x) == Q.le(b, mapping[x]) and P.le(x, a) == Q.le(mapping[x], b)
                   for x in src[:k]):
                mapping[a] = b
                used.add(b)
                if extend(k + 1):
                    return True
                del mapping[a]
                used.discard(b)
        return False

    return dict(mapping) if extend(0) else None


def longest_chain(P: Poset) -> int:
    """Number of elements in a longest chain."""
    memo: dict[str, int] = {}

    def height(a):
        if a not in memo:
            memo[a] = 1 + max((height(b) for b in P.up(a) if b != a), default=0)
        return memo[a]

    return max((height(a) for a in P.elements), default=0)


def cn_realizable(P: Poset) -> bool:
    """True iff ``P`` has no chain ``x < y < z``.

    These are exactly the finite posets that occur as prime spectra of
    commutative noetherian rings.
    """
    for a, b in P.leq:
        if a != b and any(P.lt(b, c) for c in P.elements):
            return False
    return True


# -- generation ------------------------------------------------------------

def _downsets(P: Poset) -> list[frozenset]:
    members = set(P.elements)
    return [frozenset(members - U) for U in upward_closed_sets(P, cap=64)]


def _invariant(P: Poset):
    return (len(P.leq), tuple(sorted(_profile(P, a) for a in P.elements)))


def posets_up_to_iso(n: int) -> list[Poset]:
    """One representative per isomorphism class of ``n``-element posets.

    Every poset is obtained from a smaller one by adjoining a maximal
    element above some down-set, so classes are built size by size and
    deduplicated with :func:`find_isomorphism`. Elements are ``x0..x{n-1}``.
    """
    classes = [Poset((), frozenset())]
    for k in range(n):
        new = f"x{k}"
        buckets: dict = {}
        nxt = []
        for Q in classes:
            for D in _downsets(Q):
                rel = set(Q.leq) | {(new, new)} | {(d, new) for d in D}
                R = Poset(Q.elements + (new,), frozenset(rel))
                bucket = buckets.setdefault(_invariant(R), [])
                if any(find_isomorphism(R, S) is not None for S in bucket):
                    continue
                bucket.append(R)
                nxt.append(R)
        classes = nxt
    return classes


def random_poset(n: int, rng: random.Random, density: float = 0.4) -> Poset:
    """Random naturally labelled poset: covers only go from lower to higher index."""
    names = [f"x{i}" for i in range(n)]
    covers = [(names[i], names[j]) for i, j in itertools.combinations(range(n), 2)
              if rng.random() < density]
    return from_hasse(names, covers)


def iter_small_posets(max_size: int) -> Iterator[Poset]:
    for n in range(1, max_size + 1):
        yield from posets_up_to_iso(n)


# -- JSON ------------------------------------------------------------------

def poset_from_json(data) -> Poset:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "elements" not in data:
        raise InvalidInput("poset JSON needs an 'elements' list")
    if "hasse" in data:
        return from_hasse(data["elements"], data["hasse"])
    if "leq" in data:
        elements = [check_id(e) for e in data["elements"]]
        return Poset(tuple(elements), frozenset(tuple(p) for p in data["leq"]))
    return from_hasse(data["elements"], [])
