"""Words over a color alphabet and truncated noncommutative power series.

A :class:`Series` is a finitely supported map from words to rationals plus an
exactness order: ``None`` means the stored coefficients are the whole element
(a polynomial); an integer ``D`` means only words of length ``<= D`` are
known.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InvalidInput

Address = tuple  # components are str (Sum tags) or int (Tilde levels)
Word = tuple  # tuple of ColorId; () is the monoid identity


def addr_str(addr: Address) -> str:
    parts = ["v"]
    for part in addr:
        parts.append(f"@{part}" if isinstance(part, int) else part)
    return "/".join(parts)


def short_addr(addr: Address) -> str:
    """Compact display form, e.g. ``0/v`` for ``(0, "v")``."""
    return "/".join(str(p) for p in addr) or "."


def parse_addr(text: str) -> Address:
    parts = text.split("/")
    if parts[0] != "v":
        raise InvalidInput(f"bad vertex address {text!r}")
    out = []
    for part in parts[1:]:
        if part.startswith("@"):
            try:
                level = int(part[1:])
            except ValueError:
                raise InvalidInput(f"bad level in address {text!r}") from None
            if level < 0:
                raise InvalidInput(f"negative level in address {text!r}")
            out.append(level)
        elif part:
            out.append(part)
        else:
            raise InvalidInput(f"empty component in address {text!r}")
    return tuple(out)


def _addr_key(addr: Address):
    # ints sort before strs at the same position; positions only mix types
    # across different expression shapes
    return tuple((0, p, "") if isinstance(p, int) else (1, 0, p) for p in addr)


@dataclass(frozen=True)
class ColorId:
    """A color: either a named symbol or a fresh cross color ``c_{v,w}``.

    ``site`` namespaces the color by the construction step that introduced
    it, so cross colors of different tilde nodes never collide.
    """

    site: str
    name: str | None = None
    src: Address | None = None
    tgt: Address | None = None

    @classmethod
    def named(cls, name: str, site: str = "base") -> "ColorId":
        return cls(site, name=name)

    @classmethod
    def cross(cls, site: str, src: Address, tgt: Address) -> "ColorId":
        return cls(site, src=tuple(src), tgt=tuple(tgt))

    @property
    def is_cross(self) -> bool:
        return self.name is None

    def sort_key(self):
        if self.is_cross:
            return (self.site, 1, "", _addr_key(self.src), _addr_key(self.tgt))
        return (self.site, 0, self.name, (), ())

    def __str__(self):
        if self.is_cross:
            return f"{self.site}:{addr_str(self.src)}>{addr_str(self.tgt)}"
        return f"{self.site}:{self.name}"

    def label(self) -> str:
        """Short human-readable name used in pretty printing and DOT output."""
        if self.is_cross:
            return f"c[{self.site}]({short_addr(self.src)},{short_addr(self.tgt)})"
        return self.name if self.site == "base" else f"{self.name}_{self.site}"


def parse_color(text: str) -> ColorId:
    site, sep, rest = text.partition(":")
    if not sep or not site or not rest:
        raise InvalidInput(f"bad color id {text!r}")
    if ">" in rest:
        src, _, tgt = rest.partition(">")
        return ColorId.cross(site, parse_addr(src), parse_addr(tgt))
    return ColorId.named(rest, site)


def word_key(word: Word):
    return (len(word), tuple(c.sort_key() for c in word))


def word_label(word: Word) -> str:
    return "*".join(c.label() for c in word) if word else "1"


Coeff = Union[int, Fraction]


class Series:
    """Truncated element of the formal monoid algebra over the rationals."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping[Word, Coeff] | None = None, order: int | None = None):
        if order is not None and order < 0:
            raise InvalidInput("truncation order must be non-negative")
        clean = {}
        for word, value in (coeffs or {}).items():
            word = tuple(word)
            value = Fraction(value)
            if value == 0:
                continue
            if order is not None and len(word) > order:
                continue
            clean[word] = value
        self.coeffs: dict[Word, Fraction] = clean
        self.order = order

    @classmethod
    def zero(cls, order: int | None = None) -> "Series":
        return cls({}, order)

    @classmethod
    def one(cls) -> "Series":
        return cls({(): 1})

    @classmethod
    def monomial(cls, word: Iterable[ColorId], coeff: Coeff = 1) -> "Series":
        return cls({tuple(word): coeff})

    @property
    def exact(self) -> bool:
        return self.order is None

    def coeff(self, word: Iterable[ColorId]) -> Fraction:
        return self.coeffs.get(tuple(word), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_length(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def colors(self) -> set:
        return {c for w in self.coeffs for c in w}

    def terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.coeffs.items(), key=lambda kv: word_key(kv[0]))

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, other.scale(-1))

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, k: Coeff) -> "Series":
        k = Fraction(k)
        return Series({w: k * v for w, v in self.coeffs.items()}, self.order)

    def __repr__(self):
        bound = "exact" if self.order is None else f"O({self.order + 1})"
        return f"Series({format_series(self)}; {bound})"


def _min_order(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def add(f: Series, g: Series) -> Series:
    out = dict(f.coeffs)
    for w, v in g.coeffs.items():
        out[w] = out.get(w, 0) + v
    return Series(out, _min_order(f.order, g.order))


def mul(f: Series, g: Series) -> Series:
    """Convolution over factorizations ``w = w1 w2`` (noncommutative)."""
    order = _min_order(f.order, g.order)
    out: dict[Word, Fraction] = {}
    for w1, a in f.coeffs.items():
        for w2, b in g.coeffs.items():
            if order is not None and len(w1) + len(w2) > order:
                continue
            w = w1 + w2
            out[w] = out.get(w, 0) + a * b
    return Series(out, order)


def support(f: Series) -> set:
    return set(f.coeffs)


def truncate(f: Series, D: int) -> Series:
    return Series(f.coeffs, _min_order(f.order, D))


def format_series(f: Series) -> str:
    if f.is_zero():
        return "0"
    chunks = []
    for word, value in f.terms():
        sign = "-" if value < 0 else "+"
        mag = abs(value)
        body = word_label(word)
        if word and mag == 1:
            text = body
        elif word:
            text = f"{mag}*{body}"
        else:
            text = str(mag)
        chunks.append((sign, text))
    first_sign, first = chunks[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in chunks[1:]:
        out += f" {sign} {text}"
    return out


# -- JSON ------------------------------------------------------------------

def series_to_json(f: Series) -> dict:
    return {
        "order": "exact" if f.order is None else f.order,
        "terms": [
            {"word": [str(c) for c in w], "num": v.numerator, "den": v.denominator}
            for w, v in f.terms()
        ],
    }


def series_from_json(data) -> Series:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        order = data.get("order", "exact")
        if order != "exact" and (not isinstance(order, int) or isinstance(order, bool)):
            raise InvalidInput(f"bad series order {order!r}")
        coeffs: dict = {}
        for term in data["terms"]:
            word = tuple(parse_color(c) for c in term["word"])
            den = term.get("den", 1)
            if den == 0:
                raise InvalidInput("zero denominator")
            coeffs[word] = coeffs.get(word, 0) + Fraction(term["num"], den)
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput(f"malformed series JSON: {exc}") from None
    return Series(coeffs, None if order == "exact" else order)
