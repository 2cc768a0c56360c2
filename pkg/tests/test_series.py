import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomspec.series import (
    ColorId, Series, add, format_series, mul, parse_addr, parse_color, series_from_json,
    series_to_json, support, truncate,
)

a, b, c = (ColorId.named(s) for s in "abc")


def poly(*terms, order=None):
    return Series({tuple(w): v for w, v in terms}, order)


def test_add_zero_and_cancellation():
    f = poly(((a,), 2), ((a, b), 3))
    assert add(f, Series.zero()) == f
    assert add(poly(((a,), 2)), poly(((a,), -2))).is_zero()
    assert support(add(poly(((a,), 2)), poly(((a,), -2)))) == set()


def test_add_order_propagation():
    f = poly(((), 1), ((a,), 1))
    g = poly(((b,), 1), order=1)
    h = add(f, g)
    assert h.order == 1
    assert h == poly(((), 1), ((a,), 1), ((b,), 1), order=1)


def test_mul_noncommutative():
    assert mul(Series.monomial([a]), Series.monomial([b])) == Series.monomial([a, b])
    assert mul(Series.monomial([b]), Series.monomial([a])) == Series.monomial([b, a])
    assert Series.monomial([a, b]) != Series.monomial([b, a])


def test_mul_geometric_truncation():
    f = poly(((), 1), ((c,), -1))
    g = poly(((), 1), ((c,), 1), ((c, c), 1))
    assert mul(f, g) == poly(((), 1), ((c, c, c), -1))
    assert truncate(mul(f, g), 2) == poly(((), 1), order=2)
    assert mul(truncate(f, 2), g) == poly(((), 1), order=2)


def test_mul_identity():
    f = poly(((), 3), ((a, b), Fraction(1, 2)), ((c,), -1))
    assert mul(f, Series.one()) == f
    assert mul(Series.one(), f) == f


def test_support():
    assert support(Series.zero()) == set()
    assert support(poly(((a,), 2), ((a, b), 3))) == {(a,), (a, b)}
    f = poly(((a,), 2), ((b,), 1))
    assert support(f + (-f)) == set()


def test_truncate():
    f = poly(((), 1), ((c,), 1), ((c, c), 1))
    assert truncate(f, 1) == poly(((), 1), ((c,), 1), order=1)
    assert truncate(truncate(f, 1), 1) == truncate(f, 1)
    assert truncate(f, 5).coeffs == f.coeffs
    assert truncate(truncate(f, 3), 5).order == 3


# -- properties ------------------------------------------------------------

letters = st.sampled_from([a, b, c])
words = st.lists(letters, max_size=3).map(tuple)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, bounded=True):
    terms = draw(st.dictionaries(words, coeffs, max_size=5))
    order = draw(st.one_of(st.none(), st.integers(2, 5))) if bounded else None
    return Series(terms, order)


@settings(max_examples=100, deadline=None)
@given(series(), series(), series(), st.integers(0, 4))
def test_associative_at_truncation(f, g, h, D):
    lhs = truncate(mul(mul(f, g), h), D)
    rhs = truncate(mul(f, mul(g, h)), D)
    assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(series(), series(), series())
def test_distributive(f, g, h):
    assert mul(f, add(g, h)) == add(mul(f, g), mul(f, h))
    assert mul(add(g, h), f) == add(mul(g, f), mul(h, f))


@settings(max_examples=100, deadline=None)
@given(series(), series())
def test_support_of_product(f, g):
    products = {w1 + w2 for w1 in support(f) for w2 in support(g)}
    assert support(mul(f, g)) <= products


def dense_mul(p, q, D):
    out = [Fraction(0)] * (D + 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            if i + j <= D:
                out[i + j] += x * y
    return out


@settings(max_examples=100, deadline=None)
@given(st.lists(coeffs, max_size=6), st.lists(coeffs, max_size=6), st.integers(0, 8))
def test_single_color_matches_dense_oracle(p, q, D):
    f = Series({(c,) * k: v for k, v in enumerate(p)}, D)
    g = Series({(c,) * k: v for k, v in enumerate(q)}, D)
    expected = dense_mul(p, q, D)
    h = mul(f, g)
    assert [h.coeff((c,) * k) for k in range(D + 1)] == expected
    assert h.order == D


def test_json_round_trip():
    cross = ColorId.cross("p", (0, "q"), (1, "q"))
    f = Series({(): Fraction(-3, 6), (a, cross): 2}, 4)
    data = series_to_json(f)
    assert data["order"] == 4
    assert data["terms"][0] == {"word": [], "num": -1, "den": 2}
    assert series_from_json(json.dumps(data)) == f


def test_color_and_address_strings():
    cross = ColorId.cross("p", (0, "q"), (1, "q"))
    assert str(cross) == "p:v/@0/q>v/@1/q"
    assert parse_color(str(cross)) == cross
    assert parse_color("x:c") == ColorId.named("c", "x")
    assert parse_addr("v/q/@3/r") == ("q", 3, "r")


def test_format():
    f = poly(((), 1), ((c, c, c), -1))
    assert format_series(f) == "1 - c*c*c"
    assert format_series(Series.zero()) == "0"
