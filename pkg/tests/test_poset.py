import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomspec.errors import CycleError, InvalidInput
from atomspec.poset import (
    Poset, antichain, chain, cn_realizable, find_isomorphism, from_hasse, is_upset,
    longest_chain, poset_from_json, posets_up_to_iso, random_poset, specialization_order,
    upward_closed_sets,
)


def floyd_warshall(elements, covers):
    idx = {e: k for k, e in enumerate(elements)}
    n = len(elements)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a, b in covers:
        reach[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    return {(a, b) for a in elements for b in elements if reach[idx[a]][idx[b]]}


def test_from_hasse_two_chain():
    P = from_hasse(["a", "b"], [("a", "b")])
    assert P.leq == {("a", "a"), ("b", "b"), ("a", "b")}


def test_from_hasse_singleton():
    P = from_hasse(["a"], [])
    assert P.elements == ("a",) and P.leq == {("a", "a")}


def test_from_hasse_three_chain_matches_floyd_warshall():
    covers = [("a", "b"), ("b", "c")]
    P = from_hasse(["a", "b", "c"], covers)
    assert ("a", "c") in P.leq
    assert P.leq == floyd_warshall(["a", "b", "c"], covers)


@pytest.mark.parametrize("seed", range(20))
def test_from_hasse_random_against_floyd_warshall(seed):
    rng = random.Random(seed)
    names = [f"e{i}" for i in range(6)]
    covers = [(names[i], names[j]) for i, j in itertools.combinations(range(6), 2)
              if rng.random() < 0.35]
    assert from_hasse(names, covers).leq == floyd_warshall(names, covers)


def test_from_hasse_rejects_cycle():
    with pytest.raises(CycleError) as info:
        from_hasse(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    assert info.value.cycle[0] == info.value.cycle[-1]
    assert set(info.value.cycle) == {"a", "b", "c"}


def test_from_hasse_rejects_unknown_id():
    with pytest.raises(InvalidInput, match="unknown"):
        from_hasse(["a"], [("a", "z")])


def test_poset_rejects_bad_relations():
    with pytest.raises(InvalidInput):
        Poset(("a", "b"), frozenset({("a", "a")}))
    with pytest.raises(InvalidInput):
        Poset(("a", "b"), frozenset({("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")}))


def brute_upsets(P):
    out = []
    for k in range(len(P) + 1):
        for S in itertools.combinations(P.elements, k):
            if is_upset(P, S):
                out.append(frozenset(S))
    return set(out)


def test_upsets_two_chain():
    P = from_hasse(["a", "b"], [("a", "b")])
    assert set(upward_closed_sets(P)) == {frozenset(), frozenset({"b"}), frozenset({"a", "b"})}
    assert set(upward_closed_sets(P)) == brute_upsets(P)


def test_upsets_antichain_and_singleton():
    assert len(upward_closed_sets(antichain(2))) == 4
    assert upward_closed_sets(antichain(1)) == [frozenset(), frozenset({"x0"})]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_upsets_against_brute_force(n):
    for P in posets_up_to_iso(n):
        found = upward_closed_sets(P)
        assert len(found) == len(set(found))
        assert set(found) == brute_upsets(P)


def test_upsets_cap():
    with pytest.raises(InvalidInput, match="cap"):
        upward_closed_sets(antichain(17))
    assert len(upward_closed_sets(antichain(3), cap=3)) == 8


def test_specialization_round_trip_chain():
    P = from_hasse(["a", "b"], [("a", "b")])
    assert specialization_order(P.elements, upward_closed_sets(P)) == P


def test_specialization_all_subsets_is_antichain():
    opens = [set(), {"a"}, {"b"}, {"a", "b"}]
    assert specialization_order(["a", "b"], opens).leq == {("a", "a"), ("b", "b")}


def test_specialization_indistinguishable():
    with pytest.raises(InvalidInput, match="a and b"):
        specialization_order(["a", "b"], [set(), {"a", "b"}])


def test_poset_class_counts():
    # A000112: 1, 2, 5, 16, 63 unlabeled posets
    assert [len(posets_up_to_iso(n)) for n in range(1, 6)] == [1, 2, 5, 16, 63]


def relabel(P, rng):
    names = list(P.elements)
    new = [f"r{k}" for k in range(len(names))]
    rng.shuffle(new)
    m = dict(zip(names, new))
    return Poset(tuple(new), frozenset((m[a], m[b]) for a, b in P.leq))


def brute_iso(P, Q):
    if len(P) != len(Q):
        return False
    for perm in itertools.permutations(Q.elements):
        m = dict(zip(P.elements, perm))
        if all(((m[a], m[b]) in Q.leq) == ((a, b) in P.leq)
               for a in P.elements for b in P.elements):
            return True
    return False


def test_isomorphism_renamed_chain():
    P = chain(2)
    Q = from_hasse(["u", "w"], [("u", "w")])
    assert find_isomorphism(P, Q) == {"x0": "u", "x1": "w"}


def test_isomorphism_chain_vs_antichain():
    assert find_isomorphism(chain(2), antichain(2)) is None


def test_isomorphism_four_element_pairs_against_permutations():
    rng = random.Random(4)
    pool = posets_up_to_iso(4)
    pool = pool + [relabel(P, rng) for P in pool]
    for P in pool:
        for Q in pool:
            m = find_isomorphism(P, Q)
            assert (m is not None) == brute_iso(P, Q)
            if m is not None:
                assert all(((m[a], m[b]) in Q.leq) == ((a, b) in P.leq)
                           for a in P.elements for b in P.elements)


def test_isomorphism_symmetric_in_success():
    rng = random.Random(1)
    for _ in range(40):
        P, Q = random_poset(5, rng), random_poset(5, rng)
        assert (find_isomorphism(P, Q) is None) == (find_isomorphism(Q, P) is None)


def test_cn_realizable_examples():
    assert cn_realizable(chain(3)) is False
    assert cn_realizable(antichain(4)) is True
    assert cn_realizable(chain(2)) is True


def dag_longest_path(P):
    # independent oracle: longest path (in vertices) over the Hasse DAG
    covers = P.covers()
    best = {a: 1 for a in P.elements}
    for _ in P.elements:
        for a, b in covers:
            best[b] = max(best[b], best[a] + 1)
    return max(best.values())


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cn_realizable_iff_short_chains(n):
    for P in posets_up_to_iso(n):
        assert longest_chain(P) == dag_longest_path(P)
        assert cn_realizable(P) == (dag_longest_path(P) < 3)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 6))
def test_round_trip_random(seed, n):
    P = random_poset(n, random.Random(seed))
    assert specialization_order(P.elements, upward_closed_sets(P)) == P


def test_json_round_trip():
    P = poset_from_json(json.dumps({"elements": ["b", "a"], "hasse": [["a", "b"]]}))
    data = P.to_json()
    assert data == {"elements": ["a", "b"], "leq": [["a", "a"], ["a", "b"], ["b", "b"]]}
    assert poset_from_json(data) == P


def test_reserved_characters_rejected():
    with pytest.raises(InvalidInput):
        from_hasse(["a/b"], [])
