from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import tournaments
from oracles import naive_p2, naive_pi2, naive_surplus_set
from pathext.construct import (
    figure4_roles,
    figure4_tournament,
    paley_tournament,
    random_regular_tournament,
    random_tournament,
    t3_tournament,
    three_cycle,
)
from pathext.core import DirectedPath, Tournament, bits, has_arc
from pathext.metrics import (
    classify_against_path,
    intermediate_set,
    irregularity,
    is_doubly_regular,
    is_regular,
    min_degree,
    p2,
    p2_matrix,
    pi2,
    pi2_with_pair,
    surplus_lower_bound,
    surplus_matrix,
    surplus_pair,
    surplus_report,
    surplus_set,
)


def test_p2_examples():
    p7 = paley_tournament(7)
    for u, v in p7.arcs():
        assert (p2(p7, u, v), p2(p7, v, u)) == (1, 2)
    t = Tournament.transitive(3)
    assert (p2(t, 0, 2), p2(t, 2, 0)) == (1, 0)
    r = figure4_roles(3)
    assert p2(figure4_tournament(3), r["u0"], r["u1"]) == 0
    with pytest.raises(ValueError):
        p2(t, 1, 1)


def test_pi2_examples():
    assert pi2(paley_tournament(7)) == 1
    assert pi2(paley_tournament(19)) == 4
    assert pi2(t3_tournament(1)) == 1
    assert pi2_with_pair(three_cycle()) == (0, (0, 1))


def test_irregularity_examples():
    assert irregularity(paley_tournament(11)) == 0
    assert irregularity(Tournament.transitive(4)) == 3
    assert irregularity(figure4_tournament(3)) == 0


def test_intermediate_set_examples():
    assert list(bits(intermediate_set(Tournament.transitive(4), 0, 3))) == [1, 2]
    assert intermediate_set(three_cycle(), 0, 1) == 0
    p7 = paley_tournament(7)
    assert all(intermediate_set(p7, u, v).bit_count() == 1 for u, v in p7.arcs())


def test_surplus_examples():
    p7 = paley_tournament(7)
    assert all(surplus_pair(p7, u, v) == 1 for u, v in combinations(range(7), 2))
    for w in combinations(range(7), 4):
        assert surplus_set(p7, w) == 6 == comb(4, 2)
    t = Tournament.transitive(4)
    assert surplus_pair(t, 0, 1) == naive_p2(t, 0, 1) + naive_p2(t, 1, 0) - 2 * naive_pi2(t) == 0
    with pytest.raises(ValueError):
        surplus_set(p7, [3])


def test_surplus_report():
    t = random_tournament(9, 4)
    rep = surplus_report(t, sets=[(0, 1, 2), (3, 5, 7, 8)])
    assert rep.pi2 == pi2(t)
    assert rep.set_surplus[(0, 1, 2)] == surplus_set(t, [0, 1, 2])
    assert rep.surplus_of([8, 7, 5, 3]) == naive_surplus_set(t, [3, 5, 7, 8])
    s = surplus_matrix(t)
    assert all(s[u, v] == rep.pair_surplus[(u, v)] for u, v in combinations(range(9), 2))


def test_bound_values():
    assert [surplus_lower_bound(k) for k in range(2, 8)] == [0, 1, 2, 4, 6, 9]


def test_regularity_predicates():
    assert is_doubly_regular(paley_tournament(11))
    assert is_regular(figure4_tournament(3)) and not is_doubly_regular(figure4_tournament(3))
    assert not is_regular(Tournament.transitive(5))


@given(tournaments(min_n=3, max_n=10))
def test_p2_matches_naive_count(t):
    m = p2_matrix(t)
    for u in range(t.n):
        for v in range(t.n):
            if u != v:
                assert m[u, v] == p2(t, u, v) == naive_p2(t, u, v) == intermediate_set(t, u, v).bit_count()
    assert pi2(t) == naive_pi2(t)


@given(tournaments(min_n=3, max_n=16))
def test_degree_identity_and_pi2_bound(t):
    n, i, pi = t.n, irregularity(t), pi2(t)
    assert (n - i - 1) % 2 == 0
    assert min_degree(t) == (n - i - 1) // 2
    assert 4 * pi <= (n - 3 if n % 2 else n - 4)


@given(tournaments(min_n=3, max_n=16))
def test_pair_surplus_lemma(t):
    d = t.out_degrees
    s = surplus_matrix(t)
    for u, v in combinations(range(t.n), 2):
        a, b = (u, v) if d[u] >= d[v] else (v, u)
        assert s[a, b] >= 0
        if has_arc(t, a, b):
            assert s[a, b] >= abs(d[a] - d[b] - 1)
        else:
            assert s[a, b] >= max(1, abs(d[a] - d[b] + 1))
        if s[a, b] == 0:
            assert d[a] - d[b] == 1 and has_arc(t, a, b)


@given(tournaments(min_n=4, max_n=12), st.data())
def test_set_surplus_bound(t, data):
    size = data.draw(st.integers(2, min(6, t.n)))
    w = data.draw(st.lists(st.integers(0, t.n - 1), min_size=size, max_size=size, unique=True))
    val = surplus_set(t, w)
    assert val == naive_surplus_set(t, w)
    assert val >= surplus_lower_bound(size)


@given(st.sampled_from([5, 7, 9, 11, 13]), st.integers(0, 2**32), st.data())
def test_regular_set_surplus(n, seed, data):
    t = random_regular_tournament(n, seed)
    size = data.draw(st.integers(2, 6))
    w = data.draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
    assert surplus_set(t, w) >= comb(size, 2)


def test_classify_examples():
    c = classify_against_path(three_cycle(), DirectedPath((0, 1)))
    assert c.hybrid == {2: 0}
    t = Tournament.transitive(4)
    c = classify_against_path(t, DirectedPath((1, 2)))
    assert list(bits(c.dominating)) == [0] and list(bits(c.dominated)) == [3] and not c.hybrid
    c = classify_against_path(t, DirectedPath((0, 3)))
    assert list(bits(c.inserting)) == [1, 2]
    with pytest.raises(ValueError):
        classify_against_path(t, DirectedPath((3, 0)))


@given(tournaments(min_n=4, max_n=9), st.data())
def test_classification_partitions_off_path_vertices(t, data):
    start = data.draw(st.integers(0, t.n - 1))
    seq = [start]
    while True:
        nxt = [v for v in bits(t.out_rows[seq[-1]]) if v not in seq]
        if not nxt or len(seq) >= t.n - 1 or not data.draw(st.booleans()):
            break
        seq.append(data.draw(st.sampled_from(nxt)))
    if len(seq) < 2:
        return
    c = classify_against_path(t, DirectedPath(tuple(seq)))
    masks = [c.dominating, c.dominated, c.inserting, sum(1 << w for w in c.hybrid)]
    assert sum(m.bit_count() for m in masks) == t.n - len(seq)
    assert np.bitwise_or.reduce(masks) & sum(1 << v for v in seq) == 0
    for w, k in c.hybrid.items():
        assert 0 <= k <= len(seq) - 2
        assert all(has_arc(t, w, seq[j]) for j in range(k + 1))
        assert all(has_arc(t, seq[j], w) for j in range(k + 1, len(seq)))
