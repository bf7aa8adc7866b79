import itertools
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posetmu.engine import interval_poset, mobius_recursive
from posetmu.errors import CapExceeded
from posetmu.perm import parse_permutation as P
from posetmu.poset import (
    BOTTOM,
    TOP,
    FinitePoset,
    PosetError,
    PosetMap,
    antichain,
    atoms,
    boolean_lattice,
    chain,
    crosscut_sum,
    dual,
    fibration_mobius_check,
    is_lattice,
    mobius_between,
    mobius_of,
    mobius_truncated_boolean,
    order_complex_f_vector,
    product,
    reduced_euler_characteristic,
    transitive_closure,
    truncated_boolean,
)


@st.composite
def posets(draw, max_size=7):
    n = draw(st.integers(0, max_size))
    leq = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            leq[i, j] = draw(st.booleans())
    # shuffle labels so element order is not a linear extension
    order = draw(st.permutations(range(n)))
    leq = transitive_closure(leq)[np.ix_(order, order)]
    return FinitePoset(list(range(n)), leq)


def brute_mobius_of(p):
    """Alternating count of chains, straight from the definition of chains."""
    total = -1
    for r in range(1, len(p) + 1):
        for combo in itertools.combinations(p.elements, r):
            if all(p.le(a, b) or p.le(b, a) for a, b in itertools.combinations(combo, 2)):
                total += (-1) ** (r + 1)
    # mu of the bounded poset equals the reduced Euler characteristic
    return total


def test_mobius_of_examples():
    assert mobius_of(boolean_lattice(3).interior()) == -1
    assert mobius_of(antichain(0)) == -1
    assert mobius_of(chain(1)) == 0
    # a cone is contractible
    assert mobius_of(FinitePoset.from_relations("abc", [("a", "b"), ("a", "c")])) == 0


def test_mobius_between_examples():
    p = chain(3)
    assert mobius_between(p, 1, 1) == 1
    assert mobius_between(p, 0, 2) == 0
    assert mobius_between(p, 0, 1) == -1
    b4 = boolean_lattice(4)
    assert mobius_between(b4, frozenset(), frozenset({1, 2, 3, 4})) == 1
    with pytest.raises(PosetError):
        mobius_between(p, 2, 0)


def test_reduced_euler_examples():
    assert reduced_euler_characteristic(antichain(0)) == -1
    assert reduced_euler_characteristic(antichain(2)) == 1
    interior = interval_poset(P("123"), P("4567123")).interior()
    assert len(interior) == 8
    assert reduced_euler_characteristic(interior) == mobius_recursive(P("123"), P("4567123"))


@given(posets())
@settings(max_examples=200, deadline=None)
def test_hall_theorem(p):
    mu = mobius_of(p)
    assert mu == reduced_euler_characteristic(p)
    assert mu == brute_mobius_of(p)
    b = p.bounded()
    assert mobius_between(b, b.bottom, b.top) == mu


@given(posets())
@settings(max_examples=100, deadline=None)
def test_dual_preserves_mobius(p):
    assert mobius_of(dual(p)) == mobius_of(p)
    assert order_complex_f_vector(dual(p)) == order_complex_f_vector(p)


@given(posets(4), posets(4))
@settings(max_examples=60, deadline=None)
def test_product_multiplies_mobius(p, q):
    bp, bq = p.bounded(), q.bounded()
    pq = product(bp, bq)
    lhs = mobius_between(pq, (bp.bottom, bq.bottom), (bp.top, bq.top))
    assert lhs == mobius_of(p) * mobius_of(q)


def test_diamond():
    d = product(chain(2), chain(2))
    assert len(d) == 4
    assert mobius_between(d, (0, 0), (1, 1)) == 1


def test_truncated_shapes():
    ge = truncated_boolean(4, 2, "ge")
    assert len(ge) == 1 + 6 + 4 + 1
    assert ge.bottom is BOTTOM
    assert ge.top == frozenset({1, 2, 3, 4})
    le = truncated_boolean(4, 1, "le")
    assert len(le) == 1 + 4 + 1
    assert le.top is TOP
    assert le.bottom == frozenset()
    assert mobius_truncated_boolean(2, 1, "le") == 1
    assert mobius_truncated_boolean(2, 1, "ge") == 1
    with pytest.raises(ValueError):
        truncated_boolean(3, 1, "mid")
    with pytest.raises(CapExceeded):
        boolean_lattice(13)


@pytest.mark.parametrize("n", range(1, 8))
def test_truncated_closed_forms(n):
    for k in range(1, n + 1):
        for mode in ("le", "ge"):
            p = truncated_boolean(n, k, mode)
            assert mobius_between(p, p.bottom, p.top) == mobius_truncated_boolean(n, k, mode)


def test_crosscut_examples():
    b3 = boolean_lattice(3)
    assert crosscut_sum(b3, atoms(b3)) == -1
    c = chain(3)
    assert crosscut_sum(c, [1]) == 0
    for n in range(2, 7):
        for m in range(1, n + 1):
            p = truncated_boolean(n, m, "ge")
            assert crosscut_sum(p, atoms(p)) == (-1) ** ((n - m - 1) % 2) * _comb(n - 1, m - 1)


def _comb(n, k):
    from math import comb

    return comb(n, k)


def test_crosscut_matches_mobius_on_lattices():
    lattices = [boolean_lattice(4), product(chain(3), chain(4)), product(boolean_lattice(2), chain(3))]
    for L in lattices:
        assert is_lattice(L)
        mu = mobius_between(L, L.bottom, L.top)
        assert crosscut_sum(L, atoms(L)) == mu
        # the coatoms form the dual crosscut
        coatoms = [a for a, b in L.covers() if b == L.top]
        assert crosscut_sum(dual(L), coatoms) == mu
    assert not is_lattice(antichain(2))
    with pytest.raises(PosetError):
        crosscut_sum(antichain(2), [0])


def test_fibration_identity_and_collapse():
    p = boolean_lattice(3).interior()
    r = fibration_mobius_check(PosetMap(p, p, {x: x for x in p}))
    assert r.condition_holds and r.lhs == r.rhs == -1
    # an antichain collapsed onto a point satisfies the condition; a chain does not
    point = chain(1)
    r = fibration_mobius_check(PosetMap(antichain(3), point, {x: 0 for x in range(3)}))
    assert r.condition_holds and r.lhs == r.rhs == 0
    assert not fibration_mobius_check(PosetMap(chain(3), point, {x: 0 for x in range(3)})).condition_holds
    with pytest.raises(PosetError):
        fibration_mobius_check(PosetMap(antichain(2), chain(2), {0: 1, 1: 1}))


def test_edge_list_and_dot():
    text = "# diamond\na < b < d\na < c\nc < d\n"
    p = FinitePoset.from_edge_list(text)
    assert len(p) == 4 and p.bottom == "a" and p.top == "d"
    q = FinitePoset.from_edge_list(p.to_edge_list())
    assert q == p
    dot = p.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 4
    with pytest.raises(PosetError):
        FinitePoset.from_relations("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(PosetError):
        FinitePoset.from_edge_list("a < < b")
