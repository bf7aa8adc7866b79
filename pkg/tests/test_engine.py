import json

import pytest
from hypothesis import given, settings, strategies as st

from posetmu import engine
from posetmu.embeddings import count_normal, ez_sign_sum
from posetmu.engine import (
    NotSingleError,
    clear_caches,
    conjecture_gen_repeat,
    equal_component_sequences,
    ez_sum_closed_consecutive,
    ez_sum_closed_power,
    has_single_block,
    interval_elements,
    interval_poset,
    is_single,
    mobius,
    mobius_formula,
    mobius_recursive,
    mobius_single,
    reduce_sequence,
)
from posetmu.errors import CapExceeded
from posetmu.perm import (
    Permutation,
    all_permutations,
    descents,
    direct_sum_of,
    is_indecomposable,
    parse_permutation as P,
    power,
)
from posetmu.poset import mobius_between

ONE = P("1")
perms = st.integers(1, 7).flatmap(lambda n: st.permutations(range(1, n + 1))).map(lambda t: Permutation(tuple(t)))


def pairs(max_len, proper=False):
    for n in range(1, max_len + 1):
        for pi in all_permutations(n):
            for sigma in interval_elements(ONE, pi):
                if not (proper and sigma == pi):
                    yield sigma, pi


def sign(sigma, pi):
    return -1 if (len(pi) - len(sigma)) % 2 else 1


def test_interval_elements_examples():
    got = [str(z) for z in interval_elements(P("123"), P("4567123"))]
    assert got == ["123", "1234", "2341", "4123", "23451", "34512", "45123", "345612", "456123", "4567123"]
    assert interval_elements(P("213"), P("213")) == [P("213")]
    assert [str(z) for z in interval_elements(ONE, P("321"))] == ["1", "21", "321"]
    with pytest.raises(ValueError):
        interval_elements(P("12"), P("321"))
    with pytest.raises(CapExceeded):
        interval_elements(ONE, P("2413"), cap=3)


def test_recursive_examples():
    assert mobius_recursive(ONE, P("12")) == -1
    assert mobius_recursive(P("123"), P("4567123")) == 0
    assert mobius_recursive(P("2413"), P("2 4 6 8 10 1 3 5 7 9")) == 35
    assert mobius_recursive(P("12"), P("321")) == 0


def test_recursive_matches_generic_poset():
    for sigma, pi in pairs(5):
        p = interval_poset(sigma, pi)
        assert mobius_between(p, sigma, pi) == mobius_recursive(sigma, pi)


def test_formula_examples():
    r = mobius_formula(P("2413"), P("2413"))
    assert (r.mu, r.ne, r.ne_term, r.second_term) == (1, 1, 1, 0)
    assert mobius_formula(P("132"), P("413265")).mu == mobius_recursive(P("132"), P("413265"))
    r = mobius_formula(P("2413"), P("2 4 6 8 10 1 3 5 7 9"))
    assert (r.mu, r.ne, r.second_term) == (35, 35, 0)
    assert mobius_formula(P("12"), P("321")).mu == 0


@pytest.mark.parametrize("recursive_below", [-1, 0, 2, 10])
def test_formula_independent_of_fallback(recursive_below):
    clear_caches()
    for sigma, pi in pairs(6):
        assert mobius_formula(sigma, pi, recursive_below).mu == mobius_recursive(sigma, pi)


def test_sparse_path_matches_dense(monkeypatch):
    clear_caches()
    dense = {(s, p): (mobius_formula(s, p, -1), is_single(s, p).single) for s, p in pairs(5)}
    clear_caches()
    monkeypatch.setattr(engine, "DENSE_CAP", 0)
    for (s, p), (r, single) in dense.items():
        other = mobius_formula(s, p, -1)
        assert (other.mu, other.ne, other.second_term) == (r.mu, r.ne, r.second_term)
        assert is_single(s, p).single == single
    clear_caches()


def test_rank_one_intervals():
    for sigma, pi in pairs(6, proper=True):
        if len(pi) - len(sigma) == 1:
            assert mobius_formula(sigma, pi).mu == -1


def brute_single(sigma, pi):
    return all(has_single_block(lam, pi) for lam in interval_elements(sigma, pi) if lam != pi)


def test_single_matches_definition():
    for sigma, pi in pairs(6):
        report = is_single(sigma, pi)
        assert report.single == brute_single(sigma, pi)
        if report.single:
            assert mobius_formula(sigma, pi).second_term == 0
            assert mobius_single(sigma, pi) == mobius_recursive(sigma, pi)
        else:
            w = report.witness
            assert w in interval_elements(sigma, pi) and w != pi and not has_single_block(w, pi)


def test_single_examples():
    assert is_single(P("312"), P("312")).single
    assert mobius_single(P("312"), P("312")) == 1
    report = is_single(P("132"), P("413265"))
    assert not report.single and report.witness == P("132")
    with pytest.raises(NotSingleError):
        mobius_single(P("132"), P("413265"))


def test_equal_descents_make_second_term_vanish():
    for sigma, pi in pairs(6):
        if descents(sigma) == descents(pi):
            r = mobius_formula(sigma, pi)
            assert r.second_term == 0
            assert r.mu == sign(sigma, pi) * count_normal(sigma, pi)


def test_dispatch():
    r = mobius(P("2413"), P("24153"))
    assert r.method in ("single_shortcut", "formula")
    assert r.mu == mobius_recursive(P("2413"), P("24153"))
    assert mobius(P("132"), P("413265"), "recursive").method == "recursive"
    with pytest.raises(NotSingleError):
        mobius(P("132"), P("413265"), "single")
    with pytest.raises(ValueError):
        mobius(P("1"), P("12"), "guess")
    data = json.loads(json.dumps(mobius(P("132"), P("413265"), "formula").to_json()))
    assert set(data) == {"sigma", "pi", "mu", "ne", "ne_term", "second_term", "method", "elapsed_ms"}
    assert data["mu"] == -1 and data["method"] == "formula"


@given(perms, st.data())
@settings(max_examples=80, deadline=None)
def test_formula_property(pi, data):
    k = data.draw(st.integers(1, len(pi)))
    positions = data.draw(st.lists(st.integers(0, len(pi) - 1), min_size=k, max_size=k, unique=True))
    sigma = pi.pattern_at(sum(1 << i for i in positions))
    r = mobius_formula(sigma, pi)
    assert r.mu == r.ne_term + r.second_term
    assert r.ne_term == sign(sigma, pi) * r.ne
    assert r.mu == mobius_recursive(sigma, pi)


def test_closed_power():
    assert ez_sum_closed_power(P("21"), 2, 3) == 2
    for lam in (P("21"), P("312"), P("231")):
        for n in range(1, 5):
            assert ez_sum_closed_power(lam, n, n) == -1
            for m in range(1, n + 1):
                assert ez_sum_closed_power(lam, m, n) == ez_sign_sum(power(lam, m), power(lam, n))
    with pytest.raises(ValueError):
        ez_sum_closed_power(P("12"), 1, 2)
    with pytest.raises(ValueError):
        ez_sum_closed_power(P("21"), 3, 2)


def test_closed_consecutive():
    a, b = P("21"), P("312")
    pi = direct_sum_of([a, b, b, b, a])
    assert equal_component_sequences(pi) == [(1, 3, b)]
    assert reduce_sequence(pi, 1, 3, 2) == direct_sum_of([a, b, b, a])
    assert ez_sum_closed_consecutive(pi, 1, 3, 2) == 2
    assert ez_sum_closed_consecutive(pi, 1, 3, 3) == -1
    with pytest.raises(ValueError):
        ez_sum_closed_consecutive(P("123"), 0, 3, 1)
    with pytest.raises(ValueError):
        reduce_sequence(pi, 0, 2, 1)


def test_closed_consecutive_against_brute_force():
    indecomposables = [p for n in (2, 3) for p in all_permutations(n) if is_indecomposable(p)]
    for c in indecomposables:
        for left in ([], [P("1")], [P("21")]):
            for right in ([], [P("1")], [P("312")]):
                for alpha in (2, 3):
                    comps = left + [c] * alpha + right
                    if left and left[-1] == c or right and right[0] == c:
                        continue
                    pi = direct_sum_of(comps)
                    if len(pi) > 10:
                        continue
                    for ell in range(1, alpha + 1):
                        lam = reduce_sequence(pi, len(left), alpha, ell)
                        assert ez_sum_closed_consecutive(pi, len(left), alpha, ell) == ez_sign_sum(lam, pi)


def test_conjecture_example_and_reduction():
    a, b = P("21"), P("312")
    report = conjecture_gen_repeat(direct_sum_of([a, a, b, b, b]), [(0, 1), (1, 2)])
    assert (report.predicted, report.brute, report.agree) == (-2, -2, True)
    assert report.lam == direct_sum_of([a, b, b])
    # one sequence: same value as the consecutive closed form
    pi = direct_sum_of([a, b, b, b, a])
    single = conjecture_gen_repeat(pi, [(0, 2)])
    assert single.predicted == ez_sum_closed_consecutive(pi, 1, 3, 2) == single.brute
    with pytest.raises(ValueError):
        conjecture_gen_repeat(P("2413"), [(0, 1)])


def test_conjecture_on_small_hosts():
    indecomposables = [p for n in (2, 3) for p in all_permutations(n) if is_indecomposable(p)]
    checked = 0
    for a in indecomposables:
        for b in indecomposables:
            if a == b:
                continue
            for alpha in (2, 3):
                for beta in (2, 3):
                    for middle in ([], [P("1")]):
                        pi = direct_sum_of([a] * alpha + middle + [b] * beta)
                        if len(pi) > 10:
                            continue
                        for l1 in range(alpha + 1):
                            for l2 in range(beta + 1):
                                if (l1, l2) == (alpha, beta) or (l1 + l2 == 0 and not middle):
                                    continue
                                r = conjecture_gen_repeat(pi, [(0, l1), (1, l2)])
                                checked += 1
                                assert r.agree, (str(pi), l1, l2, r)
    assert checked > 30
