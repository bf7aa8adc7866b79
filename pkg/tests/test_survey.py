import io

from posetmu.embeddings import count_normal
from posetmu.engine import interval_elements, is_single, mobius_formula, mobius_recursive
from posetmu.perm import all_permutations, contains, parse_permutation as P
from posetmu.survey import (
    SurveyRow,
    exhaustive,
    header,
    host_rows,
    pair_row,
    random_pairs,
    random_survey,
    summarize,
    write_csv,
)


def test_rows_match_per_pair_computation():
    for n in range(1, 6):
        for pi in all_permutations(n):
            rows = host_rows(pi)
            sigmas = [s for s in interval_elements(P("1"), pi) if s != pi]
            assert [r.sigma for r in rows] == [str(s) for s in sigmas]
            for row, sigma in zip(rows, sigmas):
                report = mobius_formula(sigma, pi)
                assert row.mu == mobius_recursive(sigma, pi)
                assert row.ne == count_normal(sigma, pi)
                assert row.second_term == report.second_term
                assert row.single == is_single(sigma, pi).single
                assert row.consistent


def test_include_top():
    pi = P("2413")
    rows = host_rows(pi, include_top=True)
    top = [r for r in rows if r.sigma == r.pi]
    assert len(top) == 1 and top[0].mu == 1 and top[0].ne == 1 and top[0].second_term == 0
    assert len(rows) == len(host_rows(pi)) + 1


def test_consistency_flag():
    assert SurveyRow("1", "12", -1, 1, 0, True, 0.0).consistent
    assert not SurveyRow("1", "12", -1, 1, 1, True, 0.0).consistent
    assert SurveyRow("1", "2 1 3 4 5 6 7 8 9 10", -1, 1, 0, True, 0.0).consistent
    assert not SurveyRow("1", "2 1 3 4 5 6 7 8 9 10 11", -1, 1, 0, True, 0.0).consistent


def test_parallel_output_is_identical():
    serial = io.StringIO()
    parallel = io.StringIO()
    write_csv(exhaustive(5), serial)
    write_csv(exhaustive(5, jobs=2), parallel)
    assert serial.getvalue() == parallel.getvalue()
    assert serial.getvalue().splitlines()[0] == ",".join(header())
    assert header() == ["sigma", "pi", "mu", "ne", "second_term", "single", "elapsed_ms"]


def test_summary_counts():
    s = summarize(exhaustive(4))
    assert s.rows == sum(len(host_rows(p)) for n in range(1, 5) for p in all_permutations(n))
    assert s.inconsistent == 0
    assert 0 < s.zero_fraction <= 1 and 0 < s.single_fraction <= 1
    assert "second_term_zero=" in s.line() and "single=" in s.line()


def test_random_sampling_is_seeded():
    a = random_pairs(20, 5, 12, seed=4)
    assert a == random_pairs(20, 5, 12, seed=4)
    assert a != random_pairs(20, 5, 12, seed=5)
    for sigma, pi in a:
        assert len(sigma) == 5 and len(pi) == 12 and contains(sigma, pi)


def test_random_rows():
    rows = list(random_survey(6, 3, 8, seed=1))
    assert rows == list(random_survey(6, 3, 8, seed=1, jobs=2))
    for r in rows:
        assert r.consistent
        assert r.mu == mobius_recursive(P(r.sigma), P(r.pi))
    row = pair_row(P("132"), P("413265"))
    assert (row.mu, row.ne, row.second_term, row.single) == (-1, 1, 0, False)
