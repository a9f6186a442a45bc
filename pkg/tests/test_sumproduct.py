import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ffincidence import mk_field
from ffincidence.errors import PopulationTooSmall, UnsupportedCase
from ffincidence.sumproduct import (
    d_a_squared,
    energy_plus,
    energy_plus_direct,
    sp_experiment,
    square_set,
    square_sum_tuples,
    square_sum_tuples_direct,
    sumset,
)


def test_sumset_examples(gf7):
    A = {1, 2}
    assert sumset(A, A, gf7) == {2, 3, 4}
    assert square_set(A, gf7) == {1, 4}
    assert d_a_squared(A, 3, gf7) == {3, 6, 2, 5}


def test_square_sum_tuples_examples(gf7, gf3):
    assert square_sum_tuples({1, 2}, 3, gf7) == (3, 5, 0)
    assert square_sum_tuples({0}, 4, gf7) == (0, 0, 1)
    # over GF(3) x^2 + y^2 is 1 exactly when one coordinate is 0 and the other is not
    assert square_sum_tuples({0, 1, 2}, 2, gf3) == (4, 4, 1)


def test_energy_examples(gf7):
    assert energy_plus({1, 2}, 2, gf7) == 2
    assert energy_plus({1, 2}, 3, gf7) == 6
    for d in (2, 3, 4):
        assert energy_plus({5}, d, gf7) == 1


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_energy_histogram_matches_direct_exhaustive(q):
    ctx = mk_field(q)
    for size in range(1, 4):
        for A in itertools.combinations(range(q), size):
            for d in (2, 3):
                assert energy_plus(set(A), d, ctx) == energy_plus_direct(set(A), d, ctx)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 18), min_size=1, max_size=8), st.integers(1, 4))
def test_tuple_classes_match_direct(A, d):
    ctx = mk_field(19)
    counts = square_sum_tuples(A, d, ctx)
    assert counts == square_sum_tuples_direct(A, d, ctx)
    assert sum(counts) == len(A) ** d


def test_full_field_covers_everything():
    ctx = mk_field(19)
    A = set(range(19))
    assert sumset(A, A, ctx) == A
    for d in (2, 3):
        assert d_a_squared(A, d, ctx) == A


def test_experiment_shape():
    ctx = mk_field(19)
    rep = sp_experiment(ctx, 3, 5, 20, seed=7)
    assert len(rep.rows) == 20 and rep.passed
    assert rep.rows[0].seed == 7
    assert sp_experiment(ctx, 3, 5, 0).rows == []
    assert sp_experiment(ctx, 3, 5, 4, 3).to_dict() == sp_experiment(ctx, 3, 5, 4, 3).to_dict()


def test_experiment_debug_solution_count():
    rep = sp_experiment(mk_field(7), 2, 4, 3, debug=True)
    for r in rep.rows:
        assert r.debug["lower_bound_ok"]
        assert sum(r.debug["per_part"]) == r.debug["solutions"]


def test_experiment_rejects_bad_parameters():
    with pytest.raises(UnsupportedCase):
        sp_experiment(mk_field(13), 2, 3, 1)
    sp_experiment(mk_field(13), 2, 3, 1, require_q3=False)
    with pytest.raises(PopulationTooSmall):
        sp_experiment(mk_field(7), 2, 8, 1)
