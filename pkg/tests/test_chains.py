import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from ncstflip.bijection import path_to_tree
from ncstflip.chains import (
    RngStream,
    am_neighbors,
    am_step,
    am_transition_prob,
    coupled_am_step,
    delta,
    dominates,
    fm_candidates,
    fm_moves,
    fm_step,
    fm_transition_prob,
    potential_weights,
    wilson_potential,
)
from ncstflip.errors import DominanceViolated, EdgeNotInTree, NotAdjacent, SizeMismatch
from ncstflip.fuss_dyck import DyckPath, bottom_path, enumerate_paths, top_path
from ncstflip.ncst import make_tree
from ncstflip.spectral import potential_drift

from conftest import EXAMPLE_TREE

P = DyckPath


def test_am_neighbors():
    assert am_neighbors(P("UUDUUD")) == {P("UUUDUD")}
    assert am_neighbors(P("UUUDUD")) == {P("UUDUUD"), P("UUUUDD")}
    assert am_neighbors(P("UUD")) == set()


def test_am_neighbors_brute_force():
    for n in range(1, 6):
        valid = set(enumerate_paths(n))
        for x in valid:
            s = x.steps
            brute = {P(s[:i] + s[i + 1] + s[i] + s[i + 2:]) for i in range(len(s) - 1)}
            assert am_neighbors(x) == (brute & valid) - {x}


def test_am_neighbor_count_maximum():
    # the largest neighbourhood has 2n-2 paths, e.g. n=2 "UUUDUD" has two
    for n in range(2, 8):
        assert max(len(am_neighbors(p)) for p in enumerate_paths(n)) == 2 * n - 2


def test_am_probabilities():
    assert am_transition_prob(P("UUDUUD"), P("UUUDUD")) == Fraction(1, 10)
    assert am_transition_prob(P("UUDUUD"), P("UUDUUD")) == Fraction(9, 10)
    assert am_transition_prob(P("UUDUUD"), P("UUUUDD")) == 0
    with pytest.raises(SizeMismatch):
        am_transition_prob(P("UUD"), P("UUDUUD"))


def test_am_rows_and_holding():
    for n in range(1, 6):
        paths = enumerate_paths(n)
        for x in paths:
            row = [am_transition_prob(x, y) for y in paths]
            assert sum(row) == 1
        low = min(am_transition_prob(x, x) for x in paths)
        assert low == (1 if n == 1 else Fraction(4 * n, 6 * n - 2))
        assert low > Fraction(2, 3)


def test_am_holding_four_fifths_only_up_to_two():
    # the 4/5 floor holds for n <= 2 and fails from n = 3 on (3/4 at n = 3)
    lows = {n: min(am_transition_prob(x, x) for x in enumerate_paths(n)) for n in range(1, 6)}
    assert all(lows[n] >= Fraction(4, 5) for n in (1, 2))
    assert lows[3] == Fraction(3, 4)


def test_am_stationary_uniform():
    rng = RngStream(7)
    x = P("UUUUDD")
    counts = Counter()
    steps = 100_000
    for _ in range(steps):
        x = am_step(x, rng)
        counts[x] += 1
    # consecutive samples are correlated (relaxation time 10), hence the loose band
    for p in enumerate_paths(2):
        assert abs(counts[p] / steps - 1 / 3) < 0.02


def test_am_replay():
    def run(seed):
        rng, x, out = RngStream(seed), top_path(4), []
        for _ in range(1000):
            x = am_step(x, rng)
            out.append(x)
        return out

    assert run(11) == run(11)
    assert run(11) != run(12)


def test_move_draws_chunking():
    a = RngStream(3).move_draws(5, 1000)
    r = RngStream(3)
    b = np.concatenate([r.move_draws(5, 1) for _ in range(10)] + [r.move_draws(5, 990)])
    assert np.array_equal(a, b)
    assert a.min() >= 0 and a.max() < 2 * (3 * 5 - 1)


# -- flips -------------------------------------------------------------------

def test_fm_candidates_example():
    want = {(0, 4), (0, 6), (0, 7), (2, 4), (2, 6), (2, 7), (3, 4), (3, 6), (3, 7)}
    assert fm_candidates(EXAMPLE_TREE, (0, 6)) == want
    one = make_tree(1, [(0, 1)])
    assert fm_candidates(one, (0, 1)) == {(0, 1)}
    assert fm_candidates(make_tree(2, [(0, 1), (1, 2)]), (1, 2)) == {(0, 2), (1, 2)}
    with pytest.raises(EdgeNotInTree):
        fm_candidates(one, (0, 2))


def test_fm_example_probability():
    after = make_tree(7, (EXAMPLE_TREE.edge_set - {(0, 6)}) | {(3, 6)})
    assert delta(EXAMPLE_TREE, after) == 9
    assert fm_transition_prob(EXAMPLE_TREE, after) == Fraction(1, 63)


def test_fm_small_values():
    a = make_tree(2, [(0, 1), (1, 2)])
    b = make_tree(2, [(0, 1), (0, 2)])
    c = make_tree(2, [(0, 2), (1, 2)])
    assert delta(a, b) == delta(b, a) == 2
    assert fm_transition_prob(a, c) == Fraction(1, 4)
    one = make_tree(1, [(0, 1)])
    assert fm_transition_prob(one, one) == 1
    with pytest.raises(NotAdjacent):
        delta(a, a)
    with pytest.raises(SizeMismatch):
        fm_transition_prob(one, a)


def test_fm_rows_symmetry_and_floors():
    for n in range(1, 6):
        trees = [path_to_tree(p) for p in enumerate_paths(n)]
        rows = {t: fm_moves(t) for t in trees}
        dmax = 0
        for t, row in rows.items():
            assert sum(row.values()) == 1
            assert row[t] > 0
            for u, p in row.items():
                assert rows[u][t] == p
                assert fm_transition_prob(t, u) == p
                if u != t:
                    d = delta(t, u)
                    dmax = max(dmax, d)
                    assert p == Fraction(1, n * d)
        assert dmax <= (n + 1) ** 2
        assert min(row[t] for t, row in rows.items()) >= Fraction(1, dmax if dmax else 1)


def test_fm_holding_minimum_regression():
    # exact minimum holding mass; falls below 1/n from n = 3 on
    want = {1: Fraction(1), 2: Fraction(1, 2), 3: Fraction(11, 36), 4: Fraction(5, 24), 5: Fraction(137, 900)}
    for n, low in want.items():
        trees = [path_to_tree(p) for p in enumerate_paths(n)]
        assert min(fm_moves(t)[t] for t in trees) == low
    assert want[3] < Fraction(1, 3)


def test_fm_holding_matches_removed_edge_readdition():
    # holding mass = sum over edges of 1/(n * #candidates for that removal)
    for t in [path_to_tree(p) for p in enumerate_paths(4)]:
        want = sum(Fraction(1, t.n * len(fm_candidates(t, e))) for e in t.edges)
        assert fm_moves(t)[t] == want


def test_fm_single_step_distribution():
    t = path_to_tree(P("UUUDUUDUD"))
    row = fm_moves(t)
    states = sorted(row)
    rng = RngStream(5)
    samples = 100_000
    counts = Counter(fm_step(t, rng) for _ in range(samples))
    obs = np.array([counts[s] for s in states])
    exp = np.array([float(row[s]) * samples for s in states])
    chi2 = float(((obs - exp) ** 2 / exp).sum())
    assert chi2 < stats.chi2.ppf(0.999, len(states) - 1)


def test_fm_stationary_uniform():
    rng = RngStream(9)
    t = make_tree(2, [(0, 1), (1, 2)])
    counts = Counter()
    for _ in range(100_000):
        t = fm_step(t, rng)
        counts[t] += 1
    for c in counts.values():
        assert abs(c / 100_000 - 1 / 3) < 0.01


def test_fm_replay():
    def run(seed):
        rng, t, out = RngStream(seed), path_to_tree(top_path(5)), []
        for _ in range(300):
            t = fm_step(t, rng)
            out.append(t)
        return out

    assert run(4) == run(4)


# -- coupling ------------------------------------------------------------------------

def test_dominates_extremes():
    for n in range(1, 6):
        for p in enumerate_paths(n):
            assert dominates(top_path(n), p)
            assert dominates(p, bottom_path(n))
            assert dominates(p, p)
    with pytest.raises(SizeMismatch):
        dominates(P("UUD"), P("UUDUUD"))


def test_coupled_equal_stays_equal():
    rng = RngStream(1)
    x = y = top_path(5)
    for _ in range(2000):
        x, y = coupled_am_step(x, y, rng)
        assert x == y


def test_coupled_requires_domination():
    with pytest.raises(DominanceViolated):
        coupled_am_step(bottom_path(3), top_path(3), RngStream(0))


def test_coupled_domination_long_run():
    rng = RngStream(2)
    x, y = top_path(6), bottom_path(6)
    for _ in range(100_000):
        x, y = coupled_am_step(x, y, rng)   # raises on any violation
        if x == y:
            x, y = top_path(6), bottom_path(6)


def test_coupled_marginal_matches_single_chain():
    x0, y0 = P("UUUUDUDUD"), P("UUDUUDUUD")
    samples = 100_000
    rng = RngStream(3)
    counts = Counter(coupled_am_step(x0, y0, rng)[0] for _ in range(samples))
    states = sorted(am_neighbors(x0) | {x0})
    obs = np.array([counts[s] for s in states])
    exp = np.array([float(am_transition_prob(x0, s)) * samples for s in states])
    chi2 = float(((obs - exp) ** 2 / exp).sum())
    assert sum(counts.values()) == obs.sum()
    assert chi2 < stats.chi2.ppf(0.999, len(states) - 1)


def test_coupled_domination_exhaustive_small():
    # every position/coin at every dominating pair, n <= 4
    from ncstflip.chains import _coupled_apply

    for n in range(1, 5):
        paths = enumerate_paths(n)
        for x in paths:
            for y in paths:
                if dominates(x, y):
                    for u in range(2 * (3 * n - 1)):
                        x2, y2 = _coupled_apply(x, y, u)
                        assert dominates(x2, y2)


def test_potential():
    x = top_path(4)
    assert wilson_potential(x, x) == 0
    for n in range(2, 6):
        assert wilson_potential(top_path(n), bottom_path(n)) > 0
    with pytest.raises(DominanceViolated):
        wilson_potential(bottom_path(3), top_path(3))
    w = potential_weights(3)
    assert np.allclose(w, np.sin(np.pi * np.arange(1, 9) / 9))


def test_potential_minimum_regression():
    paths = enumerate_paths(3)
    low = min(wilson_potential(x, y) for x in paths for y in paths if x != y and dominates(x, y))
    assert low == pytest.approx(3 * math.sin(2 * math.pi / 9), abs=1e-12)
    assert low >= math.sin(math.pi / 9)


def test_potential_zero_iff_equal():
    paths = enumerate_paths(4)
    for x in paths:
        for y in paths:
            if dominates(x, y):
                assert (wilson_potential(x, y) == 0) == (x == y)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_potential_contracts_on_average(n):
    r = potential_drift(n, 100_000, seed=0)
    upper = r.mean() + stats.norm.ppf(0.99) * r.std(ddof=1) / math.sqrt(len(r))
    assert upper <= 0
