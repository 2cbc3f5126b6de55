"""Transition kernels and samplers for the adjacent-move chain on 2-Dyck
paths and the flip chain on non-crossing spanning trees.

Transition probabilities are exact :class:`fractions.Fraction` values. The
samplers draw from an :class:`RngStream` so every trajectory replays from its
seed.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DominanceViolated, EdgeNotInTree, NotAdjacent, SizeMismatch
from .fuss_dyck import DOWN, UP, DyckPath, height_profile
from .ncst import Edge, Ncst, _DSU, _norm, crosses, make_tree


class RngStream:
    """Seeded counter-based stream (Philox) shared by all samplers.

    ``key`` derives independent sub-streams from one seed, e.g. one per
    (size, replicate) in a batch experiment.
    """

    def __init__(self, seed: int = 0, key=()):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.Philox(seq))

    def integers(self, low, high, size=None):
        return self._gen.integers(low, high, size=size)

    def random(self, size=None):
        return self._gen.random(size)

    def move_draws(self, n: int, count: int) -> np.ndarray:
        """``count`` packed adjacent-move draws ``2*(i-1) + coin`` for positions i in [1, 3n-1]."""
        return self._gen.integers(0, 2 * (3 * n - 1), size=count, dtype=np.int64)

    @property
    def counter(self):
        return self._gen.bit_generator.state["state"]["counter"].copy()


# -- adjacent moves ----------------------------------------------------------

def _swap(steps: str, i: int) -> str:
    """Swap 1-based positions i and i+1."""
    return steps[: i - 1] + steps[i] + steps[i - 1] + steps[i + 1:]


def _swap_valid(x: DyckPath, i: int) -> bool:
    # only an UD -> DU swap can break the prefix condition, at height(i)
    s = x.steps
    if s[i - 1] == s[i]:
        return False
    if s[i - 1] == DOWN:
        return True
    before = height_profile(DyckPath(s[: i - 1]))
    h = before[-1] if before else 0
    return h - 2 >= 0


def am_neighbors(x: DyckPath) -> set[DyckPath]:
    return {DyckPath(_swap(x.steps, i)) for i in range(1, len(x.steps)) if _swap_valid(x, i)}


def am_transition_prob(x: DyckPath, x2: DyckPath) -> Fraction:
    if x.n != x2.n:
        raise SizeMismatch(f"paths of sizes {x.n} and {x2.n}")
    if x.n == 0:
        return Fraction(1)
    nb = am_neighbors(x)
    denom = 6 * x.n - 2
    if x2 == x:
        return 1 - Fraction(len(nb), denom)
    if x2 in nb:
        return Fraction(1, denom)
    return Fraction(0)


def _am_apply(x: DyckPath, u: int) -> DyckPath:
    i, coin = u // 2 + 1, u % 2
    if coin and _swap_valid(x, i):
        return DyckPath(_swap(x.steps, i))
    return x


def am_step(x: DyckPath, rng: RngStream) -> DyckPath:
    """One adjacent-move step: position i uniform in [1, 3n-1], swap with probability 1/2 if valid."""
    if x.n <= 0:
        return x
    return _am_apply(x, int(rng.move_draws(x.n, 1)[0]))


# -- flip moves ----------------------------------------------------------------

def _candidates(n: int, forest: list[Edge]) -> list[Edge]:
    dsu = _DSU(range(n + 1))
    for a, b in forest:
        dsu.union(a, b)
    out = []
    for u in range(n + 1):
        for v in range(u + 1, n + 1):
            if dsu.find(u) == dsu.find(v):
                continue
            if any(crosses((u, v), f) for f in forest):
                continue
            out.append((u, v))
    return out


def fm_candidates(t: Ncst, removed) -> set[Edge]:
    removed = _norm(removed)
    if removed not in t.edge_set:
        raise EdgeNotInTree(f"{removed} is not an edge of the tree")
    return set(_candidates(t.n, [e for e in t.edges if e != removed]))


def delta(s: Ncst, t: Ncst) -> int:
    if s.n != t.n:
        raise SizeMismatch(f"trees of sizes {s.n} and {t.n}")
    shared = s.edge_set & t.edge_set
    if len(shared) != s.n - 1:
        raise NotAdjacent(f"trees share {len(shared)} edges, need {s.n - 1}")
    return len(_candidates(s.n, sorted(shared)))


def fm_moves(t: Ncst) -> dict[Ncst, Fraction]:
    """Full row of the flip kernel at ``t`` (including the holding probability)."""
    row: dict[Ncst, Fraction] = {}
    if t.n == 0:
        return {t: Fraction(1)}
    stay = Fraction(0)
    for e in t.edges:
        rest = [f for f in t.edges if f != e]
        cands = _candidates(t.n, rest)
        p = Fraction(1, t.n * len(cands))
        for f in cands:
            if f == e:
                stay += p
            else:
                row[make_tree(t.n, rest + [f])] = p
    row[t] = stay
    return row


def fm_transition_prob(s: Ncst, t: Ncst) -> Fraction:
    if s.n != t.n:
        raise SizeMismatch(f"trees of sizes {s.n} and {t.n}")
    if s == t:
        return fm_moves(s)[s]
    if len(s.edge_set & t.edge_set) != s.n - 1:
        return Fraction(0)
    return Fraction(1, s.n * delta(s, t))


def fm_step(t: Ncst, rng: RngStream) -> Ncst:
    """Drop a uniform edge, re-add a uniform valid edge (possibly the same one)."""
    if t.n == 0:
        return t
    e = t.edges[int(rng.integers(0, t.n))]
    rest = [f for f in t.edges if f != e]
    cands = _candidates(t.n, rest)
    f = cands[int(rng.integers(0, len(cands)))]
    if f == e:
        return t
    return make_tree(t.n, rest + [f])


# -- monotone coupling and potential -----------------------------------------

def dominates(x: DyckPath, y: DyckPath) -> bool:
    if x.n != y.n:
        raise SizeMismatch(f"paths of sizes {x.n} and {y.n}")
    return all(a >= b for a, b in zip(height_profile(x), height_profile(y)))


def _coupled_apply(x: DyckPath, y: DyckPath, u: int) -> tuple[DyckPath, DyckPath]:
    i, coin = u // 2 + 1, u % 2
    dx = x.steps[i - 1] != x.steps[i]
    dy = y.steps[i - 1] != y.steps[i]
    if dx and dy:
        target = UP + DOWN if coin == 0 else DOWN + UP

        def force(z):
            if z.steps[i - 1:i + 1] == target or not _swap_valid(z, i):
                return z
            return DyckPath(_swap(z.steps, i))

        return force(x), force(y)
    if dx:
        return _am_apply(x, u), y
    if dy:
        return x, _am_apply(y, u)
    return x, y


def coupled_am_step(x: DyckPath, y: DyckPath, rng: RngStream) -> tuple[DyckPath, DyckPath]:
    """Monotone coupling: same position in both chains, shared pattern when both can swap."""
    if not dominates(x, y):
        raise DominanceViolated("x must dominate y")
    if x.n <= 0:
        return x, y
    x2, y2 = _coupled_apply(x, y, int(rng.move_draws(x.n, 1)[0]))
    if not dominates(x2, y2):
        raise DominanceViolated("coupled step broke domination")
    return x2, y2


def potential_weights(n: int) -> np.ndarray:
    m = 3 * n
    return np.sin(np.pi * np.arange(1, m) / m)


def wilson_potential(x: DyckPath, y: DyckPath) -> float:
    """Sum over i < 3n of (height_x(i) - height_y(i)) * sin(pi i / 3n)."""
    if not dominates(x, y):
        raise DominanceViolated("x must dominate y")
    if x.n == 0:
        return 0.0
    diff = np.array(height_profile(x)[:-1]) - np.array(height_profile(y)[:-1])
    return float(diff @ potential_weights(x.n))

