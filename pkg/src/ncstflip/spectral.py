"""Exact transition matrices, spectral gaps, total-variation mixing times and
the coupling experiment for the adjacent-move chain.

Matrix entries are exact fractions; eigenvalues and matrix powers are taken
in floating point on the dense copy. Both chains are symmetric, so the
stationary law is uniform and ``pi_min = 1 / |states|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .bijection import path_to_tree
from .chains import RngStream, am_neighbors, fm_moves, potential_weights
from .config import check_cap
from .errors import DimensionMismatch, DominanceViolated
from .fuss_dyck import bottom_path, enumerate_paths, top_path

AM = "AM"
FM = "FM"


@dataclass
class TransitionMatrix:
    """Sparse exact rows over an ordered state list.

    AM states are the paths in enumeration order; FM states are their images
    under the bijection, so index ``k`` refers to corresponding objects in
    both chains.
    """

    states: list
    rows: list[dict[int, Fraction]]
    chain_kind: str

    @property
    def size(self) -> int:
        return len(self.states)

    def entry(self, x: int, y: int) -> Fraction:
        return self.rows[x].get(y, Fraction(0))

    def dense(self) -> np.ndarray:
        out = np.zeros((self.size, self.size))
        for x, row in enumerate(self.rows):
            for y, p in row.items():
                out[x, y] = float(p)
        return out

    def is_row_stochastic(self) -> bool:
        return all(sum(row.values()) == 1 and min(row.values()) >= 0 for row in self.rows)

    def is_symmetric(self) -> bool:
        return all(self.entry(y, x) == p for x, row in enumerate(self.rows) for y, p in row.items())

    def uniform_is_stationary(self) -> bool:
        cols = [Fraction(0)] * self.size
        for row in self.rows:
            for y, p in row.items():
                cols[y] += p
        return all(c == 1 for c in cols)


def transition_matrix(kind: str, n: int, cap: int | None = None) -> TransitionMatrix:
    kind = kind.upper()
    check_cap("matrix", n, cap)
    paths = enumerate_paths(n, cap=max(n, 0))
    if kind == AM:
        index = {p: k for k, p in enumerate(paths)}
        denom = 6 * n - 2
        rows = []
        for p in paths:
            nb = am_neighbors(p) if n > 0 else set()
            row = {index[q]: Fraction(1, denom) for q in nb}
            row[index[p]] = 1 - Fraction(len(nb), denom) if n > 0 else Fraction(1)
            rows.append(row)
        return TransitionMatrix(paths, rows, AM)
    if kind == FM:
        trees = [path_to_tree(p) for p in paths]
        index = {t: k for k, t in enumerate(trees)}
        rows = [{index[t2]: p for t2, p in fm_moves(t).items()} for t in trees]
        return TransitionMatrix(trees, rows, FM)
    raise ValueError(f"unknown chain kind {kind!r}")


# -- Dirichlet form --------------------------------------------------------------

def _check_dim(m: TransitionMatrix, f) -> None:
    if len(f) != m.size:
        raise DimensionMismatch(f"function has {len(f)} entries, chain has {m.size} states")


def dirichlet_form(m: TransitionMatrix, f: Sequence, g: Sequence | None = None):
    """``1/2 sum_{x,y} (f(x)-f(y)) (g(x)-g(y)) pi(x) P(x,y)``; exact when f, g are rational."""
    _check_dim(m, f)
    g = f if g is None else g
    _check_dim(m, g)
    total = 0
    for x, row in enumerate(m.rows):
        for y, p in row.items():
            if y != x:
                total += (f[x] - f[y]) * (g[x] - g[y]) * p
    if all(isinstance(v, (int, Fraction)) for v in f) and all(isinstance(v, (int, Fraction)) for v in g):
        return Fraction(total) / (2 * m.size)
    return float(total) / (2 * m.size)


def variance(f: Sequence):
    mean = Fraction(sum(f)) / len(f) if isinstance(f[0], (int, Fraction)) else sum(f) / len(f)
    return sum((v - mean) ** 2 for v in f) / len(f)


def random_rational_function(size: int, rng: RngStream, denom: int = 10**6) -> list[Fraction]:
    """Entries uniform on the grid ``{-1, ..., 1}`` with spacing ``1/denom``."""
    return [Fraction(int(v), denom) for v in rng.integers(-denom, denom + 1, size=size)]


# -- spectrum ----------------------------------------------------------------------------

def eigenvalues(m: TransitionMatrix) -> np.ndarray:
    check_cap("eigen", _size_n(m))
    dense = m.dense()
    if np.max(np.abs(dense - dense.T)) > 1e-9:
        raise ValueError("matrix is not symmetric")
    return np.sort(np.linalg.eigvalsh(dense))[::-1]


def _size_n(m: TransitionMatrix) -> int:
    s = m.states[0]
    return s.n


def spectral_gap(m: TransitionMatrix) -> float:
    """``1 - lambda_2``; infinite for a single-state chain."""
    if m.size < 2:
        return math.inf
    ev = eigenvalues(m)
    return float(1.0 - ev[1])


def absolute_gap(m: TransitionMatrix) -> float:
    if m.size < 2:
        return math.inf
    ev = eigenvalues(m)
    return float(1.0 - max(abs(ev[1]), abs(ev[-1])))


def min_rayleigh_quotient(m: TransitionMatrix, trials: int = 1000, seed: int = 0) -> float:
    """Smallest ``E(f,f)/Var(f)`` over random ``f`` (an upper estimate of the gap)."""
    rng = RngStream(seed)
    dense = m.dense()
    lap = np.eye(m.size) - dense
    best = math.inf
    for _ in range(trials):
        f = rng.random(m.size) * 2 - 1
        f -= f.mean()
        var = float(f @ f) / m.size
        if var == 0:
            continue
        best = min(best, float(f @ lap @ f) / m.size / var)
    return best


# -- total variation ------------------------------------------------------------------------

def _finite(x: float):
    return x if math.isfinite(x) else None


@dataclass
class MixingReport:
    n: int
    chain_kind: str
    states: int
    gap: float
    abs_gap: float
    relaxation: float
    t_mix: int
    d_curve: list[tuple[int, float]] = field(default_factory=list)
    upper_bound: float = math.inf
    lower_ok: bool = True
    upper_ok: bool = True

    def summary(self) -> dict:
        return {
            "n": self.n,
            "chain": self.chain_kind,
            "states": self.states,
            "gap": _finite(self.gap),
            "abs_gap": _finite(self.abs_gap),
            "relaxation": _finite(self.relaxation),
            "t_mix": self.t_mix,
            "upper_bound": _finite(self.upper_bound),
            "upper_ok": self.upper_ok,
            "lower_ok": self.lower_ok,
        }


def tv_mixing_time(m: TransitionMatrix, cap: int | None = None, max_steps: int = 10**6) -> MixingReport:
    """Worst-case TV curve ``d(t)`` up to the first ``t`` with ``d(t) <= 1/4``.

    Also checks ``1/gap <= 1 + 2 t_mix`` and
    ``t_mix <= log(4 / pi_min) / abs_gap``.
    """
    n = _size_n(m)
    check_cap("tv", n, cap)
    size = m.size
    gap, agap = spectral_gap(m), absolute_gap(m)
    dense = m.dense()
    power = np.eye(size)
    curve = []
    t = 0
    while True:
        d = 0.5 * float(np.max(np.abs(power - 1.0 / size).sum(axis=1)))
        curve.append((t, d))
        if d <= 0.25 or t >= max_steps:
            break
        power = power @ dense
        t += 1
    t_mix = t
    if size < 2:
        return MixingReport(n, m.chain_kind, size, gap, agap, 0.0, t_mix, curve, 0.0, True, True)
    relaxation = 1.0 / gap
    upper = math.log(4.0 * size) / agap
    return MixingReport(
        n=n,
        chain_kind=m.chain_kind,
        states=size,
        gap=gap,
        abs_gap=agap,
        relaxation=relaxation,
        t_mix=t_mix,
        d_curve=curve,
        upper_bound=upper,
        lower_ok=relaxation <= 1 + 2 * t_mix + 1e-9,
        upper_ok=t_mix <= upper + 1e-9,
    )


# -- coupling experiment ---------------------------------------------------------------------

@dataclass
class CouplingStats:
    n: int
    times: list[int]
    dominated: bool

    @property
    def mean(self) -> float:
        return float(np.mean(self.times))

    @property
    def median(self) -> float:
        return float(np.median(self.times))


def coalescence_time(n: int, rng: RngStream, chunk: int = 1 << 16, max_steps: int = 10**9) -> tuple[int, bool]:
    """Steps until the coupled chains started from the top and zig-zag paths meet."""
    if n <= 1:
        return 0, True
    sx, hx = _kernels.to_arrays(top_path(n).steps)
    sy, hy = _kernels.to_arrays(bottom_path(n).steps)
    diff = int(np.count_nonzero(hx != hy))
    total = 0
    while diff and total < max_steps:
        draws = rng.move_draws(n, chunk)
        taken, diff, ok = _kernels.coupled_chunk(sx, hx, sy, hy, draws, diff)
        total += int(taken)
        if not ok:
            return total, False
    return total, True


def coalescence_experiment(n: int, num_seeds: int, seed: int = 0, cap: int | None = None) -> CouplingStats:
    check_cap("coupling", n, cap)
    times, dominated = [], True
    for s in range(num_seeds):
        t, ok = coalescence_time(n, RngStream(seed, key=(n, s)))
        times.append(t)
        dominated &= ok
    if not dominated:
        raise DominanceViolated(f"domination failed during a coupled run at n={n}")
    return CouplingStats(n, times, dominated)


def fit_loglog(ns: Sequence[int], means: Sequence[float]) -> dict:
    """Least-squares slope of log(mean) on log(n), and the spread of mean / (n^3 log n)."""
    ln = np.log(np.asarray(ns, dtype=float))
    lm = np.log(np.asarray(means, dtype=float))
    slope, intercept = np.polyfit(ln, lm, 1)
    ratio = [m / (k ** 3 * math.log(k)) for k, m in zip(ns, means)]
    return {"slope": float(slope), "intercept": float(intercept), "ratio_n3logn": ratio}


def potential_trace(n: int, steps: int, seed: int = 0) -> tuple[np.ndarray, bool]:
    """Potential after each of ``steps`` coupled moves from the extreme starting pair."""
    sx, hx = _kernels.to_arrays(top_path(n).steps)
    sy, hy = _kernels.to_arrays(bottom_path(n).steps)
    w = potential_weights(n)
    out = np.empty(steps + 1)
    out[0] = float((hx[:-1] - hy[:-1]) @ w)
    draws = RngStream(seed, key=(n,)).move_draws(n, steps)
    ok = _kernels.coupled_trace(sx, hx, sy, hy, draws, w, out[1:])
    return out, bool(ok)


def potential_drift(n: int, steps: int, seed: int = 0, block: int = 4096) -> np.ndarray:
    """Relative one-step changes ``(phi_{t+1} - phi_t) / phi_t`` of the potential.

    Only steps with ``phi_t > 0`` count; after coalescence the pair restarts
    from the extreme paths. Returns exactly ``steps`` ratios.
    """
    w = potential_weights(n)
    rng = RngStream(seed, key=(n, 1))
    out, got = np.empty(steps), 0
    sx = hx = sy = hy = None
    while got < steps:
        if sx is None:
            sx, hx = _kernels.to_arrays(top_path(n).steps)
            sy, hy = _kernels.to_arrays(bottom_path(n).steps)
            phi0 = float((hx[:-1] - hy[:-1]) @ w)
        trace = np.empty(block)
        if not _kernels.coupled_trace(sx, hx, sy, hy, rng.move_draws(n, block), w, trace):
            raise DominanceViolated(f"domination failed at n={n}")
        prev = np.concatenate(([phi0], trace[:-1]))
        live = prev > 1e-12
        ratios = (trace[live] - prev[live]) / prev[live]
        take = min(len(ratios), steps - got)
        out[got:got + take] = ratios[:take]
        got += take
        phi0 = float(trace[-1])
        if phi0 <= 1e-12:
            sx = None
    return out


# -- comparison table ------------------------------------------------------------------------

def bound_table(ns: Sequence[int] = (2, 3, 4, 5)) -> list[dict]:
    """Measured flip-chain mixing time next to the spectral and comparison bounds."""
    from .canonical import congestion_census

    rows = []
    for n in ns:
        fm = transition_matrix(FM, n)
        am = transition_matrix(AM, n)
        rep = tv_mixing_time(fm)
        lam_am = spectral_gap(am)
        b = congestion_census(n).congestion
        log_term = math.log(4.0 * fm.size)
        # the comparison only controls 1 - lambda_2; the bottom of the spectrum is kept as is
        ev = eigenvalues(fm)
        comparison_gap = min(lam_am / float(b), 1.0 - abs(ev[-1]))
        comparison_bound = log_term / comparison_gap
        rows.append({
            "n": n,
            "states": fm.size,
            "t_mix_fm": rep.t_mix,
            "gap_fm": rep.gap,
            "abs_gap_fm": rep.abs_gap,
            "gap_am": lam_am,
            "B": float(b),
            "relaxation_fm": rep.relaxation,
            "comparison_relaxation": float(b) / lam_am,
            "spectral_bound": rep.upper_bound,
            "comparison_bound": comparison_bound,
            "chain_holds": rep.t_mix <= rep.upper_bound <= comparison_bound + 1e-9
                           and rep.relaxation <= float(b) / lam_am * (1 + 1e-6),
        })
    return rows
