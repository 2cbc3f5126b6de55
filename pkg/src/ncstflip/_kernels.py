"""Hot loops for long adjacent-move simulations.

Each kernel exists twice: a numba ``@njit`` build and the identical plain
Python/numpy body. Set ``NCSTFLIP_DISABLE_NUMBA=1`` (or run without numba
installed) to select the fallback. Both consume pre-drawn packed moves
``u = 2*(i-1) + coin`` so the two backends produce identical trajectories.

Paths are int8 step arrays (+1 / -2) with an int64 height array
``h[j] = height after j+1 steps``.
"""

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

DISABLED = os.environ.get("NCSTFLIP_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false")
USE_NUMBA = HAVE_NUMBA and not DISABLED


def _try_swap(s, h, i):
    """Swap steps i, i+1 (0-based) if the result is a valid path; return the new h[i] delta."""
    prev = h[i - 1] if i > 0 else 0
    new_h = prev + s[i + 1]
    if new_h < 0:
        return 0
    d = new_h - h[i]
    tmp = s[i]
    s[i] = s[i + 1]
    s[i + 1] = tmp
    h[i] = new_h
    return d


def _coupled_chunk(sx, hx, sy, hy, draws, diff):
    """Advance the monotone coupling until coalescence or the draws run out.

    Returns ``(steps_taken, diff, ok)``; ``diff`` counts positions where the
    heights differ and ``ok`` is False if domination ever failed.
    """
    for k in range(draws.shape[0]):
        if diff == 0:
            return k, diff, True
        u = draws[k]
        i = u >> 1
        coin = u & 1
        was_diff = hx[i] != hy[i]
        ax = sx[i] != sx[i + 1]
        ay = sy[i] != sy[i + 1]
        if ax and ay:
            # coin 0 asks for U D, coin 1 for D U
            first = 1 if coin == 0 else -2
            if sx[i] != first:
                _try_swap(sx, hx, i)
            if sy[i] != first:
                _try_swap(sy, hy, i)
        elif ax:
            if coin == 1:
                _try_swap(sx, hx, i)
        elif ay:
            if coin == 1:
                _try_swap(sy, hy, i)
        if hx[i] < hy[i]:
            return k + 1, diff, False
        now_diff = hx[i] != hy[i]
        if was_diff and not now_diff:
            diff -= 1
        elif now_diff and not was_diff:
            diff += 1
    return draws.shape[0], diff, True


def _coupled_trace(sx, hx, sy, hy, draws, weights, out):
    """Run every draw (no early stop) writing the potential after each step into ``out``."""
    m = hx.shape[0] - 1
    phi = 0.0
    for j in range(m):
        phi += (hx[j] - hy[j]) * weights[j]
    ok = True
    for k in range(draws.shape[0]):
        u = draws[k]
        i = u >> 1
        coin = u & 1
        before = hx[i] - hy[i]
        ax = sx[i] != sx[i + 1]
        ay = sy[i] != sy[i + 1]
        if ax and ay:
            first = 1 if coin == 0 else -2
            if sx[i] != first:
                _try_swap(sx, hx, i)
            if sy[i] != first:
                _try_swap(sy, hy, i)
        elif ax:
            if coin == 1:
                _try_swap(sx, hx, i)
        elif ay:
            if coin == 1:
                _try_swap(sy, hy, i)
        if hx[i] < hy[i]:
            ok = False
        if i < m:
            phi += (hx[i] - hy[i] - before) * weights[i]
        out[k] = phi
    return ok


def _am_walk(s, h, draws, codes):
    """Single adjacent-move chain; ``codes[k]`` is the bitmask (U=1) after step k."""
    m = s.shape[0]
    for k in range(draws.shape[0]):
        u = draws[k]
        i = u >> 1
        if (u & 1) == 1 and s[i] != s[i + 1]:
            _try_swap(s, h, i)
        c = 0
        for j in range(m):
            c = c * 2 + (1 if s[j] == 1 else 0)
        codes[k] = c


if USE_NUMBA:
    _try_swap = numba.njit(cache=True)(_try_swap)
    coupled_chunk = numba.njit(cache=True)(_coupled_chunk)
    coupled_trace = numba.njit(cache=True)(_coupled_trace)
    am_walk = numba.njit(cache=True)(_am_walk)
else:
    coupled_chunk = _coupled_chunk
    coupled_trace = _coupled_trace
    am_walk = _am_walk

BACKEND = "numba" if USE_NUMBA else "python"


def to_arrays(steps: str):
    s = np.array([1 if c == "U" else -2 for c in steps], dtype=np.int8)
    h = np.cumsum(s, dtype=np.int64)
    return s, h


def from_code(code: int, m: int) -> str:
    return "".join("U" if (code >> (m - 1 - j)) & 1 else "D" for j in range(m))
