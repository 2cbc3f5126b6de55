import os
import subprocess
import sys

import numpy as np
import pytest

from ncstflip import _kernels
from ncstflip.chains import RngStream, _am_apply, _coupled_apply, potential_weights, wilson_potential
from ncstflip.fuss_dyck import DyckPath, bottom_path, top_path


def _decode(s):
    return "".join("U" if v == 1 else "D" for v in s)


@pytest.mark.parametrize("n", [2, 5, 9])
def test_trace_matches_reference_coupling(n):
    x, y = top_path(n), bottom_path(n)
    sx, hx = _kernels.to_arrays(x.steps)
    sy, hy = _kernels.to_arrays(y.steps)
    draws = RngStream(n).move_draws(n, 4000)
    out = np.empty(len(draws))
    assert _kernels.coupled_trace(sx, hx, sy, hy, draws, potential_weights(n), out)
    for k, u in enumerate(draws):
        x, y = _coupled_apply(x, y, int(u))
        assert out[k] == pytest.approx(wilson_potential(x, y), abs=1e-9)
    assert _decode(sx) == x.steps and _decode(sy) == y.steps
    assert np.array_equal(hx, np.cumsum(sx))


def test_chunk_stops_at_coalescence():
    n = 4
    x, y = top_path(n), bottom_path(n)
    sx, hx = _kernels.to_arrays(x.steps)
    sy, hy = _kernels.to_arrays(y.steps)
    draws = RngStream(1).move_draws(n, 50_000)
    taken, diff, ok = _kernels.coupled_chunk(sx, hx, sy, hy, draws, int(np.count_nonzero(hx != hy)))
    assert ok and diff == 0
    for u in draws[:taken]:
        x, y = _coupled_apply(x, y, int(u))
    assert x == y and x.steps == _decode(sx)
    # one step earlier the chains were still apart
    x2, y2 = top_path(n), bottom_path(n)
    for u in draws[:taken - 1]:
        x2, y2 = _coupled_apply(x2, y2, int(u))
    assert x2 != y2


def test_am_walk_matches_reference():
    n = 5
    x = top_path(n)
    s, h = _kernels.to_arrays(x.steps)
    draws = RngStream(2).move_draws(n, 2000)
    codes = np.empty(len(draws), dtype=np.int64)
    _kernels.am_walk(s, h, draws, codes)
    for k, u in enumerate(draws):
        x = _am_apply(x, int(u))
        assert _kernels.from_code(int(codes[k]), 3 * n) == x.steps


def test_python_bodies_agree_with_selected_backend():
    n = 6
    draws = RngStream(3).move_draws(n, 3000)
    results = []
    for fn in (_kernels.coupled_trace, _kernels._coupled_trace):
        sx, hx = _kernels.to_arrays(top_path(n).steps)
        sy, hy = _kernels.to_arrays(bottom_path(n).steps)
        out = np.empty(len(draws))
        fn(sx, hx, sy, hy, draws, potential_weights(n), out)
        results.append(out)
    assert np.allclose(results[0], results[1])


@pytest.mark.parametrize("flag,want", [("1", "python"), ("0", None)])
def test_env_flag_selects_backend(flag, want):
    env = dict(os.environ, NCSTFLIP_DISABLE_NUMBA=flag)
    code = "from ncstflip import _kernels; print(_kernels.BACKEND)"
    got = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    expected = want or ("numba" if _kernels.HAVE_NUMBA else "python")
    assert got.stdout.strip() == expected


def test_backends_give_identical_coalescence_times():
    code = (
        "from ncstflip.spectral import coalescence_experiment;"
        "print(coalescence_experiment(6, 10, seed=4).times)"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, NCSTFLIP_DISABLE_NUMBA=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout)
    assert outs[0] == outs[1]


def test_to_arrays_heights():
    s, h = _kernels.to_arrays(DyckPath("UUUDUD").steps)
    assert s.tolist() == [1, 1, 1, -2, 1, -2]
    assert h.tolist() == [1, 2, 3, 1, 2, 0]
