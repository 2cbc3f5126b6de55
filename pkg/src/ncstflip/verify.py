"""Self-check suite behind ``ncstflip verify``.

Each check returns a :class:`CheckResult`; sizes are clipped to the caps of
the routine being exercised so a large ``max_n`` stays cheap where it must.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bijection import path_to_tree, tree_to_path
from .canonical import am_edges, build_path, congestion_census, decode, encode
from .chains import fm_transition_prob
from .fuss_dyck import enumerate_paths, fuss_catalan, fuss_catalan_recurrence
from .ncst import enumerate_trees
from .spectral import AM, FM, transition_matrix, tv_mixing_time


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def check_counts(max_n: int) -> CheckResult:
    for n in range(max_n + 1):
        want = fuss_catalan(2, n)
        got = (len(enumerate_paths(n)), len(enumerate_trees(n)), fuss_catalan_recurrence(2, n))
        if got != (want,) * 3:
            return CheckResult("counts", False, f"n={n}: {got} vs {want}")
    return CheckResult("counts", True, f"n<={max_n}")


def check_bijection(max_n: int) -> CheckResult:
    for n in range(max_n + 1):
        paths = enumerate_paths(n)
        trees = [path_to_tree(p) for p in paths]
        if set(trees) != set(enumerate_trees(n)):
            return CheckResult("bijection", False, f"n={n}: image is not the tree set")
        if any(tree_to_path(t) != p for p, t in zip(paths, trees)):
            return CheckResult("bijection", False, f"n={n}: round trip failed")
    return CheckResult("bijection", True, f"n<={max_n}")


def check_kernels(max_n: int) -> CheckResult:
    for n in range(1, max_n + 1):
        for kind in (AM, FM):
            m = transition_matrix(kind, n)
            if not (m.is_row_stochastic() and m.is_symmetric()):
                return CheckResult("kernels", False, f"{kind} n={n}")
    return CheckResult("kernels", True, f"n<={max_n}")


def check_canonical_paths(max_n: int) -> CheckResult:
    for n in range(1, max_n + 1):
        for i, f in am_edges(n):
            path = build_path(i, f)
            states = path.states()
            if states[0] != path_to_tree(i) or states[-1] != path_to_tree(f):
                return CheckResult("canonical", False, f"endpoints {i}->{f}")
            if len(path) > 3 * n + 2:
                return CheckResult("canonical", False, f"length {len(path)} for {i}->{f}")
            for st in path.steps:
                if fm_transition_prob(st.before, st.after) <= 0:
                    return CheckResult("canonical", False, f"invalid flip in {i}->{f}")
            for block in path.shift_blocks():
                if len(block) > 3 * path.shift_size:
                    return CheckResult("canonical", False, f"shift block too long in {i}->{f}")
    return CheckResult("canonical", True, f"n<={max_n}")


def check_decoding(max_n: int) -> CheckResult:
    for n in range(1, max_n + 1):
        for i, f in am_edges(n):
            path = build_path(i, f)
            for k, st in enumerate(path.steps):
                if decode(st.before, st.after, encode(path, k)) != (i, f):
                    return CheckResult("decoding", False, f"{i}->{f} step {k}")
    return CheckResult("decoding", True, f"n<={max_n}")


def check_census(max_n: int) -> CheckResult:
    details = []
    for n in range(1, max_n + 1):
        rep = congestion_census(n)
        if rep.max_count > 12 * n or not rep.injective:
            return CheckResult("census", False, f"n={n}: max {rep.max_count}, injective {rep.injective}")
        details.append(f"n={n}:{rep.max_count}")
    return CheckResult("census", True, " ".join(details))


def check_mixing_bounds(max_n: int) -> CheckResult:
    for n in range(2, max_n + 1):
        for kind in (AM, FM):
            rep = tv_mixing_time(transition_matrix(kind, n))
            if not (rep.lower_ok and rep.upper_ok):
                return CheckResult("mixing", False, f"{kind} n={n}: {rep.summary()}")
    return CheckResult("mixing", True, f"n<={max_n}")


def run_checks(max_n: int = 4) -> list[CheckResult]:
    small = min(max_n, 5)
    return [
        check_counts(min(max_n, 7)),
        check_bijection(min(max_n, 7)),
        check_kernels(small),
        check_canonical_paths(small),
        check_decoding(min(max_n, 4)),
        check_census(small),
        check_mixing_bounds(min(max_n, 4)),
    ]


def exact_comparison(n: int, trials: int = 50, seed: int = 0) -> tuple[Fraction, bool]:
    """Check ``E_AM(f,f) <= B E_FM(f,f)`` for random rational ``f``; returns (B, all_ok)."""
    from .chains import RngStream
    from .spectral import dirichlet_form, random_rational_function

    b = congestion_census(n).congestion
    am, fm = transition_matrix(AM, n), transition_matrix(FM, n)
    rng = RngStream(seed, key=(n,))
    ok = True
    for _ in range(trials):
        f = random_rational_function(am.size, rng)
        ok &= dirichlet_form(am, f) <= b * dirichlet_form(fm, f)
    return b, ok
