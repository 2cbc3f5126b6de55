from hypothesis import given, settings

from ncstflip.bijection import check_concatenation, excursions, path_to_tree, tree_to_path
from ncstflip.fuss_dyck import EMPTY, DyckPath, enumerate_paths
from ncstflip.ncst import enumerate_trees, make_tree, subtree

from conftest import EXAMPLE_PATH, EXAMPLE_TREE, dyck_paths


def test_example_path_maps_to_example_tree():
    assert path_to_tree(EXAMPLE_PATH) == EXAMPLE_TREE
    assert tree_to_path(EXAMPLE_TREE) == EXAMPLE_PATH


def test_small_cases():
    assert path_to_tree(DyckPath("UUD")) == make_tree(1, [(0, 1)])
    assert tree_to_path(make_tree(2, [(0, 1), (1, 2)])).steps == "UUDUUD"
    assert tree_to_path(make_tree(2, [(0, 1), (0, 2)])).steps == "UUUDUD"
    assert tree_to_path(make_tree(2, [(0, 2), (1, 2)])).steps == "UUUUDD"
    assert path_to_tree(EMPTY).n == 0


def test_fixture_triple(walk_triple):
    for key in ("W1", "W2", "W3"):
        path, tree = walk_triple[key]
        assert path_to_tree(path) == tree
        assert tree_to_path(tree) == path


def test_fixture_swap_positions(walk_triple):
    def diff(a, b):
        return tuple(j + 1 for j in range(len(a.steps)) if a.steps[j] != b.steps[j])

    w1, w2, w3 = walk_triple["W1"][0], walk_triple["W2"][0], walk_triple["W3"][0]
    assert diff(w1, w2) == walk_triple["swaps"]["W1-W2"]
    assert diff(w2, w3) == walk_triple["swaps"]["W2-W3"]


def test_fixture_shared_edges(walk_triple):
    # 8 edges survive the adjacent move W2 <-> W3, 5 are relocated
    t2, t3 = walk_triple["W2"][1], walk_triple["W3"][1]
    shared = t2.edge_set & t3.edge_set
    assert shared == {(0, 7), (0, 8), (3, 4), (8, 9), (8, 10), (8, 13), (10, 11), (10, 12)}
    assert t2.edge_set - shared == {(0, 1), (0, 3), (0, 6), (2, 3), (3, 5)}
    assert t3.edge_set - shared == {(1, 2), (1, 4), (4, 5), (4, 6), (6, 7)}


def test_bijection_exhaustive():
    for n in range(8):
        paths = enumerate_paths(n)
        trees = [path_to_tree(p) for p in paths]
        assert len(set(trees)) == len(paths)
        assert set(trees) == set(enumerate_trees(n))
        assert all(tree_to_path(t) == p for p, t in zip(paths, trees))


def test_concatenation_examples():
    u = DyckPath("UUD")
    assert check_concatenation(u, u)
    assert path_to_tree(u + u) == make_tree(2, [(0, 1), (1, 2)])
    for v in enumerate_paths(3):
        assert check_concatenation(EMPTY, v)


def test_concatenation_exhaustive():
    for total in range(6):
        for nu in range(total + 1):
            for u in enumerate_paths(nu):
                for v in enumerate_paths(total - nu):
                    assert check_concatenation(u, v)


def test_excursions_map_to_segments():
    for p in enumerate_paths(5):
        t = path_to_tree(p)
        for x in excursions(p):
            piece = DyckPath(p.steps[x.start:x.end])
            assert (x.lo, x.hi) in t.edge_set
            assert subtree(t, x.lo, x.hi) == path_to_tree(piece)


@settings(max_examples=150, deadline=None)
@given(dyck_paths(max_n=20))
def test_roundtrip_property(p):
    assert tree_to_path(path_to_tree(p)) == p
