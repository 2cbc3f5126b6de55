"""2-Dyck paths, non-crossing spanning trees, the adjacent-move and flip
Markov chains, and the canonical-path comparison between them."""

__version__ = "0.1.0"

from .bijection import path_to_tree, tree_to_path
from .canonical import build_path, classify_move, congestion_census, decode, encode
from .chains import RngStream, am_step, coupled_am_step, fm_step
from .fuss_dyck import DyckPath, enumerate_paths, fuss_catalan, parse_path
from .ncst import Ncst, enumerate_trees, parse_tree, validate_tree
from .spectral import spectral_gap, transition_matrix, tv_mixing_time

__all__ = [
    "DyckPath",
    "Ncst",
    "RngStream",
    "am_step",
    "build_path",
    "classify_move",
    "congestion_census",
    "coupled_am_step",
    "decode",
    "encode",
    "enumerate_paths",
    "enumerate_trees",
    "fm_step",
    "fuss_catalan",
    "parse_path",
    "parse_tree",
    "path_to_tree",
    "spectral_gap",
    "transition_matrix",
    "tree_to_path",
    "tv_mixing_time",
    "validate_tree",
]
