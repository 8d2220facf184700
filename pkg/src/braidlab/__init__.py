"""Braid group representations, two-qudit leakage analysis and limit theorems."""

from .angles import Angle
from .ball import bfs_ball
from .errors import BraidlabError
from .leakage import (
    BestEffort,
    BridgeSolution,
    LeakageReport,
    NoSolution,
    Subspace,
    TwoQuditLayout,
    admissible_theta_grid,
    embed_pair,
    enumerate_leakage_free,
    leakage_of,
    solve_bridge_numeric,
    solve_bridge_qubit_closed_form,
    theta_scan,
)
from .limits import (
    EigenSpec,
    LimitResult,
    UniversalityVerdict,
    arrangement_count,
    check_abelian,
    crude_anyon_bound,
    forced_abelian_2d,
    formanek_N,
    image_growth,
    universality_classify,
    vafa_check,
)
from .reps import (
    Rep,
    build_burau_unreduced,
    build_character,
    build_eta,
    build_ising_majorana,
    build_jones_b3,
    build_standard_type,
    composition_factor,
    evaluate,
    projectively_equivalent,
    unitarize,
    verify_relations,
)
from .words import BraidWord, parse_word

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "BestEffort",
    "BraidWord",
    "BraidlabError",
    "BridgeSolution",
    "EigenSpec",
    "LeakageReport",
    "LimitResult",
    "NoSolution",
    "Rep",
    "Subspace",
    "TwoQuditLayout",
    "UniversalityVerdict",
    "admissible_theta_grid",
    "arrangement_count",
    "bfs_ball",
    "build_burau_unreduced",
    "build_character",
    "build_eta",
    "build_ising_majorana",
    "build_jones_b3",
    "build_standard_type",
    "check_abelian",
    "composition_factor",
    "crude_anyon_bound",
    "embed_pair",
    "enumerate_leakage_free",
    "evaluate",
    "forced_abelian_2d",
    "formanek_N",
    "image_growth",
    "leakage_of",
    "parse_word",
    "projectively_equivalent",
    "solve_bridge_numeric",
    "solve_bridge_qubit_closed_form",
    "theta_scan",
    "unitarize",
    "universality_classify",
    "vafa_check",
    "verify_relations",
]
