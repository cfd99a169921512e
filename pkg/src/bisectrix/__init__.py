"""Recover triangles from the feet of their angle bisectors, exactly."""

from .bisector_system import (
    CharacteristicPolynomial,
    InstanceSquaredSides,
    build_ground_truth_system,
    build_printed_system,
    eliminate_to_characteristic,
)
from .constructibility import Verdict, verdict_for
from .exact_core import UPoly, rational_roots, sylvester_resultant
from .geometry import TriangleSolution, bisector_feet, classify_root, forward_problem
from .pipeline import SolveReport, solve
from .realroots import isolate_real_roots, refine, sturm_sequence

__version__ = "1.0.0"

__all__ = [
    "CharacteristicPolynomial",
    "InstanceSquaredSides",
    "SolveReport",
    "TriangleSolution",
    "UPoly",
    "Verdict",
    "bisector_feet",
    "build_ground_truth_system",
    "build_printed_system",
    "classify_root",
    "eliminate_to_characteristic",
    "forward_problem",
    "isolate_real_roots",
    "rational_roots",
    "refine",
    "solve",
    "sturm_sequence",
    "sylvester_resultant",
    "verdict_for",
]
