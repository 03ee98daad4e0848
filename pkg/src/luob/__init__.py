"""Rank-locus obstructions to simulating one semi-positive Hamiltonian by local unitaries of another."""
from .cubic import POLE, PlaneCubicClass, UnsupportedShape, classify_plane_cubic, g_of_etas, moduli_k
from .fixtures import Fixture, load_fixture
from .hamfile import LoadError, load_spec, read_spec, save_spec
from .locus import (DegeneratingLocus, LineComponent, LocusSignature, detect_line_union, estimate_degree,
                    estimate_dimension, extract_finite_points, is_empty, member, sample_points, signature,
                    signatures_distinguish)
from .operators import (HermitianOperator, LocalUnitary, PureStateVector, SpaceShape, apply_local_unitary,
                        lu_mixture, max_schmidt_rank_in_range, operator_rank, partial_trace,
                        random_local_unitary, schmidt_rank, spectral_decompose, swap_conjugate)
from .pencil import LinearPencil, build_pencil, evaluate_pencil, minor_ideal, pencil_from_operator
from .points import ProjectivePoint
from .polynomial import HomogeneousPolynomial
from .simcheck import (NO_OBSTRUCTION, OBSTRUCTION, PRECONDITION_FAILED, ComparisonReport, corollary1_check,
                       corollary2_swap_check, lu_invariance_selftest, theorem1_check, theorem2_check,
                       theorem3_check)
from .tolerances import DEFAULT_TOL, Tolerances, ValidationError

__version__ = "0.1.0"
