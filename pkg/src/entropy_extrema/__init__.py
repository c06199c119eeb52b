"""Local extrema of matrix entropy functions on subspaces and their
behaviour under tensor products."""

from .config import Tolerances, get_tolerances, set_tolerances, tolerances
from .exceptions import *  # noqa: F401,F403
from .spectral import (dag, hermitian_eigen, inverse_on_support, log_on_support,
                       matrix_from_dict, matrix_to_dict, psd_function, support_projector,
                       svd, tensor)
from .entropy import (VON_NEUMANN, FiniteDifference, SpectralFunction, density_entropy,
                      derivative_kernel, finite_difference_derivative,
                      first_directional_derivative, normalize, normalized_spectrum,
                      pnorm, pnorm_entropy, relative_entropy, vn_entropy)
from .subspaces import (CanonicalBlocks, CommutativityReport, Subspace, block_commutation,
                        canonical_blocks, commutator_norm, local_commutativity_check,
                        orthogonal_complement_at, orthonormalize, random_tangent,
                        second_derivative_finite, tangent_directions,
                        tensor_complement_blocks, tensor_subspace)
from .certificates import (CRITICAL, INAPPLICABLE, STRONG_LOCAL_MAX, STRONG_LOCAL_MIN,
                           VIOLATED, CertificateReport, TwoNormTerms, VnTerms,
                           criticality_check, tensor_case_directions, two_norm_F,
                           two_norm_local_max_certificate, two_norm_second_derivative,
                           two_norm_terms, vn_local_min_certificate,
                           vn_second_derivative_commuting, vn_terms, worst_phase)
from .perturbation import (PerturbationReport, affine_expansion_check,
                           eigenvalue_perturbation_check, necessary_condition)
from .optimizer import (GapReport, OptimizationResult, OptimizerConfig, additivity_gap,
                        optimize_entropy)
from .counterexamples import (OrthogonalFamily, anticommuting_family, orthogonal_subspace,
                              radon_hurwitz, real_gap_demo)

__version__ = "0.1.0"
