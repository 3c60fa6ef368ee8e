"""dynext: extend polarized self-maps of embedded projective varieties to
certified finite self-maps of the ambient projective space.

Everything is exact: coefficients are arbitrary-precision rationals or
residues in a large prime field, randomized repair steps are re-verified,
and every returned extension carries machine-checkable certificates.
"""

from .errors import (ArityError, DynextError, FieldMismatchError,
                     IndeterminacyError, NonHomogeneousError, OffVarietyError,
                     ParseError, RingMismatchError, UnknownVariableError,
                     UsageError)
from .fields import Field, ModP, Scalar, is_prime
from .linalg import (LinearObstruction, LinearSolution, Matrix, RrefResult,
                     kernel_basis, rref, solve, solve_many)
from .poly import (GREVLEX, LEX, Monomial, MonomialOrder, PolyRing,
                   Polynomial, block_elimination, format_monomial,
                   format_polynomial, monomials_of_degree, random_homogeneous)
from .groebner import (GradedPiece, GroebnerBasis, affine_dimension,
                       buchberger, clear_cache, division_witness,
                       elimination_ideal, graded_piece, hilbert_function,
                       is_member, is_projectively_empty, normal_form)
from .dynsys import (OrbitReport, PolarizedSystem, ProjectiveVariety,
                     RationalPoint, ValidationReport, Violation, evaluate_map,
                     iterate_pullback, orbit_classify, validate_system,
                     validate_variety)
from .extension import (Certificates, ExtensionConfig, ExtensionFailure,
                        ExtensionResult, RSelection, Transcript,
                        VerificationReport, certify, extend,
                        select_starting_r, verify_extension,
                        verify_with_alphas)
from .curves import (CoordinateLift, CurveExtensionOutcome, CurveSelfMap,
                     LiftReport, Obstruction, RationalCurve, TrailEntry,
                     end_to_end_extend, image_profile, implicitize,
                     liftability, pullbacks, restriction_matrix,
                     validate_curve_selfmap, validate_parametrization,
                     verify_curve_extension)
from .problemfile import ProblemFile, parse_problem_file

__version__ = "0.1.0"
