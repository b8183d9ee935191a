"""Computation engine for Jacobi-sine numerics, equivariant characteristic
classes over nilpotent coefficient algebras, localization-based equivariant
elliptic genera with rigidity checking, transfer-formula sign bookkeeping, and
local Smith-form/divisor computations on an elliptic curve."""

from .series import (
    DEFAULT_ORDER,
    AlgebraElement,
    NilpotentAlgebra,
    SeriesError,
    SymmetricPolynomial,
    TruncatedSeries,
    algebra_evaluate_series,
    elementary_symmetric_expansion,
    elementary_symmetric_values,
    even_odd_split,
    reconstruct_from_parity,
    series_inverse,
    series_mul,
)
from .elliptic import (
    CurvePoint,
    JacobiSine,
    Lattice,
    LatticeError,
    PoleError,
    TorsionError,
    epsilon_sign,
    exact_order,
    half_period_constant,
    jacobi_sine_eval,
    jacobi_sine_taylor,
    sine_over_x,
)
from .charclass import (
    BundleSummand,
    EquivariantBundle,
    elliptic_euler_class,
    invert_class,
    mu_Q,
    ordinary_euler_class,
)
from .genus import (
    FixedComponent,
    GenusReport,
    ManifoldFixedData,
    SpecialPointError,
    default_grid,
    genus_eval,
    genus_taylor,
    isolated_component,
    principal_part,
    rigidity_check,
    special_points,
)
from .transfer import (
    RotationSystem,
    TransferCertificate,
    component_parity_lemma_check,
    euclidean_quotients,
    index_sets,
    sigma_parity,
    sigma_parity_three_sum,
    sign_change_count_parity,
    star_representatives,
    verify_transfer_lift,
)
from .sheafmod import (
    CuMatrix,
    Divisor,
    SheafDecomposition,
    assemble_sheaf_decomposition,
    determinantal_smith_exponents,
    divisor_degree,
    divisor_sum,
    local_smith_exponents,
    n_torsion_divisor,
    s2n_restriction_matrix,
)

__version__ = "0.1.0"
