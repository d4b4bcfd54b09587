"""Finite-section numerics for generalized singular integral operators
(GSIOs) on the unit circle.

A GSIO with 2x2 symbol H = [[f, phi], [g, psi]] acts on L2 of the circle as
P+ f P+ + P- g P+ + P+ phi P- + P- psi P-, where P+ is the Riesz
projection.  The package represents symbols exactly (Laurent polynomials
and circle-regular rational functions), assembles finite sections of the
associated Toeplitz/Hankel block operators, recovers symbols through
radial kernel forms, locates essential spectra and spectral-inclusion
regions, computes Fredholm indices by winding numbers, and settles
invertibility through Wiener-Hopf factorization of the 2x2 extension
quotient.
"""

from .errors import (
    AliasRisk,
    EigSolverFailure,
    GsioError,
    InsufficientOrder,
    InternalInconsistency,
    NonUnimodularPoint,
    NotInvertibleOnCircle,
    NotMonomialInner,
    OrderTooSmall,
    ParseError,
    ProbeUnstable,
    ResidualTooLarge,
    RootSplitFailure,
    TailNotConverged,
    WindingMismatch,
)
from .symbols import (
    LaurentSymbol,
    MatrixSymbol,
    RationalSymbol,
    as_rational,
    constant,
    fourier_coeffs,
    gsio_symbol,
    invert,
    matrix_symbol_from_json,
    matrix_symbol_to_json,
    monomial,
    riesz_split,
    symbol_from_json,
    symbol_to_json,
    winding_number,
    z,
    zbar,
)
from .sections import (
    ExtensionBlocks,
    FiniteSection,
    apply_V_conjugation,
    block_toeplitz_section,
    compose,
    dtt_symbol,
    dual_toeplitz_section,
    extension_blocks,
    extension_identity_residual,
    foguel_hankel_section,
    gsio_section,
    hankel_section,
    hardy_form_section,
    toeplitz_section,
    v_conjugate_section,
)
from .spectral import (
    GsioFlags,
    InclusionRegion,
    SymbolPair,
    berezin_pair,
    berezin_pair_section,
    classify,
    dense_spectrum,
    doubling_berezin_first,
    doubling_commutator,
    essential_norm_lower,
    essential_spectrum_curve,
    fredholm_index,
    hankel_distance,
    inclusion_region,
    kernel_order,
    smallest_singular,
    special_case_spectrum,
    symbol_map_rho,
)
from .wiener_hopf import (
    FredholmVerdict,
    WHFactorization,
    fredholm_verdict,
    kernel_dims,
    wh_matrix2,
    wh_scalar,
)
from .oracle import (
    GridFunction,
    compare_action,
    grid_apply,
    grid_function_from_coeffs,
    random_symbol,
)

__version__ = "0.1.0"
