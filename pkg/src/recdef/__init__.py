"""Symmetric three-term recursions, their resolvents and linear deformations."""
from ._backend import BACKEND
from .chebyshev import (
    cheb_coeffs,
    cheb_deformed_density,
    cheb_density,
    cheb_g00,
    cheb_p,
    cheb_p_hypergeometric,
    cheb_q,
)
from .deformation import (
    DeformationOne,
    DeformationThree,
    bound_state_weight_one,
    deform_one_coeffs,
    deform_three_coeffs,
    deformed_density_one,
    deformed_density_three,
    deformed_g00_one,
    deformed_g00_three,
    deformed_polys_one,
    deformed_polys_three,
    find_bound_states_one,
)
from .recursion import (
    CoefficientSequence,
    PolyVector,
    TransferMatrix,
    abbreviated_polynomials,
    eval_polynomials,
    transfer_matrix,
    wronskian,
)
from .resolvent import (
    DensityGrid,
    PoleError,
    ResolventOptions,
    continued_fraction_g00,
    density,
    density_grid,
    ratio_g00,
)
from .spectra import (
    TridiagonalMatrix,
    build_matrix,
    dos_eigen_histogram,
    dos_finite_ratio,
    eigenvalues,
)

__version__ = "0.1.0"
