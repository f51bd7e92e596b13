"""Numerical verification of the harmonic oscillator's non-standard solution
families: growing stationary modes, linear-in-time companions, their
Stokes-wedge continuations, and the Jordan-block structure they induce."""

from .numerics import (
    Grid,
    LogScaledReal,
    Trajectory,
    UnitScale,
    adaptive_quad,
    erfi_asymptotic,
    gauss_integral_upper,
    growing_integral,
    ode_integrate,
    second_derivative,
)
from .modes import (
    FGPair,
    ModeFamily,
    SectorTag,
    fbar_mode,
    free_zero_energy_modes,
    linear_mode,
    linear_mode_family,
    make_fg_pair,
    negative_energy_family,
    negative_energy_mode,
    psi_bar0,
    psi_bar1,
    psi_bar_n,
    psi_standard,
    standard_mode,
)
from .verify import (
    DivergenceReport,
    ResidualReport,
    classify_divergence,
    overlap_truncated,
    parity_check,
    stationary_residual,
    timedep_residual,
)
from .jordan import (
    BlockDiagonalH,
    JordanBlock,
    StateVec2,
    assemble,
    evolve,
    left_eigenvector,
    pair_overlaps,
    pseudo_hermiticity_check,
    right_eigenvector,
    schrodinger_pair_solutions,
)
from .wedge import (
    WedgePair,
    make_wedge_pair,
    rotated_residual,
    wedge_f,
    wedge_g,
    wedge_inner_products,
    wedge_linear_family,
    wedge_psi0hat_family,
)

__version__ = "0.1.0"
