"""Exceptional-point scanner for a gain/loss two-qubit circuit-QED model.

Library layout:

- :mod:`epscan.biortho`: biorthogonal eigensystems of dense complex matrices.
- :mod:`epscan.swt`: generalized Schrieffer-Wolff reduction onto a
  quasi-degenerate group.
- :mod:`epscan.model`: the physical model, its analytic eigenbasis and the
  effective 3x3 matrices of the near-resonant triple.
- :mod:`epscan.cubic`: real-cubic spectral analysis, EP2 contour tracing,
  EP3 search, phase diagrams.
- :mod:`epscan.spectra`: exact diagonalization, level tracking, parity
  indices, EP2 bisection, ED-vs-effective comparison.
- :mod:`epscan.cli`: batch command-line front end.
"""

from .biortho import BiorthogonalEigensystem, binormalize, cluster_quasi_degenerate, eigendecompose
from .cubic import (
    CriticalEstimate,
    DepressedCubic,
    EP3Report,
    PhaseDiagram,
    cardano_roots,
    char_poly_coeffs,
    classify,
    critical_scaling,
    depress,
    depressed_from_params,
    find_ep3,
    perturbation_case,
    phase_diagram,
    trace_ep2_line,
)
from .errors import EpscanError
from .model import (
    SystemParams,
    build_full_hamiltonian,
    effective_matrix_approx,
    effective_matrix_full,
    effective_matrix_numeric,
    parity_operator,
    parity_transform,
    resonant_group_basis,
    single_qubit_data,
    two_spin_sigma_action,
    unperturbed_eigensystem,
)
from .spectra import (
    ComparisonTable,
    LevelBranch,
    assign_parity_indices,
    compare_effective_vs_ed,
    detect_ep2,
    detect_ep2_all,
    full_spectrum,
    track_levels,
)
from .swt import (
    EffectiveHamiltonian,
    QuasiDegenerateGroup,
    build_generator,
    build_projectors,
    effective_hamiltonian,
    split_perturbation,
    sw_decomposition,
    transform_check,
)

__version__ = "0.1.0"
