"""Complex Floquet spectral analysis of photon emission from a
sinusoidally driven two-level emitter coupled to a 1D continuum.

The package solves the nonlinear complex eigenvalue problem of the
driven emitter's Floquet ladder by the continued-fraction method, builds
the emission observables from the resonance pole, and validates every
analytic object against a brute-force time-domain integrator.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .compare import CompareSpec, ComparisonReport, compare
from .config import RunConfig, from_dict, load_config, parse_config
from .dataset import Dataset, read_dataset, write_dataset
from .errors import ConvergenceError
from .model import (DEFAULT_WINDOW, TWO_PI, ChannelSet, Grid1D, ModelParams,
                    make_model, open_channels)
from .observables import (SpatialFieldDataset, SpectrumDataset, hhg_spectrum,
                          interference_decomposition, resonance_spatial_field,
                          survival_amplitude_floquet)
from .oracle import (DiscretizedSystem, SectorState, Trajectory, discretize,
                     evolve, photon_spectrum, spatial_field,
                     survival_probability)
from .perturbation import (BesselWeightTable, bessel_j, bessel_weight_table,
                           perturbative_eigenvalue)
from .self_energy import (Sheet, quadrature_reference, select_sheet, sigma,
                          sigma_prime, spectral_density)
from .solver import (ResonanceState, SolverOptions, continued_fraction,
                     dense_effective_matrix, dense_gauge_gap,
                     dense_truncated_check, dispersion, floquet_c_product,
                     frozen_sheets, left_coefficients, normalize,
                     right_coefficients, shift_mode, solve_resonance)

__all__ = [
    "__version__",
    "CompareSpec", "ComparisonReport", "compare",
    "RunConfig", "from_dict", "load_config", "parse_config",
    "Dataset", "read_dataset", "write_dataset",
    "ConvergenceError",
    "DEFAULT_WINDOW", "TWO_PI", "ChannelSet", "Grid1D", "ModelParams",
    "make_model", "open_channels",
    "SpatialFieldDataset", "SpectrumDataset", "hhg_spectrum",
    "interference_decomposition", "resonance_spatial_field",
    "survival_amplitude_floquet",
    "DiscretizedSystem", "SectorState", "Trajectory", "discretize",
    "evolve", "photon_spectrum", "spatial_field", "survival_probability",
    "BesselWeightTable", "bessel_j", "bessel_weight_table",
    "perturbative_eigenvalue",
    "Sheet", "quadrature_reference", "select_sheet", "sigma", "sigma_prime",
    "spectral_density",
    "ResonanceState", "SolverOptions", "continued_fraction",
    "dense_effective_matrix", "dense_gauge_gap", "dense_truncated_check",
    "dispersion", "floquet_c_product", "frozen_sheets", "left_coefficients",
    "normalize", "right_coefficients", "shift_mode", "solve_resonance",
]
