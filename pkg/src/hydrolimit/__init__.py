"""Pseudo-spectral solvers for anisotropic MHD on a thin periodic box and its
hydrostatic limit, with an aspect-ratio convergence-rate harness."""

from .grid import GridSpec
from .spectral import (
    RealField,
    SpectralField,
    anisotropic_poisson_solve,
    dealias,
    forward_transform,
    implicit_diffusion_step,
    inverse_transform,
    load_snapshot,
    partial_derivative,
    save_snapshot,
)
from .constraints import (
    EVEN_IN_Z,
    ODD_IN_Z,
    SpectrumParams,
    VectorState,
    anisotropic_leray_project,
    barotropic_project,
    generate_initial_data,
    hydrostatic_reconstruct,
    parity_defect,
    parity_project,
)
from .diagnostics import (
    DiffRecord,
    DiagnosticsRecord,
    TrilinearReport,
    difference_metrics,
    energy_ledger,
    gamma_of_alpha,
    norm_h1,
    norm_l2,
    trilinear_check,
)
from .shmhd import BlowUpError, ElsasserState, ShmhdParams, elsasser_from_primitive
from .pehm import PehmState, diagnose_vertical, surface_pressure_solve
from .sweep import RateFit, SweepConfig, load_config, run_pair, run_sweep, emit_report

__all__ = [
    "GridSpec", "RealField", "SpectralField", "VectorState",
    "forward_transform", "inverse_transform", "partial_derivative", "dealias",
    "anisotropic_poisson_solve", "implicit_diffusion_step",
    "save_snapshot", "load_snapshot",
    "EVEN_IN_Z", "ODD_IN_Z", "parity_project", "parity_defect",
    "anisotropic_leray_project", "hydrostatic_reconstruct", "barotropic_project",
    "SpectrumParams", "generate_initial_data",
    "ShmhdParams", "ElsasserState", "BlowUpError", "elsasser_from_primitive",
    "PehmState", "diagnose_vertical", "surface_pressure_solve",
    "DiagnosticsRecord", "DiffRecord", "TrilinearReport",
    "norm_l2", "norm_h1", "energy_ledger", "difference_metrics",
    "trilinear_check", "gamma_of_alpha",
    "SweepConfig", "RateFit", "load_config", "run_pair", "run_sweep", "emit_report",
]

__version__ = "0.1.0"
