"""Rydberg-dressed clock-state sensing of motion-induced chirality."""
from .chiral_shift import (
    ChiralSetup,
    canonical_dipole,
    closed_form_shift,
    curl_green_analytic,
    curl_green_numeric,
    helix_slope,
    ordinary_electric_shift,
    resonant_chiral_shift,
)
from .dressed_states import (
    DressedSolution,
    DressingConfig,
    build_hamiltonian,
    figure_of_merit,
    ground_shift,
    match_branch,
    select_dressed_state,
    solve_eigensystem,
)
from .ramsey_sim import RamseyTrace, SequenceSpec, fringe_metrics, simulate_sequence
from .scan import ScanGrid, ScanResult, export_scan, find_optimal_regions, read_scan, run_scan

__version__ = "0.1.0"
