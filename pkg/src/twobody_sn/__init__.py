"""Two particles coupled by softened Newtonian gravity, each also feeling its own
semiclassical self-field, on a periodic 1D grid."""

from .errors import ConfigError, NoBoundState, NonConvergence, NormBlowup, NotProductState, NumericalError, SNError
from .grid import Grid1D, make_grid, periodic_min_distance
from .potentials import Couplings, KernelTable, kernel_eval, pair_potential_grid, residual_interaction, self_potential
from .state import SingleProfile, TwoBodyState
from .initial_states import assemble_state, bell_eigenvalues, gaussian_profile, ground_state_sn
from .propagator import StepPlan, energy, evolve, step
from .diagnostics import (
    entropies,
    participation_ratio,
    record,
    schmidt,
    separations,
    short_time_coefficient,
    wigner_reduced,
    wigner_relative,
)
from .hartree import HartreePair, HartreePlan, compare, hartree_step
from .config import ScanConfig, ScenarioConfig, load_config, load_scan
from .experiments import compare_hartree, run_convergence, run_scan, run_scenario

__version__ = "0.1.0"
