"""Phase transitions and large deviations of l1 sparse recovery.

Theory (thresholds, rates and their decompositions) lives in ``pt_core``,
``ldp_core`` and ``hdg_core``; the LP solver and recovery tests in
``l1_solver``; simulations in ``monte_carlo``.
"""

from .errors import BracketError, ConvergenceError, DomainError, L1LdpError
from .hdg_core import psi_com, psi_ext, psi_int, psi_int_donoho, psi_net
from .l1_solver import BasisPursuit, null_space_success_check, solve_l1, solve_l1_nonneg
from .ldp_core import Tail, ZetaPoint, finite_n_bound, i_sph, optimal_point, rate, solve_beta_0, zeta, zeta_gradient
from .monte_carlo import ExperimentConfig, SuccessTest, TrialBatch, rate_estimate, run_experiment, sweep
from .pt_core import Mode, ProblemGeometry, psi, pt_curve, solve_alpha_w, solve_beta_w, xi

__version__ = "0.1.0"
