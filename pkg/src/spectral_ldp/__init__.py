"""Spectral large deviations for sparse Erdos-Renyi graphs.

Closed-form rates, planted constructions with certificates, a numerical
variational solver, Monte Carlo with exact small-n oracles, and step-graphon
diagnostics.
"""

from .constructions import build, build_anticlique, build_centered_clique, build_clique, certify
from .core import (NumericalError, ValidationError, WeightedGraph, centered_opnorm, cycle_density,
                   enumerate_exact_tail, schatten_bound_check, spectrum)
from .entropy import ip_asym_gap, ip_graph, ip_scalar
from .montecarlo import conditional_lambda2, estimate_tail, rate_curve, sample_gnp
from .rates import (indpoly_bruteforce, indpoly_closed_form, indpoly_recursive, rate_centered, rate_cycle,
                    rate_lambda1, solve_theta_bar)
from .varsolve import SolverOptions, gradient_check, solve_phi1, solve_phi2

__version__ = "0.1.0"
