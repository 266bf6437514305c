"""Simulation and verification tools for maxima of perturbed random walks."""
from .harness import ExperimentConfig, Report, ks_two_sample, read_report, run_experiment, write_report
from .limits import (AtomSet, frechet_extremal, frechet_sup_cdf, levy_ito_marginal,
                     limit_max_process, sample_poisson_atoms, stable_char, stable_cms,
                     stable_from_atoms)
from .paths import StepPath, Trajectory, prw_trajectory, running_sup, sandwich_check
from .skorokhod import (ConvergenceReport, Polyline, completed_graph, distance, j1_distance,
                        m1_distance, m1_oscillation, monotone_convergence_check,
                        uniform_distance)
from .tails import (Independent, LimitMeasureSpec, Linear, LogW, Polar, StableParams,
                    limit_measure_spec, model_from_dict, norming_a, norming_b, sample_pair,
                    tail_prob)
from .theorem_lab import (DeterministicInstance, build_gn, counterexample, epsilon_restrict,
                          g_eps, limit_g0, verify_main10)

__version__ = "0.1.0"
