"""Growth exponents of continued-fraction digits: exact cylinder geometry,
level-set dimension formulas, cover counting, and a Gauss-measure Monte Carlo.
"""

from .cfcore import (ConstantOneSeq, Convergent, CylinderInterval, ExpFloorSeq,
                     ExplicitSeq, PQSeq, PerturbedSeq, PowerFloorSeq, ScaledSeq,
                     SplicedSeq, ceil_rational_power, check_convergent_invariants,
                     convergents, cylinder, evaluate, expand, fibonacci,
                     floor_exp, floor_rational_power, gauss_map,
                     golden_lower_bound_holds)
from .covers import (AnalyticLevels, ConstraintFamily, CoverReport,
                     CriticalReport, c_family, c_tilde_family, ck_count_bound,
                     ck_count_bound_direct, count_family, count_monotone,
                     critical_exponent, d_family, d_family_levels,
                     enumerate_family, enumerated_cover, falconer_lower_bound,
                     gap_epsilon, gap_epsilon_block, stirling_bounds,
                     uniform_family)
from .ergodic import (ErgodicRun, birkhoff_average, ergodic_run,
                      extract_quotients, p_bounds, sample_gauss)
from .errors import (BracketError, CflabError, ContractViolation,
                     EnumerationTooLarge, MaterializationLimit,
                     PrecisionExhausted, UnsupportedRegime)
from .estimates import TailEstimate, tail_estimate
from .exponent import (construct_tau, lambda_membership_report,
                       liminf_ratio_estimate, perturb, splice,
                       tau_monotone_estimate, tau_series_sum)
from .spectra import (PhiSpec, SpectrumPoint, TSeq, b_growth, b_hirst,
                      dim_banded_estimate, dim_e, dim_f, dim_from_b,
                      dim_from_xi, dim_level_full, dim_level_lambda,
                      ephi_figure_table, intersection_trichotomy, phi_explicit,
                      phi_exponential, phi_from_log, phi_power, phi_stretched,
                      phi_tower, t_sequence, xi_limit)

__version__ = "0.1.0"
