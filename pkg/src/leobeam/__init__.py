"""LEO satellite downlink MU-MIMO toolbox.

Channel geometry and Vandermonde steering vectors, ZF and space-time
(Doppler-stacked) precoding rates, minimum-eigenvalue bounds for crowded
clusters, balls-and-bins crowding analysis, greedy space-Doppler user
selection, and the seeded Monte Carlo experiment drivers tying it together.
"""

__version__ = "0.1.0"

from .channel import (ULA, UPA, ArrayConfig, ChannelMatrix, SpaceTimeChannel,
                      UserState, build_channel, build_spacetime_channel,
                      draw_users, friis_gain, steering_vector,
                      temporal_steering, upa_steering)
from .precoding import (GramMatrix, RateReport, SingularGramError, gram,
                        gram_from_users, mrt_sum_rate, rate_from_gram,
                        space_time_sum_rate, tdma_sum_rate,
                        two_user_correlation, two_user_rate, zf_sinr,
                        zf_sum_rate)
from .bounds import (BoundChainResult, BoundReport, ClusterSpec,
                     binomial_test_vector, bound_chain, cluster_bound_report,
                     cluster_eig_lower, cluster_eig_upper, cluster_users,
                     equispaced_rate_factor, min_eigenvalue, rayleigh_quotient)
from .crowding import (LoadSample, Regime, RegimeReport, ScalingPoint,
                       bin_count, classify_regime, int_power, max_load,
                       predicted_max_load)
from .scheduling import (SelectionResult, random_select,
                         semi_orthogonal_select, space_doppler_select,
                         threshold_curve, top_norm_select, tune_threshold)
from .experiments import (ConfigError, ExperimentConfig, NumericalError,
                          ResultTable, empirical_cdf, run_bound_chain,
                          run_cdf, run_gain_map, run_maxload_study,
                          run_power_sweep, run_threshold_scan,
                          summarize_power_sweep)

__all__ = [name for name in dir() if not name.startswith("_")]
