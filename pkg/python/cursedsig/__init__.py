from importlib.metadata import PackageNotFoundError, version

from ._common import (BlockStatsError, ConvergenceError, DegenerateSampleError, GameFileError, InfeasiblePinError,
                      SearchBudgetError, EQ_TOL, OPT_TOL, PROB_TOL)
from ._game import (Assessment, BeliefSystem, FiniteActions, PriorDistribution, ReceiverStrategy, SenderStrategy,
                    SignalingGame, SupportSpec, WageQuadratic, game_to_document, load_game, parse_game)
from ._beliefs import (BeliefRegion, average_sender_strategy, belief_floor, cursed_bayes_update, cursed_perception,
                       minimal_belief_on)
from ._solver import (CseVerdict, EquilibriumKind, EquilibriumRecord, OffPathResponse, attainable_responses,
                      deter_deviation, enumerate_pure_cse, equilibrium_payoffs, receiver_best_response,
                      record_from_assessment, sender_best_response, solve_support_cse, verify_cse)
from ._refinement import (CriterionReport, MessageCheck, br_over_all_beliefs, constrained_belief_set,
                          equilibrium_dominated_types, refine_equilibrium_set, survives_cursed_intuitive,
                          survives_standard_intuitive)
from ._spence import (CostFunction, Interval, SpenceCandidate, SpenceModel, WagePair, cost_from_spec, cost_inverse,
                      equilibrium_wages, hybrid_locus, pooling_region, riley_outcome, riley_selection,
                      separating_region, spence_candidate, survives_spence_criterion, weak_set_dominates)
from ._continuum import (ContinuumModel, IncentiveCheck, Schedule, incentive_check, ode_residual,
                         pooling_education_bound, schedule_table, separating_education, separating_schedule,
                         separating_wage, wage_compression_report)
from ._fixtures import BEER_QUICHE_SEMI_SEPARATING, KMN_HYBRID, beer_quiche_game, data_path, kmn_game
from ._experiment import (BlockStats, PredictionRow, RegimeVerdict, TTest, binary_moments, confidence_interval,
                          load_block_stats, load_bundled_block_stats, one_sample_t, pipeline_regime,
                          prediction_report, regime, regime_prediction)

try:
    __version__ = version('cursedsig')
except PackageNotFoundError:
    __version__ = '0+unknown'
