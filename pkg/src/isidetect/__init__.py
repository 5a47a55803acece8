"""Graph-based detection for binary-input ISI channels: LP relaxation,
message passing on the combined PR/LDPC Tanner graph, Viterbi reference,
and LP-properness analysis of channels."""

from .analysis import (LP_IMPROPER, LP_PROPER, UNDETERMINED, ChannelClassification,
                       all_half_event, check_nc, check_wnc, classify_channel,
                       error_event_distance, error_event_variance, failure_probability,
                       lp_distance, search_min_distance)
from .channel import (Channel, LambdaSet, add_awgn, build_channel, gram_coefficients,
                      matched_filter, modulate, transmit_noiseless)
from .detect_lp import (DetectorOutput, LpDetector, build_relaxation,
                        evaluate_projected_objective, lp_detect)
from .detect_mp import MpConfig, MpDetector, check_update, init_llrs, mp_detect, \
    run_message_passing
from .ldpc import (ParityCheckMatrix, build_encoder, encode, generate_regular, parse_alist,
                   syndrome_check, write_alist)
from .lp import LinearProgram, LpSolution, solve_lp
from .ml import exhaustive_ml, viterbi_ml
from .sim import SweepConfig, run_sweep, snr_to_sigma
from .tanner import TannerGraph, attach_code_layer, build_pr_graph

__version__ = "0.1.0"
