"""Ehrlich functions: procedurally generated, provably solvable test functions
for black-box optimization over discrete sequences, plus a genetic-algorithm
baseline and a multi-seed benchmark harness.

Typical use::

    from ehrlich import generate_instance, GaConfig, run_campaign

    inst = generate_instance(num_states=32, length=256, num_motifs=4, motif_length=4, seed=0)
    result = run_campaign(inst, GaConfig(num_particles=1024), trials=32)
"""

from .core import (
    NEG_INFINITY,
    EhrlichError,
    GenerationError,
    LoadError,
    ParameterError,
    RngStream,
    derive_stream,
    nearest_rank,
)
from .function import (
    EhrlichInstance,
    EvalCounter,
    evaluate,
    evaluate_batch,
    generate_instance,
    initial_solution,
    motif_satisfaction,
)
from .genetic import GaConfig, GaState, ga_step, mutate, recombine, run_ga
from .harness import CampaignResult, aggregate_traces, run_campaign
from .markov import (
    BandMask,
    TransitionMatrix,
    build_band_mask,
    infeasible_prob_lower_bound,
    is_ergodic,
    is_feasible,
    sample_sequence,
    sample_sequences,
    sample_transition_matrix,
)
from .metrics import TrialTrace, cumulative_regret, feasible_fraction, simple_regret
from .motifs import MotifSet, SpacedMotif, construct_certificate, sample_motif_elements, sample_motifs, sample_offsets
from .serialize import dumps_instance, instance_digest, load_instance, loads_instance, save_instance
from .sweep import SweepConfig, run_sweep

__version__ = "0.1.0"
