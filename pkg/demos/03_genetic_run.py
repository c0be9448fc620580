"""One genetic-algorithm trial on an easy instance."""

# %%
from ehrlich import GaConfig, generate_instance, run_ga
from ehrlich.core import derive_stream

inst = generate_instance(num_states=8, length=32, num_motifs=2, motif_length=2, seed=0)
cfg = GaConfig(num_particles=1024, survival_quantile=0.01, iterations=20)

state, trace = run_ga(inst, cfg, derive_stream(0, "trial/0"))

# %% Best value, regret and feasibility per generation.
for row in trace.rows()[:10]:
    print(row["iteration"], row["evaluations"], row["best_value"], row["simple_regret"], round(row["feasible_fraction"], 3))

print("best sequence:", state.best_sequence, "value", state.best_value)
