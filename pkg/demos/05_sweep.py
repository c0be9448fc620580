"""Random search over survival quantile and mutation/recombination rates."""

# %%
from ehrlich import GaConfig, SweepConfig, generate_instance, run_sweep

inst = generate_instance(num_states=32, length=32, num_motifs=2, motif_length=4, seed=0)
base = GaConfig(num_particles=256, survival_quantile=0.02, iterations=30)

# Candidate 0 is the base config, the rest are log-uniform draws.
rows = run_sweep(inst, base, SweepConfig(budget=6), trials=8, root_seed=0)

# %% Lower median cumulative regret is better.
for r in rows:
    print(r["rank"], r["candidate"], f"alpha={r['alpha']:.3g} p_m={r['p_m']:.3g} p_r={r['p_r']:.3g}", r["score"])
