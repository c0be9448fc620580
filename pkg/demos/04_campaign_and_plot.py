"""Many seeds, quantile bands, and an SVG plot comparing two quantization levels."""

# %%
import json

from ehrlich import GaConfig, generate_instance, run_campaign
from ehrlich.plotting import plot_campaigns

base = generate_instance(num_states=8, length=32, num_motifs=2, motif_length=4, seed=1)
cfg = GaConfig(num_particles=256, survival_quantile=0.02, iterations=30)

# %% Same motifs and matrix, two quantization levels.
results = []
for q in (1, 4):
    result = run_campaign(base.with_quantization(q), cfg, trials=16, root_seed=0, label=f"q={q}")
    result.write("demo-out", f"campaign_q{q}")
    print(q, "median final regret", result.final("simple_regret"), "q90", result.final("simple_regret", "q90"))
    results.append(json.loads(result.to_json()))

# %% One SVG per metric, bands are the 10-90% range across trials.
for path in plot_campaigns(results, "demo-out"):
    print("wrote", path)
