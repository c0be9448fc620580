"""Generate an instance, look inside it, and save it to disk."""

# %%
import numpy as np

from ehrlich import generate_instance, save_instance, load_instance
from ehrlich.markov import infeasible_prob_lower_bound, is_ergodic

inst = generate_instance(num_states=8, length=32, num_motifs=2, motif_length=4, seed=7)
A = inst.transition

# %% The transition matrix: banned transitions are exact zeros, the diagonal is always allowed.
np.set_printoptions(precision=2, suppress=True)
print(A.probs)
print("zeros per row:", (A.probs == 0).sum(axis=1))
print("ergodic:", is_ergodic(A))

# %% Motifs and the certificate that proves the optimum of 1 is reachable.
for m in inst.motifs:
    print("elements", m.elements, "offsets", m.offsets)
print("certificate", inst.certificate)
print("f(certificate) =", inst(inst.certificate))

# %% Uniform random sequences mostly fall outside the feasible set.
print("lower bound on P(infeasible):", infeasible_prob_lower_bound(8, 32))

# %% Round trip through the self-contained JSON file.
path = save_instance(inst, "demo_instance.json")
again = load_instance(path)
print("reloaded certificate value:", again(again.certificate))
