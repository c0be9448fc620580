"""Score sequences by hand and watch the quantization levels."""

# %%
import numpy as np

from ehrlich import evaluate, evaluate_batch, generate_instance, motif_satisfaction
from ehrlich.core import derive_stream
from ehrlich.markov import sample_sequences

inst = generate_instance(num_states=8, length=32, num_motifs=2, motif_length=4, quantization=4, seed=7)

# %% One motif, spelled out: partial matches earn partial credit.
m = inst.motifs[0]
x = np.array(inst.certificate)
print("full match:", motif_satisfaction(x, m.elements, m.offsets, 4))
x[:] = x[0]  # constant sequence, feasible because self-transitions are allowed
print("constant sequence:", motif_satisfaction(x, m.elements, m.offsets, 4), "objective", evaluate(inst, x))

# %% Coarser quantization hides progress: q=1 is all or nothing.
free = next(s for s in range(8) if s not in m.elements)
for matched in range(5):
    y = np.full(inst.length, free)
    y[list(m.offsets[:matched])] = m.elements[:matched]
    print(matched, "of 4 matched:", [motif_satisfaction(y, m.elements, m.offsets, q) for q in (1, 2, 4)])

# %% Random feasible draws land on the q^-c lattice.
xs = sample_sequences(inst.transition, inst.length, 2000, derive_stream(0, "demo"))
values = evaluate_batch(inst, xs)
levels, counts = np.unique(values, return_counts=True)
print(dict(zip(levels.tolist(), counts.tolist())))
print("evaluations so far:", inst.counter.total_evaluations)
