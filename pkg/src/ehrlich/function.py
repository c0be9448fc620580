"""The Ehrlich objective.

For a feasible sequence ``x`` the objective is the product over motifs of the
quantized motif satisfaction

    h_q(x, m, s) = max_l (sum_j [x[l + s_j] == m_j]) // (k / q) / q

and ``-inf`` for infeasible sequences. Anchors whose offsets run past the end
of the sequence simply count those positions as mismatches.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import NEG_INFINITY, POS_INFINITY, ParameterError, RngStream, as_population, as_sequence, derive_stream, state_dtype
from .markov import DEFAULT_TEMPERATURE, TransitionMatrix, default_bandwidth, sample_sequence, sample_transition_matrix
from .motifs import MotifSet, SpacedMotif, sample_motifs


class EvalCounter:
    """Thread-safe running total of objective evaluations."""

    def __init__(self):
        self._lock = threading.Lock()
        self._total = 0

    @property
    def total_evaluations(self) -> int:
        return self._total

    def add(self, count: int) -> None:
        with self._lock:
            self._total += int(count)

    def __repr__(self) -> str:
        return f"EvalCounter({self._total})"


def check_parameters(num_states: int, length: int, num_motifs: int, motif_length: int, quantization: int) -> None:
    if num_states < 2:
        raise ParameterError(f"num_states must be at least 2, got {num_states}")
    if length < 2:
        raise ParameterError(f"sequence length must be at least 2, got {length}")
    if num_motifs < 1 or motif_length < 1:
        raise ParameterError("need at least one motif of at least one element")
    if num_motifs * motif_length > length:
        raise ParameterError(
            f"{num_motifs} motifs of length {motif_length} do not fit in length {length}"
        )
    if not 1 <= quantization <= motif_length or motif_length % quantization:
        raise ParameterError(
            f"quantization {quantization} must divide the motif length {motif_length}"
        )


@dataclass(frozen=True, eq=False)
class EhrlichInstance:
    """A complete, verified test function.

    ``counter`` accumulates every call made through :func:`evaluate` and
    :func:`evaluate_batch`; everything else is immutable.
    """

    transition: TransitionMatrix
    motif_set: MotifSet
    length: int
    num_states: int
    num_motifs: int
    motif_length: int
    quantization: int
    negate: bool = False
    root_seed: int = 0
    counter: EvalCounter = field(default_factory=EvalCounter, repr=False)

    def __post_init__(self):
        check_parameters(self.num_states, self.length, self.num_motifs, self.motif_length, self.quantization)
        if self.transition.num_states != self.num_states:
            raise ParameterError("transition matrix size does not match num_states")
        if len(self.motif_set.motifs) != self.num_motifs:
            raise ParameterError("motif count does not match num_motifs")
        for motif in self.motif_set.motifs:
            if len(motif) != self.motif_length:
                raise ParameterError("motif length does not match motif_length")
            if motif.span > self.length - 1:
                raise ParameterError("motif span exceeds the sequence length")
            if min(motif.elements) < 0 or max(motif.elements) >= self.num_states:
                raise ParameterError("motif elements out of range")

    @property
    def motifs(self) -> tuple[SpacedMotif, ...]:
        return self.motif_set.motifs

    @property
    def certificate(self) -> np.ndarray:
        return self.motif_set.certificate

    @property
    def optimal_value(self) -> float:
        return -1.0 if self.negate else 1.0

    def with_quantization(self, quantization: int) -> "EhrlichInstance":
        """Same matrix and motifs at a different precision, with a fresh counter."""
        return EhrlichInstance(
            self.transition, self.motif_set, self.length, self.num_states,
            self.num_motifs, self.motif_length, quantization, self.negate, self.root_seed,
        )

    def descriptor(self) -> dict:
        return {
            "v": self.num_states,
            "L": self.length,
            "c": self.num_motifs,
            "k": self.motif_length,
            "q": self.quantization,
            "bandwidth": self.transition.mask.bandwidth,
            "temperature": self.transition.temperature,
            "seed": self.root_seed,
            "negate": self.negate,
        }

    @cached_property
    def _tables(self):
        elements = np.array([m.elements for m in self.motifs], dtype=np.int64)
        offsets = np.array([m.offsets for m in self.motifs], dtype=np.int64)
        flat_allowed = np.ascontiguousarray(self.transition.allowed).ravel()
        return elements, offsets, flat_allowed

    def __call__(self, x):
        arr = np.asarray(x)
        if arr.ndim == 2:
            return evaluate_batch(self, arr)
        return evaluate(self, arr)


def generate_instance(
    num_states: int = 32,
    length: int = 256,
    num_motifs: int = 4,
    motif_length: int = 4,
    quantization: int | None = None,
    bandwidth: int | None = None,
    temperature: float = DEFAULT_TEMPERATURE,
    seed: int = 0,
    negate: bool = False,
) -> EhrlichInstance:
    """Procedurally generate an instance; the seed fully determines it.

    The matrix and motifs are drawn from streams that do not depend on the
    quantization, so instances differing only in ``quantization`` share them.
    """
    if quantization is None:
        quantization = motif_length
    check_parameters(num_states, length, num_motifs, motif_length, quantization)
    if bandwidth is None:
        bandwidth = default_bandwidth(num_states)
    transition = sample_transition_matrix(num_states, bandwidth, temperature, derive_stream(seed, "matrix"))
    motif_set = sample_motifs(transition, length, num_motifs, motif_length, derive_stream(seed, "motifs"))
    inst = EhrlichInstance(
        transition, motif_set, length, num_states, num_motifs, motif_length, quantization, negate, seed
    )
    value = _raw_values(inst, inst.certificate[None, :])[0]
    if value != 1.0:
        raise ParameterError("certificate does not attain the optimum")
    return inst


def _best_counts(xs: np.ndarray, elements: np.ndarray, offsets: np.ndarray, num_states: int) -> np.ndarray:
    """Per-motif best match count over all anchors, shape ``(n, c)``."""
    n, length = xs.shape
    num_motifs, k = elements.shape
    pad = int(offsets[:, -1].max())
    padded = np.full((n, length + pad), num_states, dtype=state_dtype(num_states))
    padded[:, :length] = xs
    count_dtype = np.uint8 if k < 255 else np.int64
    best = np.empty((n, num_motifs), dtype=np.int64)
    counts = np.empty((n, length), dtype=count_dtype)
    for i in range(num_motifs):
        counts.fill(0)
        for j in range(k):
            off = offsets[i, j]
            counts += padded[:, off : off + length] == elements[i, j]
        best[:, i] = counts.max(axis=1)
    return best


def _raw_values(inst: EhrlichInstance, xs: np.ndarray) -> np.ndarray:
    elements, offsets, flat_allowed = inst._tables
    v = inst.num_states
    values = np.full(xs.shape[0], NEG_INFINITY)
    if xs.shape[0] == 0:
        return values
    feasible = flat_allowed[xs[:, :-1].astype(np.intp) * v + xs[:, 1:]].all(axis=1)
    if not feasible.any():
        return values
    q = inst.quantization
    levels = _best_counts(xs[feasible], elements, offsets, v) // (inst.motif_length // q)
    values[feasible] = np.prod(levels, axis=1, dtype=np.float64) / float(q) ** inst.num_motifs
    return values


def motif_satisfaction(x, elements, offsets, quantization: int) -> float:
    """Quantized degree to which ``x`` satisfies one spaced motif."""
    motif = SpacedMotif(elements, offsets)
    k = len(motif)
    if not 1 <= quantization <= k or k % quantization:
        raise ParameterError(f"quantization {quantization} must divide the motif length {k}")
    x = np.asarray(x, dtype=np.int64)
    if x.ndim != 1 or x.size == 0 or x.min() < 0:
        raise ParameterError("x must be a non-empty 1-D sequence of non-negative states")
    top = int(max(x.max(), max(motif.elements))) + 1
    count = _best_counts(
        x[None, :], np.array([motif.elements]), np.array([motif.offsets]), top
    )[0, 0]
    return (int(count) // (k // quantization)) / quantization


def _signed(inst: EhrlichInstance, values: np.ndarray) -> np.ndarray:
    if not inst.negate:
        return values
    # Minimizers see +inf for infeasible points.
    return np.where(np.isneginf(values), POS_INFINITY, -values)


def evaluate(inst: EhrlichInstance, x) -> float:
    """Objective value of one sequence."""
    x = as_sequence(x, inst.num_states, inst.length)
    inst.counter.add(1)
    return float(_signed(inst, _raw_values(inst, x[None, :]))[0])


def evaluate_batch(inst: EhrlichInstance, xs) -> np.ndarray:
    """Objective values of a batch of sequences, one counter increment per row."""
    return _evaluate_trusted(inst, as_population(xs, inst.num_states, inst.length))


def _evaluate_trusted(inst: EhrlichInstance, xs: np.ndarray) -> np.ndarray:
    # Skips validation; callers guarantee shape and state range.
    inst.counter.add(xs.shape[0])
    return _signed(inst, _raw_values(inst, xs))


def initial_solution(inst: EhrlichInstance, rng: RngStream) -> np.ndarray:
    """A single DMP draw of the instance's length."""
    return sample_sequence(inst.transition, inst.length, rng)
