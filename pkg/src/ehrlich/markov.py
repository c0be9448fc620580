"""Random ergodic transition matrices with banded infeasible transitions.

A matrix is built from a wrap-around band of allowed transitions whose rows
are shuffled, with the diagonal forced back on so that every state may
repeat. Row weights come from a tempered softmax of standard normal draws,
restricted to the mask and renormalized. The zero pattern defines which
adjacent state pairs a feasible sequence may contain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GenerationError, ParameterError, RngStream, as_population, as_sequence

DEFAULT_TEMPERATURE = 0.5
MAX_ATTEMPTS = 32


def default_bandwidth(num_states: int) -> int:
    return (num_states * 2) // 5


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class BandMask:
    """Boolean ``v x v`` pattern of allowed transitions.

    ``permutation[i]`` is the row of the unshuffled circulant band that ended
    up in row ``i`` before the diagonal was forced on.
    """

    entries: np.ndarray
    bandwidth: int
    permutation: tuple[int, ...]

    @property
    def num_states(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    probs: np.ndarray
    mask: BandMask
    temperature: float

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(np.asarray(self.probs, dtype=float)))

    @property
    def num_states(self) -> int:
        return self.probs.shape[0]

    @property
    def allowed(self) -> np.ndarray:
        """Boolean pattern of positive entries."""
        return self.probs > 0

    def check(self) -> None:
        """Raise :class:`ParameterError` unless every structural invariant holds."""
        p = self.probs
        v = p.shape[0]
        if p.shape != (v, v) or self.mask.entries.shape != (v, v):
            raise ParameterError("transition matrix and mask must be square and equal-sized")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ParameterError("transition probabilities must be finite and non-negative")
        if np.any(np.abs(p.sum(axis=1) - 1.0) > 1e-9):
            raise ParameterError("every row must sum to 1")
        if not np.array_equal(p > 0, self.mask.entries):
            raise ParameterError("zero entries disagree with the mask")
        if np.any(np.diag(p) <= 0):
            raise ParameterError("self-transitions must have positive probability")
        if not is_ergodic(self):
            raise ParameterError("transition matrix is not ergodic")


def circulant_band(num_states: int, bandwidth: int) -> np.ndarray:
    """Wrap-around band: ``(i, j)`` allowed iff their circular distance is at most ``bandwidth``."""
    idx = np.arange(num_states)
    diff = (idx[None, :] - idx[:, None]) % num_states
    return np.minimum(diff, num_states - diff) <= bandwidth


def build_band_mask(num_states: int, bandwidth: int, rng: RngStream | None = None, permutation=None) -> BandMask:
    """Shuffle the rows of a circulant band and force the diagonal on.

    Pass an explicit ``permutation`` to bypass the random shuffle; otherwise
    ``rng`` supplies a uniformly random row order.
    """
    if num_states < 2:
        raise ParameterError(f"need at least 2 states, got {num_states}")
    if not 0 <= bandwidth < num_states:
        raise ParameterError(f"bandwidth must be in [0, {num_states}), got {bandwidth}")
    if permutation is None:
        if rng is None:
            raise ParameterError("either rng or permutation is required")
        permutation = rng.generator.permutation(num_states)
    permutation = np.asarray(permutation, dtype=np.int64)
    if sorted(permutation.tolist()) != list(range(num_states)):
        raise ParameterError("permutation must rearrange 0..v-1")
    entries = circulant_band(num_states, bandwidth)[permutation]
    np.fill_diagonal(entries, True)
    return BandMask(_frozen(entries), int(bandwidth), tuple(int(i) for i in permutation))


def masked_softmax(z: np.ndarray, mask: BandMask, temperature: float) -> np.ndarray:
    """Row softmax of ``z / temperature``, zeroed off the mask and renormalized."""
    if temperature <= 0:
        raise ParameterError(f"temperature must be positive, got {temperature}")
    logits = np.asarray(z, dtype=float) / temperature
    logits = logits - logits.max(axis=1, keepdims=True)
    weights = np.exp(logits)
    weights /= weights.sum(axis=1, keepdims=True)
    weights = np.where(mask.entries, weights, 0.0)
    # A masked entry can underflow to 0 at tiny temperatures; keep it strictly positive.
    weights = np.where(mask.entries & (weights <= 0), np.finfo(float).tiny, weights)
    return weights / weights.sum(axis=1, keepdims=True)


def sample_transition_matrix(
    num_states: int,
    bandwidth: int | None = None,
    temperature: float = DEFAULT_TEMPERATURE,
    rng: RngStream | None = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> TransitionMatrix:
    """Draw a random ergodic transition matrix.

    Each attempt uses a fresh row permutation and fresh normal draws; a
    :class:`GenerationError` is raised if none of ``max_attempts`` is ergodic.
    """
    if rng is None:
        raise ParameterError("rng is required")
    if bandwidth is None:
        bandwidth = default_bandwidth(num_states)
    if temperature <= 0:
        raise ParameterError(f"temperature must be positive, got {temperature}")
    for _ in range(max_attempts):
        mask = build_band_mask(num_states, bandwidth, rng)
        z = rng.generator.standard_normal((num_states, num_states))
        matrix = TransitionMatrix(masked_softmax(z, mask, temperature), mask, float(temperature))
        if is_ergodic(matrix):
            return matrix
    raise GenerationError(
        f"no ergodic matrix after {max_attempts} attempts (v={num_states}, bandwidth={bandwidth})"
    )


def _pattern(A) -> np.ndarray:
    if isinstance(A, TransitionMatrix):
        return A.probs > 0
    return np.asarray(A) > 0


def is_ergodic(A) -> bool:
    """Check that every entry of ``A**m`` is reachable, ``m = (v - 1)**2 + 1``.

    Works on the boolean zero pattern with square-and-multiply, so it never
    underflows the way floating point powers do for large ``v``.
    """
    pattern = _pattern(A)
    v = pattern.shape[0]
    exponent = (v - 1) ** 2 + 1
    base = pattern.astype(np.int64)
    result = np.eye(v, dtype=np.int64)
    while exponent:
        if exponent & 1:
            result = (result @ base > 0).astype(np.int64)
        exponent >>= 1
        if exponent:
            base = (base @ base > 0).astype(np.int64)
    return bool(result.all())


def _cdf(A: TransitionMatrix) -> np.ndarray:
    cdf = np.cumsum(A.probs, axis=1)
    return cdf / cdf[:, -1:]


def sample_sequences(A: TransitionMatrix, length: int, size: int, rng: RngStream) -> np.ndarray:
    """Draw ``size`` DMP sequences of ``length`` states, first state uniform."""
    if length < 1:
        raise ParameterError(f"length must be at least 1, got {length}")
    v = A.num_states
    gen = rng.generator
    cdf = _cdf(A)
    out = np.empty((size, length), dtype=np.int64)
    out[:, 0] = gen.integers(0, v, size=size)
    u = gen.random((size, length - 1))
    for pos in range(1, length):
        # Zero-probability states share their predecessor's cdf value, so they are never chosen.
        out[:, pos] = (cdf[out[:, pos - 1]] <= u[:, pos - 1, None]).sum(axis=1)
    return out


def sample_sequence(A: TransitionMatrix, length: int, rng: RngStream) -> np.ndarray:
    """Draw one DMP sequence."""
    return sample_sequences(A, length, 1, rng)[0]


def feasible_mask(xs, A) -> np.ndarray:
    """Boolean feasibility of each row of a population."""
    pattern = _pattern(A)
    xs = as_population(xs, pattern.shape[0])
    if xs.shape[1] < 2:
        return np.ones(xs.shape[0], dtype=bool)
    return pattern[xs[:, :-1], xs[:, 1:]].all(axis=1)


def is_feasible(x, A) -> bool:
    """True iff every adjacent transition of ``x`` has positive probability."""
    pattern = _pattern(A)
    x = as_sequence(x, pattern.shape[0])
    return bool(pattern[x[:-1], x[1:]].all())


def infeasible_prob_lower_bound(num_states: int, length: int) -> float:
    """Lower bound on the chance a uniform random sequence is infeasible.

    Assumes at least one forbidden transition and counts only the
    ``length // 2`` disjoint adjacent pairs.
    """
    if num_states < 2 or length < 2:
        raise ParameterError("need num_states >= 2 and length >= 2")
    return float(-np.expm1((length // 2) * np.log1p(-1.0 / num_states**2)))
