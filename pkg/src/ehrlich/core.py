"""Shared value types, errors and the seeded-stream discipline.

Sequences are 1-D integer numpy arrays and populations are dense ``(n, L)``
integer matrices. Objective values are plain floats, with ``-inf`` marking an
infeasible sequence.

Every random draw in the package goes through an :class:`RngStream`. A stream
is identified by a root seed and a text label; the pair is hashed into a
:class:`numpy.random.SeedSequence`, so the same pair always yields the same
draws, and child streams are derived by extending the label instead of
sharing generator state between workers.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np

NEG_INFINITY = float("-inf")
POS_INFINITY = float("inf")


class EhrlichError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(EhrlichError, ValueError):
    """An argument violates a documented precondition."""


class GenerationError(EhrlichError, RuntimeError):
    """Procedural generation exhausted its retry budget."""


class LoadError(EhrlichError, ValueError):
    """An instance or config file is malformed or violates an invariant."""


def _label_words(label: str) -> list[int]:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 32, 4)]


class RngStream:
    """A labelled, reproducible random stream.

    Instances are single-owner: hand a worker its own stream via
    :meth:`derive` rather than sharing one across threads.
    """

    __slots__ = ("seed", "label", "generator")

    def __init__(self, seed: int, label: str):
        if not label:
            raise ParameterError("stream label must be non-empty")
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ParameterError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = seed
        self.label = label
        entropy = [seed & 0xFFFFFFFF, seed >> 32, *_label_words(label)]
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def derive(self, label: str) -> "RngStream":
        """Child stream keyed on this stream's seed and ``label``."""
        if not label:
            raise ParameterError("stream label must be non-empty")
        return RngStream(self.seed, f"{self.label}/{label}")

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, label={self.label!r})"


def derive_stream(root_seed: int, label: str) -> RngStream:
    """Return the deterministic stream for ``(root_seed, label)``."""
    return RngStream(root_seed, label)


def state_dtype(num_states: int) -> np.dtype:
    """Smallest unsigned dtype that also holds the padding sentinel ``num_states``."""
    if num_states < 255:
        return np.dtype(np.uint8)
    if num_states < 65535:
        return np.dtype(np.uint16)
    return np.dtype(np.uint32)


def as_sequence(x, num_states: int, length: int | None = None) -> np.ndarray:
    """Validate a single sequence and return it as a 1-D integer array."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ParameterError(f"sequence must be 1-D, got shape {arr.shape}")
    return _check_states(arr, num_states, length)


def as_population(xs, num_states: int, length: int | None = None) -> np.ndarray:
    """Validate a batch of sequences and return it as an ``(n, L)`` integer array."""
    arr = np.asarray(xs)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0 if length is None else length)
    if arr.ndim != 2:
        raise ParameterError(f"population must be 2-D, got shape {arr.shape}")
    return _check_states(arr, num_states, length)


def _check_states(arr: np.ndarray, num_states: int, length: int | None) -> np.ndarray:
    if not np.issubdtype(arr.dtype, np.integer):
        if arr.size and not np.all(np.mod(arr, 1) == 0):
            raise ParameterError("sequence states must be integers")
        arr = arr.astype(np.int64)
    if length is not None and arr.shape[-1] != length:
        raise ParameterError(f"expected sequence length {length}, got {arr.shape[-1]}")
    if arr.size and (arr.min() < 0 or arr.max() >= num_states):
        raise ParameterError(f"states must lie in [0, {num_states})")
    return arr


def nearest_rank(values, p: float):
    """Nearest-rank empirical quantile of ``values`` at level ``p`` in [0, 1].

    Returns the smallest sorted value whose rank ``r`` satisfies ``r / n >= p``
    (rank 1 for ``p == 0``). Works with infinite entries since no
    interpolation is involved.
    """
    arr = np.sort(np.asarray(values, dtype=float), axis=0)
    n = arr.shape[0]
    if n == 0:
        raise ParameterError("quantile of an empty sample")
    return arr[nearest_rank_index(n, p)]


def nearest_rank_index(n: int, p: float) -> int:
    """Zero-based sorted index used by :func:`nearest_rank`."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"quantile level must be in [0, 1], got {p}")
    # Guard against p*n landing a hair above an integer through rounding.
    rank = math.ceil(p * n - 1e-9)
    return min(max(rank, 1), n) - 1
