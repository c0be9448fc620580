"""Jointly satisfiable spaced motifs and their optimal-solution certificate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GenerationError, ParameterError, RngStream
from .markov import MAX_ATTEMPTS, TransitionMatrix, is_feasible, sample_sequence


@dataclass(frozen=True)
class SpacedMotif:
    """Required ``elements`` at ``offsets`` relative to an anchor position."""

    elements: tuple[int, ...]
    offsets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(e) for e in self.elements))
        object.__setattr__(self, "offsets", tuple(int(s) for s in self.offsets))
        if len(self.elements) != len(self.offsets) or not self.elements:
            raise ParameterError("motif elements and offsets must be non-empty and equal-length")
        if self.offsets[0] != 0:
            raise ParameterError("first motif offset must be 0")
        if any(b <= a for a, b in zip(self.offsets, self.offsets[1:])):
            raise ParameterError("motif offsets must be strictly increasing")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def span(self) -> int:
        return self.offsets[-1]


@dataclass(frozen=True, eq=False)
class MotifSet:
    motifs: tuple[SpacedMotif, ...]
    certificate: np.ndarray

    def __post_init__(self):
        cert = np.array(self.certificate, dtype=np.int64, copy=True)
        cert.flags.writeable = False
        object.__setattr__(self, "motifs", tuple(self.motifs))
        object.__setattr__(self, "certificate", cert)


def sample_motif_elements(A: TransitionMatrix, num_motifs: int, motif_length: int, rng: RngStream) -> np.ndarray:
    """Chunk one DMP draw of ``num_motifs * motif_length`` states into rows."""
    if num_motifs < 1 or motif_length < 1:
        raise ParameterError("need at least one motif of at least one element")
    draw = sample_sequence(A, num_motifs * motif_length, rng)
    return draw.reshape(num_motifs, motif_length)


def sample_offsets(
    motif_length: int, length: int, num_motifs: int, rng: RngStream, max_attempts: int = MAX_ATTEMPTS
) -> np.ndarray:
    """Offsets as cumulative gaps ``1 + floor(w_j * slack)``, ``w`` uniform on the simplex.

    ``slack = (length - num_motifs * motif_length) // num_motifs`` is the share
    of spare positions each motif may spread over.
    """
    if motif_length < 1 or num_motifs < 1:
        raise ParameterError("need at least one motif of at least one element")
    if length < num_motifs * motif_length:
        raise ParameterError(f"length {length} cannot hold {num_motifs} motifs of length {motif_length}")
    if motif_length == 1:
        return np.zeros(1, dtype=np.int64)
    slack = (length - num_motifs * motif_length) // num_motifs
    budget = length // num_motifs
    for _ in range(max_attempts):
        w = rng.generator.standard_exponential(motif_length - 1)
        w /= w.sum()
        gaps = 1 + np.floor(w * slack).astype(np.int64)
        offsets = np.concatenate([[0], np.cumsum(gaps)])
        if offsets[-1] < budget:
            return offsets
    raise GenerationError("motif offsets overflowed the per-motif budget")


def sample_motifs(
    A: TransitionMatrix, length: int, num_motifs: int, motif_length: int, rng: RngStream
) -> MotifSet:
    """Draw a full motif set and certify it by construction."""
    if length < num_motifs * motif_length:
        raise ParameterError(f"length {length} cannot hold {num_motifs} motifs of length {motif_length}")
    elements = sample_motif_elements(A, num_motifs, motif_length, rng.derive("elements"))
    offsets_rng = rng.derive("offsets")
    motifs = tuple(
        SpacedMotif(elements[i], sample_offsets(motif_length, length, num_motifs, offsets_rng))
        for i in range(num_motifs)
    )
    return MotifSet(motifs, construct_certificate(motifs, A, length))


def construct_certificate(motifs, A: TransitionMatrix, length: int) -> np.ndarray:
    """Place motifs end-to-end, filling gaps by repeating the previous element."""
    x = np.empty(length, dtype=np.int64)
    pos = 0
    for motif in motifs:
        if pos + motif.span >= length:
            raise ParameterError("motifs do not fit end-to-end in the sequence")
        for j, elem in enumerate(motif.elements):
            start = pos + motif.offsets[j]
            stop = pos + motif.offsets[j + 1] if j + 1 < len(motif) else start + 1
            x[start:stop] = elem
        pos += motif.span + 1
    x[pos:] = x[pos - 1]
    if not is_feasible(x, A):
        raise GenerationError("certificate is infeasible; motif construction invariant violated")
    return x
