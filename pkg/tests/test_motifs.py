import numpy as np
import pytest

from ehrlich.core import ParameterError, derive_stream
from ehrlich.markov import build_band_mask, is_feasible, sample_transition_matrix, TransitionMatrix
from ehrlich.motifs import (
    SpacedMotif,
    construct_certificate,
    sample_motif_elements,
    sample_motifs,
    sample_offsets,
)


@pytest.fixture(scope="module")
def matrix():
    return sample_transition_matrix(16, rng=derive_stream(0, "motif-matrix"))


def full_matrix(v):
    mask = build_band_mask(v, v // 2, permutation=range(v))
    return TransitionMatrix(np.full((v, v), 1.0 / v), mask, 1.0)


def test_elements_chunk_a_feasible_draw(matrix):
    rng = derive_stream(1, "el")
    for c, k in [(1, 1), (2, 2), (4, 4), (3, 8)]:
        chunks = sample_motif_elements(matrix, c, k, rng)
        assert chunks.shape == (c, k)
        assert is_feasible(chunks.ravel(), matrix)


def test_offsets_degenerate_cases():
    rng = derive_stream(0, "off")
    assert sample_offsets(1, 10, 3, rng).tolist() == [0]
    assert sample_offsets(4, 8, 2, rng).tolist() == [0, 1, 2, 3]


def test_offsets_worked_example_range():
    rng = derive_stream(0, "off8")
    seen = set()
    for _ in range(2000):
        s = sample_offsets(2, 8, 2, rng)
        assert s[0] == 0
        seen.add(int(s[1]))
    # slack = (8 - 4) // 2 = 2 and the gap lies in {1, 2, 3}. With k = 2 the simplex
    # weight is always 1, so only the full gap of 3 occurs.
    assert seen <= {1, 2, 3}
    assert 3 in seen


def test_offsets_gap_sizes_for_longer_motifs():
    rng = derive_stream(0, "off-k3")
    gaps = set()
    for _ in range(2000):
        gaps.update(np.diff(sample_offsets(3, 10, 2, rng)).tolist())
    # A gap of 1 + slack needs a simplex weight of exactly 1.
    assert gaps == {1, 2}


def test_offset_gap_bounds():
    rng = derive_stream(2, "gaps")
    for k, L, c in [(4, 64, 2), (8, 256, 4), (3, 10, 3), (5, 100, 1)]:
        slack = (L - c * k) // c
        for _ in range(500):
            s = sample_offsets(k, L, c, rng)
            gaps = np.diff(s)
            assert gaps.min() >= 1 and gaps.max() <= 1 + slack
            assert c * (s[-1] + 1) <= L


def test_offsets_reject_too_short():
    with pytest.raises(ParameterError):
        sample_offsets(4, 7, 2, derive_stream(0, "x"))


def test_expected_span_matches_independent_simplex_estimate():
    k, L, c = 4, 50, 2
    slack = (L - c * k) // c
    rng = derive_stream(3, "span")
    spans = np.array([sample_offsets(k, L, c, rng)[-1] for _ in range(10_000)])
    # Independent sampler: numpy's Dirichlet(1, ..., 1) is uniform on the simplex.
    w = np.random.default_rng(123).dirichlet(np.ones(k - 1), size=400_000)
    expected = k - 1 + np.floor(w * slack).sum(axis=1).mean()
    se = spans.std(ddof=1) / np.sqrt(spans.size)
    assert abs(spans.mean() - expected) < 3 * se + 1e-3


def test_certificate_worked_example():
    motifs = [SpacedMotif([0, 3], [0, 3]), SpacedMotif([1, 2], [0, 2])]
    cert = construct_certificate(motifs, full_matrix(4), 8)
    assert cert.tolist() == [0, 0, 0, 3, 1, 1, 2, 2]


def test_certificate_single_state():
    cert = construct_certificate([SpacedMotif([5], [0])], full_matrix(6), 4)
    assert cert.tolist() == [5, 5, 5, 5]


def test_sampled_motif_set_certificate(matrix):
    rng = derive_stream(4, "set")
    for c, k, L in [(1, 1, 4), (2, 4, 32), (4, 4, 256), (4, 8, 32)]:
        ms = sample_motifs(matrix, L, c, k, rng.derive(f"{c}-{k}-{L}"))
        cert = ms.certificate
        assert cert.shape == (L,) and is_feasible(cert, matrix)
        for m in ms.motifs:
            hits = [all(cert[a + o] == e for o, e in zip(m.offsets, m.elements)) for a in range(L - m.span)]
            assert any(hits)


def test_spaced_motif_invariants():
    with pytest.raises(ParameterError):
        SpacedMotif([1, 2], [1, 2])
    with pytest.raises(ParameterError):
        SpacedMotif([1, 2], [0, 0])
    with pytest.raises(ParameterError):
        SpacedMotif([1, 2, 3], [0, 1])
