import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reference import naive_objective, naive_satisfaction
from ehrlich import (
    EhrlichInstance,
    evaluate,
    evaluate_batch,
    generate_instance,
    initial_solution,
    motif_satisfaction,
)
from ehrlich.core import LoadError, ParameterError, derive_stream
from ehrlich.markov import is_feasible, sample_sequences
from ehrlich.serialize import dumps_instance, instance_digest, load_instance, loads_instance, save_instance


def test_satisfaction_levels_k2():
    m, s = [1, 2], [0, 2]
    assert motif_satisfaction([1, 0, 2, 0], m, s, 2) == 1.0
    assert motif_satisfaction([1, 0, 0, 0], m, s, 2) == 0.5
    assert motif_satisfaction([0, 0, 0, 0], m, s, 2) == 0.0
    assert motif_satisfaction([1, 0, 0, 0], m, s, 1) == 0.0
    assert motif_satisfaction([0, 1, 0, 2], m, s, 1) == 1.0


def test_overhanging_anchor_counts_partial_matches():
    # Anchor 4 matches element 0 while its second offset falls off the end.
    assert motif_satisfaction([1, 1, 1, 1, 0, 0], [0, 2], [0, 2], 2) == 0.5
    assert motif_satisfaction([1, 1, 1, 1, 1, 0], [0, 2], [0, 2], 1) == 0.0


def test_satisfaction_k8_q4_count5():
    elements = [1, 2, 3, 4, 5, 6, 7, 1]
    offsets = [0, 1, 2, 4, 5, 7, 8, 10]
    x = [0] * 16
    # Anchor 3 matches the first five elements only.
    for e, o in list(zip(elements, offsets))[:5]:
        x[3 + o] = e
    assert naive_satisfaction(x, elements, offsets, 8) == Fraction(5, 8)
    assert motif_satisfaction(x, elements, offsets, 4) == 0.5
    assert motif_satisfaction(x, elements, offsets, 8) == 5 / 8
    assert motif_satisfaction(x, elements, offsets, 2) == 0.5
    assert motif_satisfaction(x, elements, offsets, 1) == 0.0


def test_satisfaction_rejects_non_divisor():
    with pytest.raises(ParameterError):
        motif_satisfaction([0, 1, 2], [0, 1, 2], [0, 1, 2], 2)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda k: st.tuples(
            st.lists(st.integers(0, 3), min_size=k, max_size=k),
            st.lists(st.integers(1, 3), min_size=k - 1, max_size=k - 1),
            st.sampled_from([q for q in range(1, k + 1) if k % q == 0]),
        )
    ),
    st.lists(st.integers(0, 3), min_size=1, max_size=30),
)
def test_satisfaction_matches_naive(motif, x):
    elements, gaps, q = motif
    offsets = [0, *np.cumsum(gaps).tolist()]
    if offsets[-1] >= len(x):
        x = x + [0] * (offsets[-1] - len(x) + 1)
    assert motif_satisfaction(x, elements, offsets, q) == float(naive_satisfaction(x, elements, offsets, q))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=12, max_size=12), st.sampled_from([1, 2, 3, 6]))
def test_finer_quantization_never_scores_lower(x, q):
    elements, offsets = [0, 1, 2, 0, 1, 2], [0, 1, 3, 4, 6, 8]
    assert motif_satisfaction(x, elements, offsets, 6) >= motif_satisfaction(x, elements, offsets, q)


def test_certificate_scores_one(small_instance):
    assert evaluate(small_instance, small_instance.certificate) == 1.0


def test_infeasible_scores_neg_inf(small_instance):
    A = small_instance.transition
    i, j = map(int, np.argwhere(A.probs == 0)[0])
    x = small_instance.certificate.copy()
    x[0], x[1] = i, j
    assert not is_feasible(x, A)
    assert evaluate(small_instance, x) == float("-inf")


def _zero_match_sequence(inst):
    used = {e for m in inst.motifs for e in m.elements}
    free = [s for s in range(inst.num_states) if s not in used]
    return np.full(inst.length, free[0])


def test_zero_match_scores_zero(small_instance):
    assert evaluate(small_instance, _zero_match_sequence(small_instance)) == 0.0


def test_batch_elementwise_and_counter():
    inst = generate_instance(8, 32, 2, 4, 4, seed=3)
    A = inst.transition
    i, j = map(int, np.argwhere(A.probs == 0)[0])
    bad = inst.certificate.copy()
    bad[5], bad[6] = i, j
    batch = np.stack([inst.certificate, bad, _zero_match_sequence(inst)])
    before = inst.counter.total_evaluations
    assert evaluate_batch(inst, batch).tolist() == [1.0, float("-inf"), 0.0]
    assert inst.counter.total_evaluations == before + 3
    assert evaluate_batch(inst, np.empty((0, 32), dtype=int)).size == 0
    evaluate(inst, inst.certificate)
    assert inst.counter.total_evaluations == before + 4
    perm = [2, 0, 1]
    assert evaluate_batch(inst, batch[perm]).tolist() == evaluate_batch(inst, batch)[perm].tolist()


def test_evaluate_validates_input(small_instance):
    with pytest.raises(ParameterError):
        evaluate(small_instance, small_instance.certificate[:-1])
    bad = small_instance.certificate.copy()
    bad[0] = small_instance.num_states
    with pytest.raises(ParameterError):
        evaluate(small_instance, bad)


def test_initial_solution_is_feasible_and_deterministic(small_instance):
    a = initial_solution(small_instance, derive_stream(5, "init"))
    b = initial_solution(small_instance, derive_stream(5, "init"))
    assert np.array_equal(a, b)
    assert is_feasible(a, small_instance.transition)
    assert evaluate(small_instance, a) > float("-inf")


def test_values_lie_on_lattice():
    for seed, (c, k, q) in enumerate([(2, 4, 2), (3, 4, 4), (2, 6, 3)]):
        inst = generate_instance(6, 40, c, k, q, seed=seed)
        xs = sample_sequences(inst.transition, 40, 100_000 // 3, derive_stream(seed, "lattice"))
        values = evaluate_batch(inst, xs)
        assert np.isfinite(values).all()
        scaled = values * q**c
        assert np.array_equal(scaled, np.round(scaled))
        allowed = {float(np.prod(p)) for p in itertools.product(range(q + 1), repeat=c)}
        assert set(np.unique(scaled).tolist()) <= allowed


def _small_instances(count, v=3, L=6, base_seed=100):
    configs = [(2, 2, 1), (2, 2, 2), (1, 3, 3), (1, 3, 1), (3, 2, 2), (1, 2, 2), (1, 1, 1)]
    out = []
    for i in range(count):
        c, k, q = configs[i % len(configs)]
        out.append(generate_instance(v, L, c, k, q, bandwidth=i % 2 if v == 3 else None, seed=base_seed + i))
    return out


def test_brute_force_equivalence_and_optimum():
    space = np.array(list(itertools.product(range(3), repeat=6)))
    for inst in _small_instances(6):
        values = evaluate_batch(inst, space)
        probs = inst.transition.probs.tolist()
        for x, val in zip(space.tolist(), values.tolist()):
            assert val == naive_objective(x, probs, inst.motifs, inst.quantization)
        assert values.max() == 1.0


def test_negation():
    inst = generate_instance(3, 6, 2, 2, 2, bandwidth=0, seed=101)
    neg = EhrlichInstance(
        inst.transition, inst.motif_set, inst.length, inst.num_states, inst.num_motifs,
        inst.motif_length, inst.quantization, negate=True, root_seed=inst.root_seed,
    )
    space = np.array(list(itertools.product(range(3), repeat=6)))
    pos, negv = evaluate_batch(inst, space), evaluate_batch(neg, space)
    finite = np.isfinite(pos)
    assert (~finite).any()
    assert np.array_equal(negv[finite], -pos[finite])
    assert np.all(negv[~finite] == float("inf"))
    assert np.array_equal(np.flatnonzero(pos == pos.max()), np.flatnonzero(negv == negv.min()))
    assert neg.optimal_value == -1.0


def test_quantization_invalid():
    with pytest.raises(ParameterError):
        generate_instance(8, 32, 2, 4, 3)
    with pytest.raises(ParameterError):
        generate_instance(8, 7, 2, 4, 4)


def test_with_quantization_shares_structure():
    a = generate_instance(8, 32, 2, 8, 8, seed=4)
    b = generate_instance(8, 32, 2, 8, 2, seed=4)
    assert np.array_equal(a.transition.probs, b.transition.probs)
    assert a.motifs == b.motifs
    assert dumps_instance(a.with_quantization(2)) == dumps_instance(b)


# --- serialization -------------------------------------------------------------


def test_round_trip_is_byte_identical(tmp_path, default_instance):
    path = save_instance(default_instance, tmp_path / "inst.json")
    loaded = load_instance(path)
    assert dumps_instance(loaded) == path.read_text()
    assert np.array_equal(loaded.transition.probs, default_instance.transition.probs)
    assert evaluate(loaded, loaded.certificate) == 1.0
    assert instance_digest(loaded) == instance_digest(default_instance)


def test_file_fields(default_instance):
    data = json.loads(dumps_instance(default_instance))
    for key in ("version", "v", "L", "c", "k", "q", "temperature", "bandwidth", "seed", "matrix", "mask", "motifs", "certificate"):
        assert key in data
    assert len(data["matrix"]) == 32 and len(data["matrix"][0]) == 32
    assert data["motifs"][0].keys() == {"elements", "offsets"}


def test_random_instances_round_trip():
    rng = np.random.default_rng(7)
    for seed in range(100):
        v = int(rng.integers(2, 20))
        c, k = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        L = c * k + int(rng.integers(1, 20))
        q = int(rng.choice([d for d in range(1, k + 1) if k % d == 0]))
        inst = generate_instance(v, L, c, k, q, seed=seed)
        text = dumps_instance(inst)
        loaded = loads_instance(text)
        assert dumps_instance(loaded) == text
        assert evaluate(loaded, loaded.certificate) == 1.0


def _edited(inst, **changes):
    data = json.loads(dumps_instance(inst))
    data.update(changes)
    return json.dumps(data)


def test_load_rejects_bad_files(small_instance):
    with pytest.raises(LoadError):
        loads_instance(_edited(small_instance, q=3))
    with pytest.raises(LoadError):
        loads_instance("{not json")
    with pytest.raises(LoadError):
        loads_instance(json.dumps({"version": 1}))
    cert = _zero_match_sequence(small_instance).tolist()
    with pytest.raises(LoadError):
        loads_instance(_edited(small_instance, certificate=cert))
    data = json.loads(dumps_instance(small_instance))
    data["matrix"][0][0] += 0.5
    with pytest.raises(LoadError):
        loads_instance(json.dumps(data))
    data = json.loads(dumps_instance(small_instance))
    data["mask"][0] = [1 - b for b in data["mask"][0]]
    with pytest.raises(LoadError):
        loads_instance(json.dumps(data))
    with pytest.raises(LoadError):
        load_instance("/nonexistent/instance.json")
