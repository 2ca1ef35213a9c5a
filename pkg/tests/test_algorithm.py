import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanmi import (ClusterState, Dataset, EmptyClusterError, KanmiConfig, anmi,
                   attribute_labeling, evaluate_move, initialize, run, state_anmi, sweep)
from kanmi.core import histograms_of
from kanmi.kernels import BACKENDS
from kanmi.metrics import d4

from conftest import TABLE1, anmi_oracle, random_dataset
from test_information import TABLE1_ANMI

backends = pytest.mark.parametrize("backend", sorted(BACKENDS))


def init_oracle(records, k):
    """Phase 1 straight from the record-level definitions."""
    members = [[] for _ in range(k)]
    labels = []
    for j, rec in enumerate(records):
        if j < k:
            best = j
        else:
            sims = [d4(histograms_of(m), rec) for m in members]
            best = sims.index(max(sims))
        members[best].append(rec)
        labels.append(best)
    return labels


def reference_sweep(state, eps):
    """Sweep built only on evaluate_move and full ANMI recomputation."""
    moves = 0
    for j in range(state.n):
        a = int(state.labels[j])
        if state.sizes[a] == 1:
            continue
        current = state_anmi(state)
        best, best_val = None, None
        for b in range(state.k):
            if b != a:
                v = evaluate_move(state, j, b)
                if best is None or v > best_val:
                    best, best_val = b, v
        if best_val > current + eps:
            labels = state.labels.copy()
            labels[j] = best
            fresh = ClusterState.from_labels(state.dataset, labels, state.k)
            state.labels[:], state.cah[:], state.sizes[:] = fresh.labels, fresh.cah, fresh.sizes
            moves += 1
    return moves


@backends
def test_initialize_table1(table1, backend):
    state = initialize(table1, 2, backend)
    assert state.labels[:3].tolist() == [0, 1, 1]
    assert state.labels.tolist() == init_oracle(TABLE1, 2)
    state.check()


@backends
def test_initialize_k_equals_n(table1, backend):
    state = initialize(table1, 10, backend)
    assert state.labels.tolist() == list(range(10))


@backends
def test_initialize_identical_records(backend):
    ds = Dataset([("x", "y")] * 7)
    assert initialize(ds, 2, backend).labels.tolist() == [0, 1, 0, 0, 0, 0, 0]


def test_initialize_errors(table1):
    with pytest.raises(ValueError, match="n < k"):
        initialize(table1, 11)
    with pytest.raises(ValueError):
        initialize(table1, 1)


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_initialize_matches_oracle(seed):
    rng = random.Random(seed)
    ds = random_dataset(rng, n_min=3)
    k = rng.randint(2, min(6, ds.n))
    want = init_oracle(ds.records, k)
    for backend in BACKENDS:
        state = initialize(ds, k, backend)
        assert state.labels.tolist() == want
        state.check()


def test_state_anmi_examples(table1):
    state = ClusterState.from_labels(table1, [0] * 5 + [1] * 5)
    assert state_anmi(state) == pytest.approx(TABLE1_ANMI, abs=1e-15)
    singletons = ClusterState.from_labels(table1, list(range(10)))
    assert state_anmi(singletons) == pytest.approx(0.5515301635335071, abs=1e-15)
    ds = Dataset([(v,) for v in "aabbccaabbcc"])
    lab = attribute_labeling(ds, 0)
    assert state_anmi(ClusterState.from_labels(ds, lab.labels)) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_evaluate_move_matches_rebuild(seed):
    rng = random.Random(seed)
    ds = random_dataset(rng, n_min=3, n_max=20)
    k = rng.randint(2, min(4, ds.n))
    labels = list(range(k)) + [rng.randrange(k) for _ in range(ds.n - k)]
    state = ClusterState.from_labels(ds, labels, k)
    before = (state.labels.copy(), state.cah.copy(), state.sizes.copy())
    for j in range(ds.n):
        for b in range(k):
            a = labels[j]
            if b == a:
                continue
            if state.sizes[a] == 1:
                with pytest.raises(EmptyClusterError):
                    evaluate_move(state, j, b)
                continue
            moved = list(labels)
            moved[j] = b
            want = anmi_oracle(ds, moved)
            assert abs(evaluate_move(state, j, b) - want) <= 1e-12
    assert np.array_equal(state.labels, before[0])
    assert np.array_equal(state.cah, before[1])
    assert np.array_equal(state.sizes, before[2])


def test_evaluate_move_symmetric_duplicates():
    # cluster 0 = cluster 1 plus one more copy of record 4: the move mirrors the state
    ds = Dataset([("a", "x"), ("b", "y"), ("a", "x"), ("b", "y"), ("a", "x")])
    state = ClusterState.from_labels(ds, [0, 0, 1, 1, 0])
    base = state_anmi(state)
    assert base > 0
    assert abs(evaluate_move(state, 4, 1) - base) <= 1e-12


def test_evaluate_move_rejects_bad_targets(table1):
    state = ClusterState.from_labels(table1, [0] * 5 + [1] * 5)
    with pytest.raises(ValueError):
        evaluate_move(state, 0, 0)
    with pytest.raises(IndexError):
        evaluate_move(state, 0, 5)


@backends
def test_sweep_at_local_optimum(backend):
    ds = Dataset([("a", "x")] * 3 + [("b", "y")] * 3)
    state = ClusterState.from_labels(ds, [0, 0, 0, 1, 1, 1])
    snapshot = state.cah.copy()
    assert sweep(state, KanmiConfig(2), backend) == 0
    assert np.array_equal(state.cah, snapshot)


@backends
def test_sweep_moves_misplaced_record(backend):
    ds = Dataset([("a", "x")] * 4 + [("b", "y")] * 4)
    labels = [0, 0, 0, 1, 1, 1, 1, 1]  # record 3 matches cluster 0 everywhere
    state = ClusterState.from_labels(ds, labels)
    before = anmi_oracle(ds, labels)
    moved = sweep(state, KanmiConfig(2), backend)
    assert moved >= 1
    assert state.labels[3] == 0
    after = anmi_oracle(ds, state.labels.tolist())
    assert after > before
    assert after == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_sweep_matches_reference(seed):
    rng = random.Random(seed)
    ds = random_dataset(rng, n_min=4, n_max=30)
    k = rng.randint(2, min(4, ds.n))
    cfg = KanmiConfig(k)
    ref = initialize(ds, k, "python")
    for _ in range(3):
        snapshot = ref.labels.copy()
        want_moves = reference_sweep(ref, cfg.improvement_epsilon)
        for backend in BACKENDS:
            state = ClusterState.from_labels(ds, snapshot, k)
            assert sweep(state, cfg, backend) == want_moves
            assert state.labels.tolist() == ref.labels.tolist()
            state.check()
        if want_moves == 0:
            break


@backends
def test_run_table1(table1, backend):
    res = run(table1, KanmiConfig(2), backend)
    assert res.converged and res.moves_per_sweep[-1] == 0
    assert res.final_anmi >= res.anmi_history[0]
    assert all(b >= a for a, b in zip(res.anmi_history, res.anmi_history[1:]))
    assert res.final_anmi == pytest.approx(anmi_oracle(table1, res.labels), abs=1e-12)


def best_k_partition(ds, k):
    best = -1.0
    for labels in itertools.product(range(k), repeat=ds.n):
        if len(set(labels)) == k:
            best = max(best, anmi_oracle(ds, labels))
    return best


@pytest.mark.parametrize("protos, order", [
    ([("a", "x"), ("b", "y")], [0, 1, 0, 1, 0, 1, 0, 1]),
    ([("a", "x"), ("b", "y")], [0, 1, 1, 0, 0, 1, 1, 0]),
    ([("a", "x", "p"), ("b", "y", "p"), ("c", "y", "q")], [0, 1, 2, 0, 1, 2]),
    ([("a", "x"), ("a", "y"), ("b", "y")], [0, 1, 2, 2, 1, 0]),
])
def test_run_recovers_prototypes(protos, order):
    ds = Dataset([protos[c] for c in order])
    k = len(protos)
    res = run(ds, KanmiConfig(k))
    groups = {}
    for c, l in zip(order, res.labels):
        groups.setdefault(c, set()).add(l)
    assert all(len(v) == 1 for v in groups.values())
    assert len({next(iter(v)) for v in groups.values()}) == k
    assert res.final_anmi == pytest.approx(best_k_partition(ds, k), abs=1e-12)


def test_run_is_deterministic():
    ds = random_dataset(random.Random(7), n_min=40, n_max=60)
    a, b = run(ds, KanmiConfig(3)), run(ds, KanmiConfig(3))
    assert a.labels == b.labels
    assert a.anmi_history == b.anmi_history
    assert a.moves_per_sweep == b.moves_per_sweep


def test_max_sweeps_cap():
    ds = random_dataset(random.Random(3), n_min=40, n_max=60, r_max=6, p_max=5)
    res = run(ds, KanmiConfig(4, max_sweeps=1, improvement_epsilon=0.0))
    assert res.sweeps_run == 1
    assert res.converged == (res.moves_per_sweep[-1] == 0)


def test_config_validation():
    with pytest.raises(ValueError):
        KanmiConfig(1)
    with pytest.raises(ValueError):
        KanmiConfig(2, max_sweeps=0)
    with pytest.raises(ValueError):
        KanmiConfig(2, improvement_epsilon=-1.0)


def test_run_accepts_plain_k(table1):
    assert run(table1, 2).labels == run(table1, KanmiConfig(2)).labels


def test_result_to_dict(table1):
    d = run(table1, 2).to_dict()
    assert len(d["labels"]) == 10 and d["sweeps_run"] >= 1
