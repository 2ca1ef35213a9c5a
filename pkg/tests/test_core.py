import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanmi import (Dataset, Histogram, HistogramSet, Labeling, attribute_labeling,
                   build_histograms, histogram_add, histogram_remove)
from kanmi.core import histograms_of

from conftest import TABLE1, random_dataset


def test_table1_histograms(table1):
    hs = build_histograms(table1)
    assert hs[0].counts == {"M": 5, "F": 5}
    assert hs[1].counts == {"A": 3, "B": 3, "C": 4}
    assert hs.total == 10
    assert [len(h) for h in hs] == table1.domain_sizes == [2, 3]


def test_singleton_histograms():
    hs = build_histograms(Dataset([("a", "b")]))
    assert [h.counts for h in hs] == [{"a": 1}, {"b": 1}]


def test_attribute_labelings_of_table1(table1):
    assert [[j + 1 for j in c] for c in attribute_labeling(table1, 0).clusters()] == \
        [[1, 2, 5, 7, 10], [3, 4, 6, 8, 9]]
    assert [[j + 1 for j in c] for c in attribute_labeling(table1, 1).clusters()] == \
        [[1, 4, 9], [2, 3, 10], [5, 6, 7, 8]]


def test_constant_column_is_one_cluster():
    ds = Dataset([("x", str(i)) for i in range(6)])
    lab = attribute_labeling(ds, 0)
    assert lab.num_labels == 1
    assert set(lab.labels.tolist()) == {0}


def test_attribute_index_out_of_range(table1):
    with pytest.raises(IndexError):
        attribute_labeling(table1, 2)
    with pytest.raises(IndexError):
        attribute_labeling(table1, -1)


def test_histogram_add_remove():
    h = Histogram(0, {"M": 5})
    histogram_add(h, "M")
    assert h.counts == {"M": 6} and h.total == 6
    h = Histogram(0, {"M": 1})
    histogram_remove(h, "M")
    assert h.counts == {} and h.total == 0
    with pytest.raises(KeyError):
        histogram_remove(h, "M")


@given(st.dictionaries(st.sampled_from("abcdef"), st.integers(1, 9)), st.sampled_from("abcdefg"))
def test_add_then_remove_restores(counts, v):
    h = Histogram(3, counts)
    before = h.copy()
    h.add(v).remove(v)
    assert h == before


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset([])
    with pytest.raises(ValueError):
        Dataset([("a", "b"), ("c",)])
    with pytest.raises(ValueError):
        Dataset([()])


def test_interning_is_first_occurrence(table1):
    assert table1.values == [["M", "F"], ["A", "B", "C"]]
    assert table1.codes[:, 1].tolist() == [0, 1, 1, 0, 2, 2, 2, 2, 0, 1]


def test_labeling_renumbers_by_first_occurrence():
    lab = Labeling(["b", "a", "b", "c"])
    assert lab.labels.tolist() == [0, 1, 0, 2]
    assert lab.num_labels == 3
    assert lab.sizes().tolist() == [2, 1, 1]


def test_histogram_set_total_mismatch():
    hs = HistogramSet([Histogram(0, {"a": 2}), Histogram(1, {"b": 3})])
    with pytest.raises(ValueError):
        hs.total


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_incremental_build_matches_scratch(seed):
    ds = random_dataset(random.Random(seed))
    incremental = HistogramSet.empty(ds.num_attributes)
    for rec in ds.records:
        for i, v in enumerate(rec):
            histogram_add(incremental[i], v)
    assert incremental == build_histograms(ds)
    for i, h in enumerate(incremental):
        assert len(h) == ds.domain_sizes[i]
        assert h.total == ds.n
        sizes = sorted(attribute_labeling(ds, i).sizes().tolist())
        assert sizes == sorted(h.counts.values())


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_attribute_labeling_ignores_other_columns(seed):
    rng = random.Random(seed)
    ds = random_dataset(rng, r_max=4)
    if ds.num_attributes < 2:
        return
    recs = [list(r) for r in ds.records]
    other = [r[1] for r in recs]
    rng.shuffle(other)
    for r, v in zip(recs, other):
        r[1] = v
    permuted = Dataset([tuple(r) for r in recs])
    assert attribute_labeling(ds, 0) == attribute_labeling(permuted, 0)


def test_histograms_of_requires_records():
    with pytest.raises(ValueError):
        histograms_of([])
    assert histograms_of(TABLE1[:2])[0].counts == {"M": 2}


def test_head_keeps_ground_truth():
    ds = Dataset(TABLE1, ground_truth=Labeling("xxyyzzxxyy"))
    sub = ds.head(4)
    assert sub.n == 4 and sub.ground_truth.labels.tolist() == [0, 0, 1, 1]
    assert np.array_equal(sub.codes, ds.codes[:4])
