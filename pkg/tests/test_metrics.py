import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lsec.errors import LengthMismatch
from lsec.metrics import UNMATCHED, acc, contingency, nmi, optimal_map
from oracles import best_matching


def test_contingency_examples():
    np.testing.assert_array_equal(contingency([0, 1], [0, 1]), np.eye(2))
    np.testing.assert_array_equal(contingency([0, 0], [0, 1]), [[1, 1]])


def test_contingency_marginals():
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, 5, 300), rng.integers(0, 4, 300)
    t = contingency(a, b)
    assert t.sum() == 300
    np.testing.assert_array_equal(t.sum(axis=1), np.bincount(a, minlength=t.shape[0]))
    np.testing.assert_array_equal(t.sum(axis=0), np.bincount(b, minlength=t.shape[1]))


def test_optimal_map_examples():
    np.testing.assert_array_equal(optimal_map(np.diag([3, 4, 5])), [0, 1, 2])
    np.testing.assert_array_equal(optimal_map([[0, 5], [5, 0]]), [1, 0])
    m = optimal_map([[5, 0], [0, 5], [1, 1]])
    assert m[2] == UNMATCHED


tables = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: arrays(np.int64, (r, c), elements=st.integers(0, 30))))


@given(tables)
def test_optimal_map_matches_enumeration(table):
    m = optimal_map(table)
    hit = m >= 0
    assert len(set(m[hit])) == hit.sum()
    assert table[np.nonzero(hit)[0], m[hit]].sum() == best_matching(table)


def test_acc_examples():
    y = np.array([0, 0, 1, 1, 2, 2])
    assert acc(y, y) == 1.0
    assert acc(np.array([2, 0, 1])[y], y) == 1.0
    assert acc([0, 1, 1], [0, 0, 1]) == pytest.approx(2 / 3, abs=1e-15)


def test_nmi_examples():
    y = np.array([0, 0, 1, 1, 2, 2])
    assert nmi(np.array([1, 2, 0])[y], y) == pytest.approx(1.0, abs=1e-12)
    assert nmi(np.zeros(6, int), y) == 0.0
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == 0.0
    assert nmi([0, 0, 0], [0, 0, 0]) == 1.0


def test_nmi_hand_value():
    pred, truth = [0, 0, 1, 1, 1], [0, 0, 0, 1, 1]
    p = np.array([[2, 0], [1, 2]]) / 5
    pa, pb = p.sum(1), p.sum(0)
    nz = p > 0
    mi = np.sum(p[nz] * np.log(p[nz] / np.outer(pa, pb)[nz]))
    hj = -np.sum(p[nz] * np.log(p[nz]))
    assert nmi(pred, truth) == pytest.approx(mi / hj, abs=1e-14)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        acc([0, 1], [0])
    with pytest.raises(LengthMismatch):
        nmi([0, 1], [0, 1, 1])


labels = st.integers(2, 200).flatmap(
    lambda n: st.tuples(arrays(np.int64, n, elements=st.integers(0, 5)),
                        arrays(np.int64, n, elements=st.integers(0, 5))))


@given(labels)
def test_metric_properties(pair):
    a, b = pair
    for f in (acc, nmi):
        v = f(a, b)
        assert 0.0 <= v <= 1.0
    assert abs(nmi(a, b) - nmi(b, a)) <= 1e-12
    perm = np.array([3, 5, 0, 1, 4, 2])
    assert acc(perm[a], b) == pytest.approx(acc(a, b), abs=1e-12)
    assert nmi(perm[a], b) == pytest.approx(nmi(a, b), abs=1e-12)
    assert acc(a, b) >= contingency(a, b).max() / a.size
