import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpcrank import fixtures
from rpcrank.baselines import median_rank_aggregation, pca_first_component, pca_scores
from rpcrank.dataset import Dataset, OrientationVector, attribute_rank_lists, normalize
from rpcrank.fit import fit

from oracles import symmetric_eigenvalues


def test_pca_perfect_line():
    m = pca_first_component(np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert np.allclose(m.w, np.ones(2) / np.sqrt(2), atol=1e-10)
    assert np.allclose(m.mu, [0.5, 0.5])
    assert abs(np.linalg.norm(m.w) - 1) < 1e-10


def test_pca_orientation_follows_alpha():
    X = np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
    m = pca_first_component(X, OrientationVector((1, -1)))
    assert m.w @ np.array([1, -1]) >= 0
    m = pca_first_component(X, OrientationVector((-1, 1)))
    assert m.w @ np.array([-1, 1]) >= 0
    # without alpha the first nonzero loading is positive
    assert pca_first_component(X).w[0] > 0


def test_pca_tie_falls_back_to_first_loading():
    X = np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
    m = pca_first_component(X, OrientationVector((1, 1)))
    assert abs(m.w @ np.ones(2)) < 1e-12 and m.w[0] > 0


def test_pca_matches_eigen_oracle(rng):
    X = rng.uniform(size=(50, 4)) * [1.0, 0.6, 0.3, 0.1]
    m = pca_first_component(X)
    C = np.cov(X.T)
    lam = symmetric_eigenvalues(C)[-1]
    _, _, vt = np.linalg.svd(C - lam * np.eye(4))
    u = vt[-1]
    assert min(np.linalg.norm(m.w - u), np.linalg.norm(m.w + u)) < 1e-6


def test_pca_errors():
    with pytest.raises(ValueError):
        pca_first_component(np.array([[0.1, 0.2]]))
    with pytest.raises(ValueError):
        pca_first_component(np.full((3, 2), 0.4))


def test_pca_scores_examples(rng):
    X = rng.uniform(size=(20, 3))
    m = pca_first_component(X)
    assert abs(pca_scores(m, m.mu[None, :])[0]) < 1e-15
    naive = np.array([sum(m.w[j] * (x[j] - m.mu[j]) for j in range(3)) for x in X])
    assert np.allclose(pca_scores(m, X), naive, atol=1e-12)
    # on-line data: scores are signed distances along the line
    t = np.linspace(-1, 1, 7)
    L = 0.5 + np.outer(t, [0.6, 0.8])
    mL = pca_first_component(L)
    assert np.allclose(pca_scores(mL, L), t - t.mean(), atol=1e-9)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_pca_translation_keeps_order(seed):
    r = np.random.default_rng(seed)
    X = r.uniform(size=(15, 3))
    shift = r.uniform(-5, 5, 3)
    a = OrientationVector((1, 1, 1))
    s1 = pca_scores(pca_first_component(X, a), X)
    s2 = pca_scores(pca_first_component(X + shift, a), X + shift)
    assert np.allclose(s1, s2, atol=1e-9)
    assert np.array_equal(np.argsort(s1, kind="stable"), np.argsort(s2, kind="stable"))


@pytest.mark.parametrize("variant", ["a", "b"])
def test_rankagg_trio(variant):
    nds = normalize(fixtures.trio(variant))
    lists = attribute_rank_lists(nds, OrientationVector((1, 1)))
    assert [x.tolist() for x in lists] == [[2, 1, 3], [1, 2, 3]]
    assert median_rank_aggregation(lists).tolist() == [1.5, 1.5, 3.0]


def test_rankagg_single_list_and_errors():
    assert median_rank_aggregation([[3, 1, 2]]).tolist() == [3, 1, 2]
    with pytest.raises(ValueError):
        median_rank_aggregation([])
    with pytest.raises(ValueError):
        median_rank_aggregation([[1, 2], [1, 2, 3]])


def test_rankagg_permutation_invariant(rng):
    lists = [rng.permutation(6) + 1 for _ in range(4)]
    ref = median_rank_aggregation(lists)
    for perm in itertools.permutations(lists):
        assert np.array_equal(median_rank_aggregation(list(perm)), ref)


def test_line_data_pca_and_rpc_agree():
    syn = fixtures.line()
    nds = normalize(syn.dataset)
    pca = pca_scores(pca_first_component(nds, syn.alpha), nds)
    _, s, _ = fit(nds, syn.alpha)
    assert np.array_equal(np.argsort(pca), np.argsort(s))
    assert np.array_equal(np.argsort(s), np.argsort(syn.true_s))
