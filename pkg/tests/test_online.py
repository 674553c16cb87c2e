import numpy as np
import pytest

from streamlabel import (Activation, ElmParams, OselmState,
                         SingularMatrixError, batch_train, hidden_map,
                         init_params, init_phase, update_chunk, update_sample)


def _stream(seed, n=200, d=8, m=5):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(n, d))
    Y = np.where(rng.integers(0, 2, size=(n, m)) == 1, 1.0, -1.0)
    return X, Y


def test_init_phase_zero_targets():
    p = init_params(8, 10, seed=0)
    X, _ = _stream(1, n=50)
    st = init_phase(p, X, np.zeros((50, 3)))
    assert np.allclose(st.beta, 0.0, atol=1e-12)
    H = hidden_map(p, X)
    assert np.max(np.abs(st.M - np.linalg.inv(H.T @ H))) <= 1e-8
    assert st.samples_seen == 50


def test_init_phase_matches_batch():
    p = init_params(8, 10, seed=2)
    X, Y = _stream(3, n=50)
    st = init_phase(p, X, Y)
    beta = batch_train(p, X, Y)
    assert np.max(np.abs(st.beta - beta)) <= 1e-10


def test_init_phase_rank_deficient_guard():
    p = init_params(8, 10, seed=4)
    X, Y = _stream(5, n=5)
    with pytest.raises(SingularMatrixError, match="initial block"):
        init_phase(p, X, Y)


def test_init_phase_ridge_recovers():
    p = init_params(8, 10, seed=4)
    X, Y = _stream(5, n=5)
    st = init_phase(p, X, Y, ridge=1e-3)
    assert np.all(np.isfinite(st.beta))
    assert st.ridge_used == 1e-3


def test_init_phase_rejects_negative_ridge():
    p = init_params(8, 10, seed=4)
    X, Y = _stream(5, n=50)
    with pytest.raises(ValueError):
        init_phase(p, X, Y, ridge=-1.0)


def test_update_sample_by_hand():
    # constant-0.5 hidden feature: with M=[[1]] and beta=[[0]],
    #   denom = 1 + 0.25 = 1.25, M' = 1 - 0.25/1.25 = 0.8
    #   beta' = 0.8 * 0.5 * (1 - 0) = 0.4
    p = ElmParams(W=np.zeros((1, 1)), b=np.zeros(1),
                  activation=Activation.SIGMOID, n_features=1, n_hidden=1)
    st = OselmState(beta=np.zeros((1, 1)), M=np.ones((1, 1)),
                    samples_seen=1, ridge_used=0.0)
    update_sample(st, p, np.array([0.0]), np.array([1.0]))
    assert abs(st.M[0, 0] - 0.8) <= 1e-15
    assert abs(st.beta[0, 0] - 0.4) <= 1e-15
    assert st.samples_seen == 2


def test_update_sample_zero_innovation():
    p = init_params(4, 6, seed=6)
    X, Y = _stream(7, n=40, d=4, m=3)
    st = init_phase(p, X[:30], Y[:30])
    x = X[30]
    h = hidden_map(p, x[None, :])[0]
    y = h @ st.beta  # target chosen so the residual is exactly zero
    before = st.beta.copy()
    update_sample(st, p, x, y)
    assert np.array_equal(st.beta, before)
    assert st.samples_seen == 31


def test_sequential_matches_batch():
    p = init_params(8, 10, seed=8)
    X, Y = _stream(9)
    st = init_phase(p, X[:50], Y[:50])
    for i in range(50, 200):
        update_sample(st, p, X[i], Y[i])
    beta = batch_train(p, X, Y)
    rel = np.linalg.norm(st.beta - beta) / np.linalg.norm(beta)
    assert rel <= 1e-6
    assert st.samples_seen == 200


def test_chunk_of_one_matches_sample_path():
    p = init_params(8, 10, seed=10)
    X, Y = _stream(11, n=90)
    a = init_phase(p, X[:50], Y[:50])
    b = init_phase(p, X[:50], Y[:50])
    for i in range(50, 90):
        update_sample(a, p, X[i], Y[i])
        update_chunk(b, p, X[i:i + 1], Y[i:i + 1])
    assert np.max(np.abs(a.beta - b.beta)) <= 1e-12
    assert np.max(np.abs(a.M - b.M)) <= 1e-12
    assert a.samples_seen == b.samples_seen == 90


def test_partition_invariance():
    p = init_params(8, 10, seed=12)
    X, Y = _stream(13)
    per_sample = init_phase(p, X[:50], Y[:50])
    for i in range(50, 200):
        update_sample(per_sample, p, X[i], Y[i])
    chunked = init_phase(p, X[:50], Y[:50])
    i = 50
    for c in (1, 7, 32):
        update_chunk(chunked, p, X[i:i + c], Y[i:i + c])
        i += c
    update_chunk(chunked, p, X[i:], Y[i:])  # remainder
    rel = (np.linalg.norm(chunked.beta - per_sample.beta)
           / np.linalg.norm(per_sample.beta))
    assert rel <= 1e-6
    assert chunked.samples_seen == 200


def test_chunk_zero_innovation():
    p = init_params(8, 10, seed=14)
    X, Y = _stream(15, n=80)
    st = init_phase(p, X, Y)
    Xc, _ = _stream(16, n=7)
    Yc = hidden_map(p, Xc) @ st.beta
    before = st.beta.copy()
    update_chunk(st, p, Xc, Yc)
    assert np.max(np.abs(st.beta - before)) <= 1e-10


def test_m_stays_symmetric():
    p = init_params(8, 10, seed=17)
    X, Y = _stream(18)
    st = init_phase(p, X[:50], Y[:50])
    assert np.array_equal(st.M, st.M.T)
    i = 50
    for c in (1, 3, 9, 27, 81):
        c = min(c, 200 - i)
        update_chunk(st, p, X[i:i + c], Y[i:i + c])
        assert np.array_equal(st.M, st.M.T)
        i += c


def test_samples_seen_accounting():
    p = init_params(8, 10, seed=19)
    X, Y = _stream(20)
    st = init_phase(p, X[:60], Y[:60])
    update_chunk(st, p, X[60:75], Y[60:75])
    update_sample(st, p, X[75], Y[75])
    update_chunk(st, p, X[76:100], Y[76:100])
    assert st.samples_seen == 100


def test_update_dimension_checks():
    p = init_params(8, 10, seed=21)
    X, Y = _stream(22, n=60)
    st = init_phase(p, X[:50], Y[:50])
    with pytest.raises(ValueError):
        update_sample(st, p, np.ones(3), Y[50])
    with pytest.raises(ValueError):
        update_sample(st, p, X[50], np.ones(2))
    with pytest.raises(ValueError):
        update_chunk(st, p, X[50:55], Y[50:54])


def test_init_phase_target_shape_check():
    p = init_params(8, 10, seed=23)
    X, Y = _stream(24, n=50)
    with pytest.raises(ValueError):
        init_phase(p, X, Y[:40])
