"""Online sequential training of the output weights by recursive least squares.

An initial block of samples is solved in one shot, after which arriving
samples (or chunks of samples) update the output weights and the inverse
Gram matrix M in place. For any chunking of the stream, the final weights
match a batch least-squares fit over all samples seen, up to rounding.
"""

from dataclasses import dataclass

import numpy as np

from .elm import ElmParams, hidden_map
from .numerics import SingularMatrixError, solve_spd


@dataclass
class OselmState:
    """Mutable sequential-training state.

    beta is (n_hidden, n_labels), M is the (n_hidden, n_hidden) inverse of
    the accumulated hidden-feature Gram matrix. M stays symmetric; the
    update functions re-symmetrize it to damp floating-point drift.
    Single-writer: never update one state from two threads.
    """

    beta: np.ndarray
    M: np.ndarray
    samples_seen: int
    ridge_used: float


def init_phase(params: ElmParams, X0, Y0_bip, ridge: float = 0.0) -> OselmState:
    """Solve the initial block: M = (H0'H0 + ridge*I)^-1, beta = M H0' Y0.

    With ridge 0 the block must make H0'H0 invertible, which in practice
    means at least n_hidden samples.
    """
    Y0 = np.asarray(Y0_bip, dtype=np.float64)
    H0 = hidden_map(params, X0)
    if Y0.ndim != 2 or Y0.shape[0] != H0.shape[0]:
        raise ValueError(
            f"target shape {Y0.shape} does not match {H0.shape[0]} samples")
    gram = H0.T @ H0
    # the matrix product is symmetric only up to roundoff; enforce it
    gram = 0.5 * (gram + gram.T)
    if ridge > 0.0:
        gram = gram + ridge * np.eye(params.n_hidden)
    elif ridge < 0.0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    try:
        M = solve_spd(gram, np.eye(params.n_hidden))
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"init_phase: initial Gram matrix is singular (pivot {err.pivot}); "
            f"use a larger initial block (>= {params.n_hidden} samples) "
            "or a positive ridge",
            pivot=err.pivot) from err
    M = 0.5 * (M + M.T)
    beta = M @ (H0.T @ Y0)
    return OselmState(beta=beta, M=M, samples_seen=H0.shape[0],
                      ridge_used=float(ridge))


def update_sample(state: OselmState, params: ElmParams, x, y_bip) -> OselmState:
    """Rank-one update for one sample; mutates and returns the state.

    With h the hidden-feature row for x:
        M' = M - (M h h' M) / (1 + h' M h)
        beta' = beta + M' h (y' - h' beta)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y_bip, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != params.n_features:
        raise ValueError(
            f"x must be a vector of {params.n_features} features, "
            f"got shape {x.shape}")
    if y.ndim != 1 or y.shape[0] != state.beta.shape[1]:
        raise ValueError(
            f"y must be a vector of {state.beta.shape[1]} labels, "
            f"got shape {y.shape}")
    h = hidden_map(params, x[None, :])[0]
    Mh = state.M @ h
    denom = 1.0 + float(h @ Mh)
    if not np.isfinite(denom) or denom <= 0.0:
        raise ValueError(f"update_sample: invalid gain denominator {denom}")
    M_new = state.M - np.outer(Mh, Mh) / denom
    M_new = 0.5 * (M_new + M_new.T)
    residual = y - h @ state.beta
    state.beta = state.beta + np.outer(M_new @ h, residual)
    state.M = M_new
    state.samples_seen += 1
    return state


def update_chunk(state: OselmState, params: ElmParams, Xc, Yc_bip) -> OselmState:
    """Block update for a chunk of samples; mutates and returns the state.

    Uses the matrix-inversion-lemma form
        M' = M - M Hc' (I + Hc M Hc')^-1 Hc M
        beta' = beta + M' Hc' (Yc - Hc beta)
    which reduces to the rank-one update when the chunk has one sample.
    """
    Yc = np.asarray(Yc_bip, dtype=np.float64)
    Hc = hidden_map(params, Xc)
    c = Hc.shape[0]
    if Yc.ndim != 2 or Yc.shape[0] != c or Yc.shape[1] != state.beta.shape[1]:
        raise ValueError(
            f"chunk target shape {Yc.shape} does not match "
            f"({c}, {state.beta.shape[1]})")
    T = Hc @ state.M
    K = np.eye(c) + T @ Hc.T
    # Hc M Hc' is symmetric only up to roundoff; enforce it before factoring
    K = 0.5 * (K + K.T)
    try:
        S = solve_spd(K, T)
    except SingularMatrixError as err:
        raise SingularMatrixError(
            f"update_chunk: gain matrix is singular (pivot {err.pivot})",
            pivot=err.pivot) from err
    M_new = state.M - T.T @ S
    M_new = 0.5 * (M_new + M_new.T)
    residual = Yc - Hc @ state.beta
    state.beta = state.beta + M_new @ (Hc.T @ residual)
    state.M = M_new
    state.samples_seen += c
    return state
