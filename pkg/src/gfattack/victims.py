"""Victim embedding models and the downstream linear classifier.

SGC embeddings are ``(A_hat + I)^K X``. DeepWalk and LINE are represented by
the closed-form matrix they implicitly factorize, truncated by SVD.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .graph import Graph, GraphError, degree_profile, normalized_adjacency


@dataclass(frozen=True, eq=False)
class NetMFMatrix:
    M: np.ndarray
    K: int
    b: float


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    """Multinomial logistic regression on standardized embeddings."""

    W: np.ndarray
    bias: np.ndarray
    l2: float
    mean: np.ndarray
    scale: np.ndarray

    @property
    def num_classes(self) -> int:
        return self.bias.size

    def logits(self, Z) -> np.ndarray:
        return ((np.asarray(Z, dtype=float) - self.mean) / self.scale) @ self.W + self.bias

    def predict(self, Z) -> np.ndarray:
        # argmax returns the first maximum, i.e. the smallest class id on ties
        return np.argmax(self.logits(Z), axis=1)


def sgc_embed(graph: Graph, K: int) -> np.ndarray:
    if graph.X is None:
        raise GraphError("graph has no feature matrix")
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    A_hat = normalized_adjacency(graph)
    Z = np.array(graph.X, dtype=float)
    for _ in range(K):
        Z = A_hat @ Z + Z
    return Z


def netmf_matrix(graph: Graph, K: int, b: float = 1.0) -> NetMFMatrix:
    """``log(max(1, vol/(bK) * sum_{k=1..K} (D^-1 A)^k D^-1))`` computed densely."""
    if K < 1 or b < 1:
        raise ValueError(f"need K >= 1 and b >= 1, got K={K}, b={b}")
    prof = degree_profile(graph)
    if prof.d_min < 1:
        raise GraphError(f"vertex {int(np.argmin(prof.degrees))} has degree zero")
    # (D^-1 A)^k D^-1 = D^-1/2 A_hat^k D^-1/2, which keeps every term symmetric
    A_hat = normalized_adjacency(graph)
    s = 1.0 / np.sqrt(prof.degrees.astype(float))
    P = np.eye(graph.n)
    S = np.zeros((graph.n, graph.n))
    for _ in range(K):
        P = P @ A_hat
        S += P
    S = (S + S.T) / 2.0
    inner = (prof.volume / (b * K)) * (s[:, None] * S * s[None, :])
    return NetMFMatrix(np.log(np.maximum(inner, 1.0)), K, b)


def truncated_svd(M: np.ndarray, d: int):
    """Top-``d`` singular triplets with a deterministic sign per component.

    Each left singular vector is flipped so its largest-magnitude entry is
    positive; the matching right vector is flipped with it.
    """
    n = min(M.shape)
    if not 1 <= d <= n:
        raise ValueError(f"rank must lie in [1, {n}], got {d}")
    U, sigma, Vt = scipy.linalg.svd(M, full_matrices=False, check_finite=False)
    U, sigma, Vt = U[:, :d], sigma[:d], Vt[:d]
    pivot = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[pivot, np.arange(d)])
    signs[signs == 0] = 1.0
    return U * signs, sigma, Vt * signs[:, None]


def netmf_embed(M: NetMFMatrix, d: int = 32) -> np.ndarray:
    """Rank-``d`` factor ``U_d diag(sigma_d)^{1/2}`` of the NetMF matrix."""
    U, sigma, _ = truncated_svd(M.M, d)
    return U * np.sqrt(sigma)


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def logistic_loss_and_grad(W, bias, Z, Y, l2):
    """Mean cross-entropy plus ``l2/2 ||W||^2`` and its gradient.

    ``Y`` is one-hot with shape (samples, classes).
    """
    P = _softmax(Z @ W + bias)
    m = Z.shape[0]
    loss = -np.sum(Y * np.log(np.clip(P, 1e-300, None))) / m + 0.5 * l2 * np.sum(W * W)
    G = (P - Y) / m
    return loss, Z.T @ G + l2 * W, G.sum(axis=0)


def train_logistic(
    Z,
    labels,
    train_idx,
    l2: float = 1e-4,
    seed: int = 0,
    iterations: int = 500,
    lr: float = 0.5,
    num_classes: int | None = None,
) -> ClassifierModel:
    """Full-batch gradient descent from a zero initialization.

    Columns are z-scored with statistics of the training rows. ``seed`` is
    accepted for interface symmetry; the procedure itself is deterministic.
    """
    del seed
    Z = np.asarray(Z, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    train_idx = np.asarray(train_idx, dtype=np.int64)
    if train_idx.size == 0:
        raise ValueError("training index set is empty")
    y = labels[train_idx]
    if np.unique(y).size < 2:
        raise ValueError("training set contains a single class")
    c = int(labels.max()) + 1 if num_classes is None else num_classes
    Zt = Z[train_idx]
    mean = Zt.mean(axis=0)
    scale = Zt.std(axis=0)
    scale[scale < 1e-12] = 1.0
    Zs = (Zt - mean) / scale
    Y = np.eye(c)[y]
    W = np.zeros((Z.shape[1], c))
    bias = np.zeros(c)
    for _ in range(iterations):
        _, gW, gb = logistic_loss_and_grad(W, bias, Zs, Y, l2)
        W -= lr * gW
        bias -= lr * gb
    return ClassifierModel(W, bias, l2, mean, scale)


def evaluate_accuracy(model: ClassifierModel, Z, labels, idx) -> float:
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("evaluation index set is empty")
    pred = model.predict(np.asarray(Z, dtype=float)[idx])
    return float(np.mean(pred == np.asarray(labels)[idx]))
