"""Spectrum of the normalized adjacency and its first-order response to edge flips."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .graph import DegreeProfile, Flip, Graph, GraphError, apply_flip, normalized_adjacency


class SpectralError(ArithmeticError):
    """Eigensolver failure."""


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenpairs of ``D^{-1/2} A D^{-1/2}`` in descending eigenvalue order.

    ``vectors[:, i]`` is the unit eigenvector for ``values[i]`` and
    ``gen_vectors[:, i] = D^{-1/2} vectors[:, i]`` solves ``A w = lambda D w``
    with ``w^T D w = 1``.
    """

    values: np.ndarray
    vectors: np.ndarray
    gen_vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.values.size


def decompose(graph: Graph) -> EigenSystem:
    A_hat = normalized_adjacency(graph)
    try:
        vals, vecs = scipy.linalg.eigh(A_hat, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SpectralError(f"eigendecomposition did not converge: {exc}") from exc
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    gen = vecs / np.sqrt(graph.degrees)[:, None]
    for a in (vals, vecs, gen):
        a.setflags(write=False)
    return EigenSystem(vals, vecs, gen)


def first_order_shift(values: np.ndarray, gen_vectors: np.ndarray, u: int, v, weight) -> np.ndarray:
    """First-order change of every generalized eigenvalue for weighted flips.

    The flip toggles ``A[u, v]`` and ``A[v, u]`` by ``weight`` and moves the
    degrees of ``u`` and ``v`` by the same amount. ``v`` and ``weight`` may be
    arrays of equal length, in which case one row per flip is returned.
    """
    wu = gen_vectors[u]
    wv = gen_vectors[v]
    weight = np.asarray(weight, dtype=float)
    if wv.ndim == 1:
        return weight * (2.0 * wu * wv - values * (wu * wu + wv * wv))
    return weight[:, None] * (2.0 * wu[None, :] * wv - values[None, :] * (wu * wu + wv * wv))


@dataclass(frozen=True, eq=False)
class PerturbedSpectrum:
    values: np.ndarray


def _check_not_isolating(deg: np.ndarray, flip: Flip) -> None:
    if flip.sign < 0 and (deg[flip.u] <= 1 or deg[flip.v] <= 1):
        end = flip.u if deg[flip.u] <= 1 else flip.v
        raise GraphError(f"deleting ({flip.u}, {flip.v}) would isolate vertex {end}")


def estimate_perturbed_eigenvalues(
    eig: EigenSystem, deg: DegreeProfile, flip: Flip, scale: float = 1.0
) -> PerturbedSpectrum:
    """Approximate spectrum of the normalized adjacency after ``flip``.

    ``scale`` multiplies the perturbation; values other than 1 do not
    correspond to a real graph and exist for convergence checks.
    """
    _check_not_isolating(deg.degrees, flip)
    est = eig.values + first_order_shift(eig.values, eig.gen_vectors, flip.u, flip.v, flip.sign * scale)
    est = np.sort(np.clip(est, -1.0, 1.0))[::-1]
    return PerturbedSpectrum(est)


def exact_perturbed_spectrum(graph: Graph, flip: Flip) -> PerturbedSpectrum:
    """Recompute the spectrum from scratch on the flipped graph."""
    flipped = apply_flip(graph, flip)
    vals = scipy.linalg.eigvalsh(normalized_adjacency(flipped), check_finite=False)
    return PerturbedSpectrum(vals[::-1].copy())


def tail_feature_energy(eig: EigenSystem, X: np.ndarray, tail: int) -> float:
    """Sum of ``||u_i^T X||^2`` over the ``tail`` eigenvectors with smallest eigenvalues."""
    if not 1 <= tail <= eig.n:
        raise ValueError(f"tail must lie in [1, {eig.n}], got {tail}")
    proj = eig.vectors[:, eig.n - tail:].T @ np.asarray(X, dtype=float)
    return float(np.sum(proj * proj))
