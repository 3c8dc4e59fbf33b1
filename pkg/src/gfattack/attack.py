"""Graph-filter attack: spectral scoring of edge flips around a target vertex.

Two losses are available. ``sym`` targets filters built on ``A_hat + I``
(SGC/GCN style); ``rw`` targets random-walk window filters (DeepWalk/LINE).
Both multiply an eigenvalue factor, evaluated on the estimated spectrum of the
flipped graph, by the feature energy carried by the clean graph's tail
eigenvectors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .graph import DegreeProfile, Flip, Graph, GraphError, apply_flips, degree_profile
from .spectral import EigenSystem, decompose, first_order_shift, tail_feature_energy

log = logging.getLogger(__name__)

LossFamily = Literal["sym", "rw"]

# rows of the (candidates x n) estimate matrix processed at once
_CHUNK = 512


class AttackError(GraphError):
    pass


@dataclass(frozen=True)
class AttackConfig:
    loss_family: LossFamily = "sym"
    K: int = 2
    tail: int = 128
    budget: int = 1
    negative_samples: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.loss_family not in ("sym", "rw"):
            raise ValueError(f"unknown loss family {self.loss_family!r}")
        for name in ("K", "tail", "budget", "negative_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")

    def effective_tail(self, n: int) -> int:
        return max(1, min(self.tail, n - 1))


@dataclass(frozen=True)
class ScoredFlip:
    flip: Flip
    score: float


@dataclass(frozen=True, eq=False)
class AttackResult:
    target: int
    selected: list
    scores: list
    perturbed_graph: Graph = field(repr=False)


# -- eigenvalue factors ------------------------------------------------------


def sym_eigen_factor(tail_values, K: int) -> np.ndarray:
    """``sum_i (lambda_i + 1)^(2K)`` over the last axis."""
    lam = np.asarray(tail_values, dtype=float)
    return np.sum((lam + 1.0) ** (2 * K), axis=-1)


def window_average(lam, K: int) -> np.ndarray:
    """``(1/K) sum_{k=1..K} lambda^k`` elementwise."""
    lam = np.asarray(lam, dtype=float)
    acc = np.zeros_like(lam)
    power = np.ones_like(lam)
    for _ in range(K):
        power = power * lam
        acc = acc + power
    return acc / K


def rw_eigen_factor(tail_values, K: int, d_min: float = 1.0) -> np.ndarray:
    """``sum_i ((1/d_min) |window_average(lambda_i)|)^2`` over the last axis."""
    g = np.abs(window_average(tail_values, K)) / d_min
    return np.sum(g * g, axis=-1)


def satisfies_window_bound(tail_values, K: int) -> bool:
    """Whether window size ``K`` meets the order-free condition of the rw loss.

    The condition is ``K >= sqrt(len / min_{K' < K} f(K')) / (1 + lam_min)``
    with ``f(K) = sum_i window_average(lam_i, K)^2`` and ``lam_min`` the
    smallest tail eigenvalue that is not -1. Every value must lie in [-1, 0).
    When it holds, ``f(K) <= f(K')`` for all ``K' < K``.
    """
    lam = np.asarray(tail_values, dtype=float)
    if K < 2 or lam.size == 0 or lam.min() < -1 or lam.max() >= 0:
        return False
    rest = lam[lam != -1.0]
    if rest.size == 0:
        return False
    # f(k) for k = 1..K-1 from running power sums
    power = np.ones_like(lam)
    acc = np.zeros_like(lam)
    best = np.inf
    for k in range(1, K):
        power = power * lam
        acc = acc + power
        best = min(best, float(np.sum((acc / k) ** 2)))
    if best <= 0:
        return False
    return K >= np.sqrt(lam.size / best) / (1.0 + rest.min())


def low_rank_residual(tail_values, tail_vectors, X) -> float:
    """``|| sum_i lambda_i u_i u_i^T X ||_F^2`` for the given tail eigenpairs."""
    U = np.asarray(tail_vectors, dtype=float)
    M = (U * np.asarray(tail_values, dtype=float)) @ (U.T @ np.asarray(X, dtype=float))
    return float(np.sum(M * M))


def residual_upper_bound(tail_values, tail_vectors, X) -> float:
    """``sum_i lambda_i^2 * sum_i ||u_i^T X||^2``, the bound the attack maximizes."""
    lam = np.asarray(tail_values, dtype=float)
    proj = np.asarray(tail_vectors, dtype=float).T @ np.asarray(X, dtype=float)
    return float(np.sum(lam * lam) * np.sum(proj * proj))


# -- candidates and scoring ----------------------------------------------------


def enumerate_candidates(graph: Graph, target: int) -> list[Flip]:
    """All flips ``(v, target)`` that leave every vertex with degree >= 1."""
    if not 0 <= target < graph.n:
        raise AttackError(f"target {target} out of range for n={graph.n}")
    deg = graph.degrees
    out = []
    for v in range(graph.n):
        if v == target:
            continue
        if graph.has_edge(v, target):
            if deg[v] <= 1 or deg[target] <= 1:
                continue
            out.append(Flip(v, target, -1))
        else:
            out.append(Flip(v, target, 1))
    return out


def cached_energy(eig: EigenSystem, X, tail: int) -> float:
    """Tail feature energy, memoized on the eigensystem per (X, tail)."""
    cache = eig.__dict__.setdefault("_energy_cache", {})
    key = (id(X), tail)
    hit = cache.get(key)
    if hit is not None and hit[0] is X:
        return hit[1]
    energy = tail_feature_energy(eig, X, tail)
    cache[key] = (X, energy)
    return energy


def _tail_of_estimates(eig: EigenSystem, target: int, others: np.ndarray, signs: np.ndarray, tail: int):
    """Smallest ``tail`` clamped estimated eigenvalues for each flip (unordered within row)."""
    est = eig.values[None, :] + first_order_shift(eig.values, eig.gen_vectors, target, others, signs)
    np.clip(est, -1.0, 1.0, out=est)
    if tail < est.shape[1]:
        est = np.partition(est, tail - 1, axis=1)[:, :tail]
    return est


def _factor(tail_vals: np.ndarray, cfg: AttackConfig, d_min: float) -> np.ndarray:
    if cfg.loss_family == "sym":
        return sym_eigen_factor(tail_vals, cfg.K)
    return rw_eigen_factor(tail_vals, cfg.K, d_min)


def score_candidates(
    eig: EigenSystem, deg: DegreeProfile, X, target: int, flips: list[Flip], cfg: AttackConfig
) -> np.ndarray:
    """Scores for flips that all touch ``target``; one entry per flip."""
    tail = cfg.effective_tail(eig.n)
    energy = cached_energy(eig, X, tail)
    others = np.array([f.other(target) for f in flips], dtype=np.int64)
    signs = np.array([f.sign for f in flips], dtype=float)
    scores = np.empty(len(flips))
    for lo in range(0, len(flips), _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        tv = _tail_of_estimates(eig, target, others[sl], signs[sl], tail)
        scores[sl] = _factor(tv, cfg, deg.d_min) * energy
    return scores


def _score_single(eig, deg, X, flip: Flip, cfg: AttackConfig, family: str) -> float:
    if cfg.loss_family != family:
        raise ValueError(f"config loss family is {cfg.loss_family!r}, expected {family!r}")
    d = deg.degrees
    if flip.sign < 0 and (d[flip.u] <= 1 or d[flip.v] <= 1):
        raise AttackError(f"flip ({flip.u}, {flip.v}) would isolate a vertex")
    return float(score_candidates(eig, deg, X, flip.v, [flip], cfg)[0])


def score_flip_sym(eig: EigenSystem, deg: DegreeProfile, X, flip: Flip, cfg: AttackConfig) -> float:
    return _score_single(eig, deg, X, flip, cfg, "sym")


def score_flip_rw(eig: EigenSystem, deg: DegreeProfile, X, flip: Flip, cfg: AttackConfig) -> float:
    return _score_single(eig, deg, X, flip, cfg, "rw")


def _top(flips: list[Flip], scores: np.ndarray, target: int, budget: int) -> list[int]:
    if not flips:
        raise AttackError(f"no valid candidate flips for target {target}")
    if budget > len(flips):
        raise AttackError(f"budget {budget} exceeds {len(flips)} candidates for target {target}")
    others = np.array([f.other(target) for f in flips])
    order = np.lexsort((others, -scores))
    return [int(i) for i in order[:budget]]


def _result(graph: Graph, target: int, flips, scores, picked) -> AttackResult:
    selected = [flips[i] for i in picked]
    return AttackResult(
        target=target,
        selected=selected,
        scores=[float(scores[i]) for i in picked],
        perturbed_graph=apply_flips(graph, selected),
    )


def gf_attack(
    graph: Graph,
    target: int,
    cfg: AttackConfig,
    eig: Optional[EigenSystem] = None,
    deg: Optional[DegreeProfile] = None,
) -> AttackResult:
    """Score every candidate flip once and apply the top ``cfg.budget`` together.

    ``eig`` and ``deg`` may be passed in to reuse a clean-graph decomposition
    across targets.
    """
    if graph.X is None:
        raise AttackError("graph has no feature matrix")
    flips = enumerate_candidates(graph, target)
    if not flips:
        raise AttackError(f"no valid candidate flips for target {target}")
    eig = decompose(graph) if eig is None else eig
    deg = degree_profile(graph) if deg is None else deg
    scores = score_candidates(eig, deg, graph.X, target, flips, cfg)
    bad = ~np.isfinite(scores)
    if bad.any():
        log.warning("skipping %d candidates with non-finite scores for target %d", int(bad.sum()), target)
        keep = np.flatnonzero(~bad)
        flips = [flips[i] for i in keep]
        scores = scores[keep]
    picked = _top(flips, scores, target, cfg.budget)
    return _result(graph, target, flips, scores, picked)


def baseline_random(graph: Graph, target: int, budget: int, seed: int) -> AttackResult:
    """Uniformly sampled flips, without replacement."""
    flips = enumerate_candidates(graph, target)
    _top(flips, np.zeros(len(flips)), target, budget)
    rng = np.random.default_rng(seed)
    picked = [int(i) for i in rng.choice(len(flips), size=budget, replace=False)]
    return _result(graph, target, flips, np.zeros(len(flips)), picked)


def baseline_degree(graph: Graph, target: int, budget: int) -> AttackResult:
    """Flips ranked by the clean-graph degree sum ``d_v + d_target``."""
    flips = enumerate_candidates(graph, target)
    deg = graph.degrees
    scores = np.array([deg[f.other(target)] + deg[target] for f in flips], dtype=float)
    picked = _top(flips, scores, target, budget)
    return _result(graph, target, flips, scores, picked)
