"""Experiment runner: splits, victim training, per-target attacks and reports."""

from __future__ import annotations

import hashlib
import json
import statistics
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import attack as atk
from .graph import (
    Graph,
    degree_profile,
    largest_connected_component,
    load_edge_list,
    load_features,
    load_labels,
)
from .spectral import decompose
from .victims import ClassifierModel, netmf_embed, netmf_matrix, sgc_embed, train_logistic

VICTIMS = ("sgc", "netmf_deepwalk", "netmf_line")
ATTACKS = ("gf_sym", "gf_rw", "random", "degree")
MODES = ("evasion", "poisoning")
DEFAULT_VICTIM_ORDER = {"sgc": 2, "netmf_deepwalk": 5, "netmf_line": 1}


class ConfigError(ValueError):
    pass


def _norm(name: str) -> str:
    return name.replace("-", "_")


@dataclass(frozen=True)
class ExperimentConfig:
    edges: Optional[str] = None
    features: Optional[str] = None
    labels: Optional[str] = None
    victim: str = "sgc"
    victim_order: Optional[int] = None
    dim: int = 32
    negatives: int = 1
    attack: str = "gf_sym"
    order: int = 2
    tail: int = 128
    budget: int = 1
    mode: str = "evasion"
    num_targets: int = 40
    seed: int = 0
    attack_seed: Optional[int] = None
    out: Optional[str] = None
    l2: float = 1e-4
    iterations: int = 500
    lr: float = 0.5

    def __post_init__(self):
        for name in ("victim", "attack", "mode"):
            object.__setattr__(self, name, _norm(getattr(self, name)))
        if self.victim not in VICTIMS:
            raise ConfigError(f"unknown victim {self.victim!r}; choose from {VICTIMS}")
        if self.attack not in ATTACKS:
            raise ConfigError(f"unknown attack {self.attack!r}; choose from {ATTACKS}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.mode == "evasion" and self.victim != "sgc":
            raise ConfigError("sampling-based victims can only be attacked in poisoning mode")
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")
        if self.num_targets < 1:
            raise ConfigError(f"num_targets must be >= 1, got {self.num_targets}")
        if self.order < 1 or self.tail < 1 or self.dim < 1 or self.negatives < 1:
            raise ConfigError("order, tail, dim and negatives must all be >= 1")
        if self.victim_order is None:
            object.__setattr__(self, "victim_order", DEFAULT_VICTIM_ORDER[self.victim])

    def attack_config(self) -> atk.AttackConfig:
        family = "rw" if self.attack == "gf_rw" else "sym"
        return atk.AttackConfig(
            loss_family=family,
            K=self.order,
            tail=self.tail,
            budget=self.budget,
            negative_samples=self.negatives,
            seed=self.seed,
        )


@dataclass
class TargetRecord:
    target: int
    original_id: int
    clean_correct: bool
    attacked_correct: bool
    flips: list
    scores: list
    wall_time: Optional[float] = None


@dataclass
class ExperimentReport:
    config: dict
    num_vertices: int
    num_edges: int
    clean_test_accuracy: float
    clean_accuracy: float
    attacked_accuracy: float
    accuracy_drop: float
    clean_model_sha256: str
    records: list = field(default_factory=list)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = asdict(self)
        if not include_timing:
            for r in d["records"]:
                r.pop("wall_time", None)
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"

    def csv_row(self) -> str:
        c = self.config
        return ",".join(
            str(x)
            for x in (
                c["victim"], c["attack"], c["mode"], c["budget"], c["order"], c["seed"],
                len(self.records), self.clean_accuracy, self.attacked_accuracy, self.accuracy_drop,
            )
        )


CSV_HEADER = "victim,attack,mode,budget,order,seed,targets,clean_accuracy,attacked_accuracy,accuracy_drop"


def split_dataset(labels, seed: int):
    """Seeded 10% / 10% / 80% train / validation / test split."""
    n = len(labels)
    if n < 10:
        raise ValueError(f"need at least 10 vertices to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(round(0.1 * n))
    n_val = int(round(0.1 * n))
    train = np.sort(perm[:n_train])
    val = np.sort(perm[n_train:n_train + n_val])
    test = np.sort(perm[n_train + n_val:])
    return train, val, test


def load_graph(cfg: ExperimentConfig) -> Graph:
    if not cfg.edges or not cfg.labels:
        raise ConfigError("edge list and label file are required")
    g = load_edge_list(cfg.edges)
    if cfg.features:
        g = load_features(cfg.features, g)
    g = load_labels(cfg.labels, g)
    return largest_connected_component(g)


def embed(graph: Graph, cfg: ExperimentConfig) -> np.ndarray:
    if cfg.victim == "sgc":
        return sgc_embed(graph, cfg.victim_order)
    window = 1 if cfg.victim == "netmf_line" else cfg.victim_order
    M = netmf_matrix(graph, window, cfg.negatives)
    return netmf_embed(M, min(cfg.dim, graph.n))


def _fit(Z, graph: Graph, train_idx, cfg: ExperimentConfig) -> ClassifierModel:
    return train_logistic(
        Z, graph.labels, train_idx, l2=cfg.l2, seed=cfg.seed,
        iterations=cfg.iterations, lr=cfg.lr, num_classes=graph.num_classes,
    )


def model_digest(model: ClassifierModel) -> str:
    h = hashlib.sha256()
    for a in (model.W, model.bias, model.mean, model.scale):
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


def sample_targets(graph: Graph, test_idx, num_targets: int, seed: int) -> np.ndarray:
    pool = np.array([t for t in test_idx if graph.degrees[t] >= 1 and atk.enumerate_candidates(graph, int(t))])
    if pool.size == 0:
        raise ConfigError("no test vertex admits a valid flip")
    rng = np.random.default_rng([seed, 1])
    k = min(num_targets, pool.size)
    return np.sort(rng.choice(pool, size=k, replace=False))


def _target_seed(seed: int, target: int) -> int:
    return int(np.random.SeedSequence([seed, target]).generate_state(1)[0])


def _signal(graph: Graph, cfg: ExperimentConfig) -> Graph:
    # structure-only graphs are scored against X = I / b
    if graph.X is None:
        return graph.with_features(np.eye(graph.n) / cfg.negatives)
    return graph


class _AttackRunner:
    """Runs the configured attack from the clean graph, reusing its eigensystem."""

    def __init__(self, graph: Graph, cfg: ExperimentConfig):
        self.graph = _signal(graph, cfg)
        self.cfg = cfg
        self.acfg = cfg.attack_config()
        self._eig = None
        self._deg = None

    def __call__(self, target: int, fresh: bool = False) -> atk.AttackResult:
        cfg = self.cfg
        if cfg.attack in ("gf_sym", "gf_rw"):
            if fresh:
                return atk.gf_attack(self.graph, target, self.acfg)
            if self._eig is None:
                self._eig = decompose(self.graph)
                self._deg = degree_profile(self.graph)
            return atk.gf_attack(self.graph, target, self.acfg, self._eig, self._deg)
        if cfg.attack == "random":
            seed = cfg.seed if cfg.attack_seed is None else cfg.attack_seed
            return atk.baseline_random(self.graph, target, cfg.budget, _target_seed(seed, target))
        return atk.baseline_degree(self.graph, target, cfg.budget)


def run_experiment(cfg: ExperimentConfig, graph: Optional[Graph] = None) -> ExperimentReport:
    """Train on the clean graph, attack each sampled target independently, aggregate."""
    if graph is None:
        graph = load_graph(cfg)
    if graph.labels is None:
        raise ConfigError("graph has no labels")
    if cfg.victim == "sgc" and graph.X is None:
        raise ConfigError("the SGC victim needs a feature matrix")
    train_idx, _, test_idx = split_dataset(graph.labels, cfg.seed)
    Z = embed(graph, cfg)
    model = _fit(Z, graph, train_idx, cfg)
    digest = model_digest(model)
    clean_pred = model.predict(Z)
    clean_test_acc = float(np.mean(clean_pred[test_idx] == graph.labels[test_idx]))

    runner = _AttackRunner(graph, cfg)
    records = []
    for t in sample_targets(graph, test_idx, cfg.num_targets, cfg.seed):
        t = int(t)
        start = time.perf_counter()
        res = runner(t)
        elapsed = time.perf_counter() - start
        attacked = res.perturbed_graph.with_features(graph.X)
        Zp = embed(attacked, cfg)
        if cfg.mode == "poisoning":
            pred = _fit(Zp, graph, train_idx, cfg).predict(Zp[[t]])[0]
        else:
            pred = model.predict(Zp[[t]])[0]
        label = graph.labels[t]
        records.append(
            TargetRecord(
                target=t,
                original_id=int(graph.origin[t]),
                clean_correct=bool(clean_pred[t] == label),
                attacked_correct=bool(pred == label),
                flips=[f.to_dict() for f in res.selected],
                scores=[float(s) for s in res.scores],
                wall_time=elapsed,
            )
        )
    clean_acc = float(np.mean([r.clean_correct for r in records]))
    attacked_acc = float(np.mean([r.attacked_correct for r in records]))
    # the output destination is not part of the experiment
    config = {k: v for k, v in asdict(cfg).items() if k != "out"}
    return ExperimentReport(
        config=config,
        num_vertices=graph.n,
        num_edges=len(graph.edges),
        clean_test_accuracy=clean_test_acc,
        clean_accuracy=clean_acc,
        attacked_accuracy=attacked_acc,
        accuracy_drop=clean_acc - attacked_acc,
        clean_model_sha256=digest,
        records=records,
    )


def measure_runtime(cfg: ExperimentConfig, repetitions: int = 10, graph: Optional[Graph] = None) -> dict:
    """Wall time of the attack phase per target, including any eigendecomposition.

    Returns ``{target: {"mean": s, "std": s or None, "samples": k}}``; ``std``
    is None for a single repetition.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if graph is None:
        graph = load_graph(cfg)
    _, _, test_idx = split_dataset(graph.labels, cfg.seed)
    runner = _AttackRunner(graph, cfg)
    out = {}
    for t in sample_targets(graph, test_idx, cfg.num_targets, cfg.seed):
        times = []
        for _ in range(repetitions):
            start = time.perf_counter()
            runner(int(t), fresh=True)
            times.append(time.perf_counter() - start)
        out[int(t)] = {
            "mean": statistics.fmean(times),
            "std": statistics.stdev(times) if len(times) > 1 else None,
            "samples": len(times),
        }
    return out


def random_baseline_drop(cfg: ExperimentConfig, seeds=range(10), graph: Optional[Graph] = None) -> float:
    """Mean accuracy drop of the random baseline over several attack seeds.

    Split, targets and victim stay fixed by ``cfg.seed``; only the sampled
    flips change between runs.
    """
    if graph is None:
        graph = load_graph(cfg)
    cfg = replace(cfg, attack="random")
    drops = [run_experiment(replace(cfg, attack_seed=s), graph).accuracy_drop for s in seeds]
    return float(np.mean(drops))


def write_report(report: ExperimentReport, path, include_timing: bool = False) -> None:
    Path(path).write_text(report.to_json(include_timing))
