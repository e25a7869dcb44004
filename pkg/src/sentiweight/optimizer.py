"""(mu + lambda) evolution strategy over per-feature weights.

Offspring are produced by Gaussian additive mutation with one step size
shared by every coordinate of every individual, clipped back into [0, 1].
The step size follows one of three policies:

``one-fifth-only``
    every ``n`` generations divide by ``c`` if more than a fifth of the
    mutations since the last adaptation improved on their parent, multiply
    by ``c`` if fewer did.
``schedule-only``
    geometric decay from ``sigma0`` at generation 0 to ``sigma_floor`` at
    generation ``T``.
``combined`` (default)
    the adaptive step, capped from above by the decay schedule.

All steps are kept inside ``[sigma_min_clamp, sigma_max_clamp]``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .classifiers import HyperParams
from .crossval import cross_validate, resubstitution_accuracy
from .dataset import Dataset
from .features import N_FEATURES

SIGMA_POLICIES = ("combined", "schedule-only", "one-fifth-only")
FITNESS_MODES = ("resubstitution", "internal-cv")


@dataclass(frozen=True)
class ESConfig:
    mu: int = 5
    lam: int = 25
    generations: int = 100
    adapt_every: int = 5
    c: float = 0.85
    sigma0: float = 1.0
    sigma_floor: float = 0.1
    sigma_min_clamp: float = 0.01
    sigma_max_clamp: float = 1.0
    seed: int = 0
    fitness_mode: str = "internal-cv"
    fitness_k: int = 3
    sigma_policy: str = "combined"

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise ValueError("c must be in (0, 1)")
        if self.mu < 1 or self.lam < self.mu:
            raise ValueError(f"need mu >= 1 and lambda >= mu (mu={self.mu}, lambda={self.lam})")
        if self.generations < 1 or not 1 <= self.adapt_every <= self.generations:
            raise ValueError(f"need generations >= 1 and 1 <= adapt_every <= generations "
                             f"(generations={self.generations}, adapt_every={self.adapt_every})")
        if self.sigma_policy not in SIGMA_POLICIES:
            raise ValueError(f"unknown sigma policy {self.sigma_policy!r}")
        if self.fitness_mode not in FITNESS_MODES:
            raise ValueError(f"unknown fitness mode {self.fitness_mode!r}")
        if not 0 < self.sigma_min_clamp <= self.sigma_max_clamp:
            raise ValueError("need 0 < sigma_min_clamp <= sigma_max_clamp")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GenerationRecord:
    t: int
    sigma: float
    best: float
    mean: float
    success_ratio: float


def clamp_sigma(sigma: float, cfg: ESConfig) -> float:
    return min(max(sigma, cfg.sigma_min_clamp), cfg.sigma_max_clamp)


def mutate(w: np.ndarray, sigma: float, rng) -> np.ndarray:
    """``w + N(0, sigma)`` per coordinate, clipped to [0, 1]."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    w = np.asarray(w, dtype=float)
    return np.clip(w + rng.normal(0.0, sigma, size=w.shape), 0.0, 1.0)


def schedule_sigma(t: int, cfg: ESConfig) -> float:
    """Geometric decay ``sigma0 * (sigma_floor / sigma0) ** (t / T)``."""
    T = cfg.generations
    if t <= 0:
        return cfg.sigma0
    if t >= T:
        return cfg.sigma_floor
    return cfg.sigma0 * (cfg.sigma_floor / cfg.sigma0) ** (t / T)


def adapt_sigma(sigma: float, success_ratio: float, cfg: ESConfig) -> float:
    """One-fifth success rule step, then clamped."""
    if success_ratio > 0.2:
        sigma = sigma / cfg.c
    elif success_ratio < 0.2:
        sigma = sigma * cfg.c
    return clamp_sigma(sigma, cfg)


def fitness(w: np.ndarray, data: Dataset, algorithm: str, hyper: HyperParams | None,
            cfg: ESConfig) -> float:
    """Accuracy of ``algorithm`` on ``data`` under weights ``w``."""
    if cfg.fitness_mode == "resubstitution":
        return resubstitution_accuracy(data, algorithm, hyper, seed=cfg.seed, weights=w)
    return cross_validate(data, algorithm, hyper, k=cfg.fitness_k, seed=cfg.seed, weights=w).accuracy


@dataclass
class ESResult:
    weights: np.ndarray
    fitness: float
    trace: list[GenerationRecord]
    n_evaluations: int


def _child_rng(seed: int, t: int, i: int) -> np.random.Generator:
    # one stream per (generation, offspring) so evaluation order cannot matter
    return np.random.default_rng([seed, t, i])


def evolve(data: Dataset | None, algorithm: str | None = None, hyper: HyperParams | None = None,
           cfg: ESConfig | None = None, fitness_fn: Callable[[np.ndarray], float] | None = None,
           jobs: int = 1) -> ESResult:
    """Search weights maximizing fitness.

    ``fitness_fn`` replaces the classifier fitness when given (``data`` and
    ``algorithm`` are then unused). Returns the best weights ever seen.
    """
    cfg = cfg or ESConfig()
    if fitness_fn is None:
        if data is None or algorithm is None:
            raise ValueError("need data and algorithm, or fitness_fn")

        def fitness_fn(w, _data=data):
            return fitness(w, _data, algorithm, hyper, cfg)

    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None

    def evaluate(ws):
        if pool is None:
            return [float(fitness_fn(w)) for w in ws]
        return [float(f) for f in pool.map(fitness_fn, ws)]

    try:
        return _run(cfg, evaluate)
    finally:
        if pool is not None:
            pool.shutdown()


def _run(cfg: ESConfig, evaluate) -> ESResult:
    init = [np.ones(N_FEATURES)]
    for i in range(1, cfg.mu):
        init.append(mutate(init[0], cfg.sigma0, _child_rng(cfg.seed, 0, i)))
    pop = list(zip(init, evaluate(init)))
    n_evals = len(pop)

    sigma = clamp_sigma(cfg.sigma0, cfg)
    fits = [f for _, f in pop]
    trace = [GenerationRecord(0, sigma, max(fits), float(np.mean(fits)), 0.0)]
    window_success = window_total = 0

    for t in range(1, cfg.generations + 1):
        sel = np.random.default_rng([cfg.seed, t]).integers(0, len(pop), size=cfg.lam)
        children = [mutate(pop[p][0], sigma, _child_rng(cfg.seed, t, i)) for i, p in enumerate(sel)]
        child_fits = evaluate(children)
        n_evals += len(children)
        successes = sum(cf > pop[p][1] for cf, p in zip(child_fits, sel))
        window_success += successes
        window_total += len(children)
        used_sigma = sigma

        # parents listed first: stable sort keeps them on fitness ties
        merged = pop + list(zip(children, child_fits))
        order = sorted(range(len(merged)), key=lambda j: -merged[j][1])
        pop = [merged[j] for j in order[:cfg.mu]]
        fits = [f for _, f in pop]
        trace.append(GenerationRecord(t, used_sigma, fits[0], float(np.mean(fits)),
                                      successes / len(children)))

        if cfg.sigma_policy != "schedule-only" and t % cfg.adapt_every == 0:
            sigma = adapt_sigma(sigma, window_success / window_total, cfg)
            window_success = window_total = 0
        if cfg.sigma_policy == "schedule-only":
            sigma = clamp_sigma(schedule_sigma(t, cfg), cfg)
        elif cfg.sigma_policy == "combined":
            sigma = clamp_sigma(min(sigma, schedule_sigma(t, cfg)), cfg)

    best_w, best_f = pop[0]
    return ESResult(best_w.copy(), best_f, trace, n_evals)


def write_weights(w: np.ndarray, out, manifest_lines=()) -> None:
    for line in manifest_lines:
        out.write(f"# {line}\n")
    for x in w:
        out.write(f"{float(x)!r}\n")


def read_weights(lines) -> np.ndarray:
    values = [float(line) for line in lines if line.strip() and not line.lstrip().startswith("#")]
    if len(values) != N_FEATURES:
        raise ValueError(f"weights file must hold {N_FEATURES} values, got {len(values)}")
    w = np.array(values)
    if ((w < 0) | (w > 1)).any():
        raise ValueError("weights must lie in [0, 1]")
    return w


def write_trace(trace: list[GenerationRecord], out, manifest_lines=()) -> None:
    for line in manifest_lines:
        out.write(f"# {line}\n")
    out.write("t,sigma,best,mean,success_ratio\n")
    for r in trace:
        out.write(f"{r.t},{r.sigma!r},{r.best!r},{r.mean!r},{r.success_ratio!r}\n")


def read_trace(lines) -> list[GenerationRecord]:
    rows = [line.strip() for line in lines if line.strip() and not line.startswith("#")]
    out = []
    for row in rows[1:]:
        t, s, b, m, r = row.split(",")
        out.append(GenerationRecord(int(t), float(s), float(b), float(m), float(r)))
    return out
