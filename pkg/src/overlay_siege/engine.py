"""Monte Carlo harness: generate, attack, rewire, measure, aggregate.

Each trial draws three independent random streams from its seed, one each
for topology generation, victim selection and rewiring. Two configs that
differ only in rewiring policy therefore see the same graph, and under
random or frozen-ranking attacks the same victims, which makes paired
comparisons between policies meaningful.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .attack import AttackPlan, run_attack
from .generators import GenerationError, TopologySpec, generate
from .metrics import Basis, MetricsVector, measure
from .rewiring import NO_REWIRING, RewirePolicy

log = logging.getLogger(__name__)

SUMMARY_METRICS = ("cost", "e_glob", "e_loc", "giant", "n_alive", "betweenness_max")


class CampaignError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    topology: TopologySpec
    plan: AttackPlan
    policy: RewirePolicy = NO_REWIRING
    trials: int = 10
    base_seed: int = 0
    basis: Basis = "survivors"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def trial_seed(self, index: int) -> int:
        return self.base_seed + index

    def describe(self) -> str:
        return f"{self.topology.kind} n={self.topology.n} | {self.plan.describe()} | {self.policy.describe()}"

    def to_dict(self) -> dict[str, Any]:
        t, p, r = self.topology, self.plan, self.policy
        return {
            "topology": t.kind,
            "n": t.n,
            "mean_degree": t.mean_degree,
            "params": dict(sorted(t.params.items())),
            "attack": p.strategy,
            "a": p.a,
            "p_f": p.failure_rate,
            "rewiring": r.strategy,
            "rewire_p": r.probability,
            "trials": self.trials,
            "seed": self.base_seed,
            "basis": self.basis,
        }


@dataclass(frozen=True)
class TrialReport:
    metrics: MetricsVector
    removals: int
    rewired_edges: int
    runtime_ms: float
    truncated: bool = False


@dataclass(frozen=True)
class CampaignSummary:
    config: ExperimentConfig
    trials_ok: int
    disconnection_probability: float
    mean: dict[str, float]
    std: dict[str, float]
    failures: tuple[str, ...] = ()
    error: str | None = None
    reports: tuple[TrialReport, ...] = field(default=(), compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def partial(self) -> bool:
        return self.error is not None or bool(self.failures)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form; per-trial reports (with wall-clock times) are left out
        so the output stays reproducible."""
        return {
            "config": self.config.to_dict(),
            "trials_ok": self.trials_ok,
            "disconnection_probability": self.disconnection_probability,
            "mean": self.mean,
            "std": self.std,
            "failures": list(self.failures),
            "error": self.error,
        }


def trial_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent (generation, attack, rewiring) generators for one trial."""
    return tuple(np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3))


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialReport:
    t0 = time.perf_counter()
    gen_rng, attack_rng, rewire_rng = trial_streams(config.trial_seed(trial_index))
    g = generate(config.topology, gen_rng)
    events = run_attack(g, config.plan, config.policy, attack_rng, rewire_rng=rewire_rng)
    metrics = measure(g, basis=config.basis)
    return TrialReport(
        metrics=metrics,
        removals=len(events),
        rewired_edges=events.rewired_edges,
        runtime_ms=(time.perf_counter() - t0) * 1000.0,
        truncated=events.truncated,
    )


def _stats(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


def run_campaign(config: ExperimentConfig) -> CampaignSummary:
    """Run every trial of ``config`` and aggregate the survivors' metrics.

    Trials whose topology cannot be generated are listed in ``failures`` and
    left out of every aggregate; if none succeed, CampaignError is raised.
    """
    reports: list[TrialReport] = []
    failures: list[str] = []
    for i in range(config.trials):
        try:
            reports.append(run_trial(config, i))
        except GenerationError as exc:
            failures.append(f"trial {i} (seed {config.trial_seed(i)}): {exc}")
            log.warning("%s: %s", config.describe(), failures[-1])
    if not reports:
        raise CampaignError(f"{config.describe()}: every trial failed generation")
    mean, std = {}, {}
    for name in SUMMARY_METRICS:
        mean[name], std[name] = _stats([getattr(r.metrics, name) for r in reports])
    disconnected = sum(not r.metrics.connected for r in reports)
    return CampaignSummary(
        config=config,
        trials_ok=len(reports),
        disconnection_probability=disconnected / len(reports),
        mean=mean,
        std=std,
        failures=tuple(failures),
        reports=tuple(reports),
    )


def failed_summary(config: ExperimentConfig, error: str) -> CampaignSummary:
    nan = {name: math.nan for name in SUMMARY_METRICS}
    return CampaignSummary(
        config=config,
        trials_ok=0,
        disconnection_probability=math.nan,
        mean=dict(nan),
        std=dict(nan),
        error=error,
    )


def _guarded(config: ExperimentConfig) -> CampaignSummary:
    try:
        return run_campaign(config)
    except Exception as exc:  # carried in-line so one bad campaign never sinks a sweep
        return failed_summary(config, f"{type(exc).__name__}: {exc}")


def run_sweep(grid: list[ExperimentConfig], jobs: int = 1, progress=None) -> list[CampaignSummary]:
    """One summary per config, in grid order.

    ``jobs > 1`` runs campaigns in worker processes; results do not depend on
    scheduling since every trial owns its seeds. ``progress(done, total,
    summary)`` is called as each campaign finishes.
    """
    if not grid:
        raise ValueError("empty experiment grid")
    out: list[CampaignSummary] = []
    if jobs <= 1:
        for c in grid:
            out.append(_guarded(c))
            if progress:
                progress(len(out), len(grid), out[-1])
        return out
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for s in pool.map(_guarded, grid):
            out.append(s)
            if progress:
                progress(len(out), len(grid), s)
    return out
