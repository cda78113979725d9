"""Node removal strategies and the attack loop.

Targeted strategies rank nodes by degree or betweenness, either once up
front (``id_removal``, ``ib_removal``) or afresh before every removal
(``rd_removal``, ``rb_removal``). ``incomplete`` mixes the recalculated
degree choice with a uniform one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .centrality import TIE_TOLERANCE, argmax_lowest, betweenness, tracker
from .graph import Graph
from .rewiring import NO_REWIRING, RewirePolicy, apply_event

STRATEGIES = ("random", "id_removal", "ib_removal", "rd_removal", "rb_removal", "incomplete")
ALIASES = {
    "id": "id_removal",
    "ib": "ib_removal",
    "rd": "rd_removal",
    "rb": "rb_removal",
}

MAX_FAILURE_RATE = 0.8


def canonical_strategy(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in STRATEGIES:
        raise ValueError(f"unknown attack {name!r}; expected one of {STRATEGIES}")
    return name


@dataclass(frozen=True)
class AttackPlan:
    """Strategy plus failure rate P_f.

    P_f is capped at 0.8 unless ``extended`` lifts the cap to 1.
    """

    strategy: str
    failure_rate: float
    a: float | None = None
    extended: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", canonical_strategy(self.strategy))
        cap = 1.0 if self.extended else MAX_FAILURE_RATE
        if not 0.0 <= self.failure_rate <= cap:
            raise ValueError(f"failure rate must be in [0, {cap}], got {self.failure_rate}")
        if self.strategy == "incomplete":
            if self.a is None or not 0.0 <= self.a <= 1.0:
                raise ValueError(f"incomplete attack needs a in [0, 1], got {self.a}")
        elif self.a is not None:
            raise ValueError(f"parameter a only applies to incomplete attacks, not {self.strategy}")

    @property
    def frozen(self) -> bool:
        """True when the victim order is fixed before the first removal."""
        return self.strategy in ("id_removal", "ib_removal")

    def describe(self) -> str:
        name = f"incomplete({self.a})" if self.strategy == "incomplete" else self.strategy
        return f"{name} P_f={self.failure_rate}"


@dataclass
class RemovalEvent:
    victim: int
    step: int
    exposed_neighbors: list[int]
    added_edges: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "step": self.step,
                "victim": self.victim,
                "exposed_neighbors": self.exposed_neighbors,
                "added_edges": [list(e) for e in self.added_edges],
            }
        )


class EventLog(list):
    """List of RemovalEvents that also records whether the budget ran out."""

    def __init__(self, events=(), budget: int = 0, truncated: bool = False) -> None:
        super().__init__(events)
        self.budget = budget
        self.truncated = truncated

    @property
    def rewired_edges(self) -> int:
        return sum(len(e.added_edges) for e in self)

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())


def read_event_log(path: str | Path) -> list[RemovalEvent]:
    events = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            d = json.loads(line)
            events.append(
                RemovalEvent(
                    victim=d["victim"],
                    step=d["step"],
                    exposed_neighbors=d["exposed_neighbors"],
                    added_edges=[tuple(e) for e in d.get("added_edges", [])],
                )
            )
    return events


def target_count(n: int, p_f: float) -> int:
    """Deterministic removal budget ceil(p_f * n)."""
    if not 0.0 <= p_f <= 1.0:
        raise ValueError(f"p_f must be in [0, 1], got {p_f}")
    # round first so binary noise like 0.6 * 5 = 3.0000000000000004 doesn't bump the ceiling
    return math.ceil(round(p_f * n, 9))


def _ranked(scores: np.ndarray, alive: np.ndarray) -> list[int]:
    """Alive ids by descending score; scores within float noise tie to the lower id."""
    top = float(np.abs(scores[alive]).max()) if alive.any() else 0.0
    keys = np.round(scores / (TIE_TOLERANCE * top)) if top > 0 else scores
    ids = np.flatnonzero(alive)
    order = np.lexsort((ids, -keys[ids]))
    return ids[order].tolist()


def initial_ranking(g: Graph, plan: AttackPlan) -> list[int]:
    """Frozen victim order for id/ib removal; empty for every other strategy."""
    if plan.strategy == "id_removal":
        return _ranked(g.degrees().astype(float), g.alive_mask())
    if plan.strategy == "ib_removal":
        return _ranked(betweenness(g), g.alive_mask())
    return []


def _uniform(g: Graph, rng: np.random.Generator) -> int:
    alive = g.alive_nodes()
    return alive[int(rng.integers(len(alive)))]


def _max_degree(g: Graph) -> int:
    return argmax_lowest(g.degrees())


def _max_betweenness(g: Graph, scores: np.ndarray) -> int:
    masked = np.where(g.alive_mask(), scores, -1.0)
    return argmax_lowest(masked)


def next_victim(
    g: Graph, plan: AttackPlan, initial_ranking: list[int], rng: np.random.Generator
) -> int:
    """Choose the next node to remove from scratch (no cached state)."""
    if g.n_alive == 0:
        raise ValueError("no alive node left to attack")
    s = plan.strategy
    if s == "random":
        return _uniform(g, rng)
    if s in ("id_removal", "ib_removal"):
        for v in initial_ranking:
            if g.is_alive(v):
                return v
        raise ValueError("initial ranking exhausted while alive nodes remain")
    if s == "rd_removal":
        return _max_degree(g)
    if s == "rb_removal":
        return _max_betweenness(g, betweenness(g))
    if rng.random() < plan.a:
        return _max_degree(g)
    return _uniform(g, rng)


class _Selector:
    """Stateful twin of ``next_victim`` used inside ``run_attack``: it keeps a
    cursor into the frozen ranking and an incrementally updated betweenness
    tracker instead of recomputing from scratch each step."""

    def __init__(self, g: Graph, plan: AttackPlan, centrality) -> None:
        self.g = g
        self.plan = plan
        self.ranking = initial_ranking(g, plan)
        self.cursor = 0
        self.centrality = centrality

    def __call__(self, rng: np.random.Generator) -> int:
        g, s = self.g, self.plan.strategy
        if s in ("id_removal", "ib_removal"):
            while not g.is_alive(self.ranking[self.cursor]):
                self.cursor += 1
            return self.ranking[self.cursor]
        if s == "rb_removal":
            return _max_betweenness(g, self.centrality.scores())
        return next_victim(g, self.plan, self.ranking, rng)


def run_attack(
    g: Graph,
    plan: AttackPlan,
    rewire: RewirePolicy = NO_REWIRING,
    rng: np.random.Generator | None = None,
    rewire_rng: np.random.Generator | None = None,
) -> EventLog:
    """Remove ceil(P_f * n) nodes from ``g`` in place, rewiring after each.

    ``n`` is the full id space of ``g``. ``rewire_rng`` defaults to ``rng``;
    giving rewiring its own stream keeps the victims of a random attack
    identical across rewiring policies.
    """
    if rng is None:
        rng = np.random.default_rng()
    if rewire_rng is None:
        rewire_rng = rng
    budget = target_count(g.n, plan.failure_rate)
    log = EventLog(budget=budget)
    if budget == 0:
        return log
    needs_centrality = plan.strategy == "rb_removal" or rewire.needs_betweenness
    centrality = tracker(g) if needs_centrality else None
    try:
        select = _Selector(g, plan, centrality)
        for step in range(budget):
            if g.n_alive == 0:
                log.truncated = True
                break
            victim = select(rng)
            event = RemovalEvent(victim=victim, step=step, exposed_neighbors=g.remove_node(victim))
            if rewire.active:
                scores = centrality.scores().copy() if rewire.needs_betweenness else None
                event.added_edges = apply_event(g, event, rewire, rewire_rng, scores=scores)
            log.append(event)
    finally:
        if centrality is not None:
            centrality.detach()
    return log
