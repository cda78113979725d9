"""Defensive reconnection fired by the survivors of each removal.

A node that just lost a neighbour (the *affected* node) may add one
replacement edge. The three strategies differ only in how the new endpoint
is picked: uniformly at random, the highest-degree second neighbour, or the
highest-betweenness second neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .centrality import argmax_lowest, betweenness
from .graph import Graph, second_neighbors

if TYPE_CHECKING:
    from .attack import RemovalEvent

STRATEGIES = ("none", "random", "greedy", "betweenness")

# uniform draws tried before falling back to enumerating the candidate set
_RANDOM_TRIES = 32


@dataclass(frozen=True)
class RewirePolicy:
    strategy: str = "none"
    probability: float = 0.0

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown rewiring {self.strategy!r}; expected one of {STRATEGIES}")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"rewiring probability must be in [0, 1], got {self.probability}")

    @property
    def active(self) -> bool:
        return self.strategy != "none" and self.probability > 0.0

    @property
    def needs_betweenness(self) -> bool:
        return self.active and self.strategy == "betweenness"

    def describe(self) -> str:
        return "none" if self.strategy == "none" else f"{self.strategy}(P={self.probability})"


NO_REWIRING = RewirePolicy()


def _random_partner(g: Graph, v: int, alive: list[int], rng: np.random.Generator) -> int | None:
    """Uniform alive node that is neither ``v`` nor adjacent to it."""
    nbrs = g.neighbors(v)
    if len(nbrs) + 1 >= len(alive):
        return None
    # rejection sampling stays uniform over the accepted set
    for _ in range(_RANDOM_TRIES):
        w = alive[int(rng.integers(len(alive)))]
        if w != v and w not in nbrs:
            return w
    pool = [w for w in alive if w != v and w not in nbrs]
    return pool[int(rng.integers(len(pool)))]


def _max_degree(g: Graph, candidates: set[int]) -> int | None:
    if not candidates:
        return None
    return min(candidates, key=lambda w: (-g.degree(w), w))


def react(
    g: Graph,
    affected: int,
    policy: RewirePolicy,
    rng: np.random.Generator,
    scores: np.ndarray | None = None,
    alive: list[int] | None = None,
) -> tuple[int, int] | None:
    """Let one affected survivor rewire; returns the added edge, if any.

    ``scores`` are betweenness values for the betweenness strategy (computed
    on the spot when omitted). ``alive`` lets a caller share one alive-node
    list across the reactions of a single event.
    """
    if not policy.active:
        return None
    if rng.random() >= policy.probability:
        return None
    if policy.strategy == "random":
        partner = _random_partner(g, affected, alive if alive is not None else g.alive_nodes(), rng)
    elif policy.strategy == "greedy":
        partner = _max_degree(g, second_neighbors(g, affected))
    else:
        if scores is None:
            scores = betweenness(g)
        partner = argmax_lowest(scores, sorted(second_neighbors(g, affected)))
    if partner is None:
        return None
    g.add_edge(affected, partner)
    return (min(affected, partner), max(affected, partner))


def apply_event(
    g: Graph,
    event: "RemovalEvent",
    policy: RewirePolicy,
    rng: np.random.Generator,
    scores: np.ndarray | None = None,
) -> list[tuple[int, int]]:
    """Run ``react`` for every exposed neighbour of ``event`` in id order.

    Betweenness is evaluated once for the whole event, before any reaction;
    pass ``scores`` to reuse a value the caller already holds.
    """
    if not policy.active or not event.exposed_neighbors:
        return []
    if policy.needs_betweenness and scores is None:
        scores = betweenness(g)
    alive = g.alive_nodes() if policy.strategy == "random" else None
    added = []
    for v in sorted(event.exposed_neighbors):
        edge = react(g, v, policy, rng, scores=scores, alive=alive)
        if edge is not None:
            added.append(edge)
    return added
