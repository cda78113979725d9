import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from overlay_siege.attack import (
    AttackPlan,
    initial_ranking,
    next_victim,
    read_event_log,
    run_attack,
    target_count,
)
from overlay_siege.generators import TopologySpec, generate
from overlay_siege.graph import Graph
from overlay_siege.metrics import giant_component_size

from conftest import barbell, graphs, random_graph, star


def test_target_count_examples():
    assert target_count(2000, 0.6) == 1200
    assert target_count(37, 0.0) == 0
    assert target_count(5, 0.5) == 3
    with pytest.raises(ValueError):
        target_count(5, 1.5)


def test_plan_validation():
    with pytest.raises(ValueError):
        AttackPlan("random", 0.9)
    assert AttackPlan("random", 0.9, extended=True).failure_rate == 0.9
    with pytest.raises(ValueError):
        AttackPlan("incomplete", 0.5)
    with pytest.raises(ValueError):
        AttackPlan("incomplete", 0.5, a=1.5)
    with pytest.raises(ValueError):
        AttackPlan("rd", 0.5, a=0.3)
    with pytest.raises(ValueError):
        AttackPlan("pagerank", 0.5)
    assert AttackPlan("ib", 0.5).strategy == "ib_removal"


def test_id_on_star_hits_center_first():
    g = star(5)
    plan = AttackPlan("id", 0.2)
    assert next_victim(g, plan, initial_ranking(g, plan), np.random.default_rng(0)) == 0


def _brute_sequence(g: Graph, recompute: bool, steps: int) -> list[int]:
    """Highest degree first, lowest id on ties, by plain Python loops."""
    g = g.copy()
    frozen = {v: g.degree(v) for v in g.alive_nodes()}
    out = []
    for _ in range(steps):
        alive = g.alive_nodes()
        score = {v: g.degree(v) for v in alive} if recompute else {v: frozen[v] for v in alive}
        v = min(alive, key=lambda x: (-score[x], x))
        out.append(v)
        g.remove_node(v)
    return out


def test_barbell_rd_and_id_diverge():
    g = barbell()
    rng = np.random.default_rng(0)
    id_log = run_attack(g.copy(), AttackPlan("id", 0.8), rng=rng)
    rd_log = run_attack(g.copy(), AttackPlan("rd", 0.8), rng=rng)
    id_seq = [e.victim for e in id_log]
    rd_seq = [e.victim for e in rd_log]
    assert id_seq == _brute_sequence(g, recompute=False, steps=8)
    assert rd_seq == _brute_sequence(g, recompute=True, steps=8)
    # both open on the two bridge-end hubs, then split once the ranking goes stale
    assert id_seq[:3] == rd_seq[:3] == [3, 6, 0]
    assert id_seq[3] == 1 and rd_seq[3] == 7


def test_barbell_selectors_use_their_own_score():
    g = barbell()
    deg_first = initial_ranking(g, AttackPlan("id", 0.1))[0]
    btw_first = initial_ranking(g, AttackPlan("ib", 0.1))[0]
    # the path midpoints carry the most shortest paths but have degree 2
    assert deg_first == 3
    assert btw_first == 4
    bt = oracles.betweenness(10, g.edges())
    assert max(range(10), key=lambda v: (bt[v], -v)) == 4


def test_rb_follows_recomputed_betweenness():
    # K5s {0..4} and {5..9} joined through node 10; node 11 hangs off 1 and 2
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    edges += [(i, j) for i in range(5, 10) for j in range(i + 1, 10)]
    edges += [(0, 10), (10, 5), (1, 11), (11, 2)]
    g = Graph.from_edges(12, edges)
    log = run_attack(g.copy(), AttackPlan("rb", 0.5), rng=np.random.default_rng(1))
    order = [e.victim for e in log]
    for v in order:
        n, es, alive = oracles.compact(g)
        bt = oracles.betweenness(n, es)
        assert v == alive[max(range(n), key=lambda i: (round(bt[i], 9), -alive[i]))]
        g.remove_node(v)


def test_zero_rate_leaves_graph_alone():
    g = random_graph(20, 0.3, 0)
    before = g.edges()
    assert run_attack(g, AttackPlan("rd", 0.0)) == []
    assert g.edges() == before


def test_full_rate_kills_everything():
    g = random_graph(25, 0.2, 1)
    log = run_attack(g, AttackPlan("random", 1.0, extended=True), rng=np.random.default_rng(2))
    assert len(log) == 25 and not log.truncated
    assert g.n_alive == 0 and giant_component_size(g) == 0


def test_budget_beyond_alive_truncates():
    g = random_graph(10, 0.4, 2)
    for v in range(6):
        g.remove_node(v)
    log = run_attack(g, AttackPlan("rd", 1.0, extended=True))
    assert len(log) == 4 and log.truncated


def test_random_attack_size_and_uniqueness():
    g = generate(TopologySpec("er", 2000), np.random.default_rng(0))
    log = run_attack(g, AttackPlan("random", 0.6), rng=np.random.default_rng(1))
    victims = [e.victim for e in log]
    assert len(victims) == 1200 == len(set(victims))
    # uniform sample: each decile of ids holds about 120 victims
    counts = np.bincount(np.array(victims) // 200, minlength=10)
    assert counts.min() > 80 and counts.max() < 160


@given(graphs(min_nodes=2, max_nodes=15), st.sampled_from(
    ["random", "id", "ib", "rd", "rb", "incomplete"]), st.integers(0, 2**32 - 1))
def test_event_log_invariants(g, strategy, seed):
    plan = AttackPlan(strategy, 0.8, a=0.5 if strategy == "incomplete" else None)
    log = run_attack(g, plan, rng=np.random.default_rng(seed))
    victims = [e.victim for e in log]
    assert len(victims) == len(set(victims)) == target_count(g.n, 0.8)
    for e in log:
        assert not g.is_alive(e.victim)
    assert [e.step for e in log] == list(range(len(log)))


def test_exposed_neighbors_are_the_victims_neighbourhood():
    g = random_graph(30, 0.2, 4)
    ref = g.copy()
    for e in run_attack(g, AttackPlan("rd", 0.5)):
        assert e.exposed_neighbors == sorted(ref.neighbors(e.victim))
        ref.remove_node(e.victim)


def test_frozen_rankings_ignore_rng():
    g = random_graph(40, 0.15, 5)
    for s in ("id", "ib"):
        a = [e.victim for e in run_attack(g.copy(), AttackPlan(s, 0.5), rng=np.random.default_rng(1))]
        b = [e.victim for e in run_attack(g.copy(), AttackPlan(s, 0.5), rng=np.random.default_rng(99))]
        assert a == b


def test_incomplete_mixing_rate():
    # unique max-degree node: star centre plus a pendant path
    g = Graph.from_edges(12, [(0, i) for i in range(1, 9)] + [(9, 10), (10, 11)])
    a = 0.3
    plan = AttackPlan("incomplete", 0.1, a=a)
    rng = np.random.default_rng(7)
    hits = sum(next_victim(g, plan, [], rng) == 0 for _ in range(2000))
    # targeted with probability a, plus the 1/12 uniform chance of the centre
    expected = a + (1 - a) / 12
    assert abs(hits / 2000 - expected) < 0.05


def test_event_log_roundtrip(tmp_path):
    g = random_graph(30, 0.2, 6)
    log = run_attack(g, AttackPlan("rd", 0.3))
    log.write(tmp_path / "events.jsonl")
    back = read_event_log(tmp_path / "events.jsonl")
    assert back == list(log)
    first = (tmp_path / "events.jsonl").read_text().splitlines()[0]
    assert first.startswith('{"step": 0, "victim": ')
