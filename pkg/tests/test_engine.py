import math

import numpy as np
import pytest

from overlay_siege.attack import AttackPlan
from overlay_siege.engine import (
    CampaignError,
    ExperimentConfig,
    run_campaign,
    run_sweep,
    run_trial,
    trial_streams,
)
from overlay_siege.generators import TopologySpec, generate
from overlay_siege.metrics import measure
from overlay_siege.rewiring import RewirePolicy


def config(kind="er", n=60, k=8.0, attack="random", p_f=0.5, trials=4, seed=0, policy=None, **params):
    return ExperimentConfig(
        topology=TopologySpec(kind, n, k, params),
        plan=AttackPlan(attack, p_f, a=0.4 if attack == "incomplete" else None),
        policy=policy or RewirePolicy(),
        trials=trials,
        base_seed=seed,
    )


def test_zero_failure_rate_leaves_pristine_metrics():
    s = run_campaign(config(p_f=0.0, trials=3))
    assert s.disconnection_probability == 0.0
    assert s.mean["giant"] == 60 and s.std["giant"] == 0.0
    assert s.mean["n_alive"] == 60
    for i, r in enumerate(s.reports):
        g = generate(TopologySpec("er", 60, 8.0), trial_streams(i)[0])
        assert r.metrics == measure(g)
    assert all(r.removals == 0 for r in s.reports)


def test_campaign_is_reproducible():
    a = run_campaign(config(attack="rd", policy=RewirePolicy("random", 0.3)))
    b = run_campaign(config(attack="rd", policy=RewirePolicy("random", 0.3)))
    assert a == b
    assert a.to_dict() == b.to_dict()
    assert run_campaign(config(seed=1)) != run_campaign(config(seed=0))


def test_trial_streams_are_independent():
    g, atk, rw = trial_streams(3)
    draws = [r.random(4).tolist() for r in (g, atk, rw)]
    assert len({tuple(d) for d in draws}) == 3
    assert trial_streams(3)[1].random(4).tolist() == draws[1]


def test_rewiring_does_not_move_random_victims():
    cfg_a = config(trials=1)
    cfg_b = config(trials=1, policy=RewirePolicy("random", 1.0))
    a, b = run_trial(cfg_a, 0), run_trial(cfg_b, 0)
    assert a.removals == b.removals == 30
    assert b.rewired_edges > 0
    assert b.metrics.giant >= a.metrics.giant


def test_heavy_failure_shrinks_giant():
    s = run_campaign(ExperimentConfig(
        TopologySpec("er", 50, 4.0), AttackPlan("rd", 0.9, extended=True), trials=5))
    assert s.mean["giant"] <= 5
    assert s.disconnection_probability == 1.0


def test_std_uses_sample_estimator():
    s = run_campaign(config(trials=5, attack="random"))
    giants = [r.metrics.giant for r in s.reports]
    assert s.std["giant"] == pytest.approx(np.std(giants, ddof=1))


def test_failed_generation_is_listed():
    with pytest.raises(CampaignError):
        run_campaign(config(n=200, k=0.5, trials=2))
    s = run_sweep([config(n=200, k=0.5, trials=2), config(trials=2)])
    assert not s[0].ok and s[0].partial and "every trial failed" in s[0].error
    assert math.isnan(s[0].mean["giant"]) and math.isnan(s[0].disconnection_probability)
    assert s[1].ok and not s[1].partial


def test_sweep_keeps_grid_order():
    grid = [config(kind=k, trials=2) for k in ("chord", "er", "pru")]
    seen = []
    out = run_sweep(grid, progress=lambda done, total, s: seen.append((done, total)))
    assert [s.config.topology.kind for s in out] == ["chord", "er", "pru"]
    assert seen == [(1, 3), (2, 3), (3, 3)]
    with pytest.raises(ValueError):
        run_sweep([])


def test_parallel_sweep_matches_serial():
    grid = [config(kind=k, trials=2) for k in ("chord", "er")]
    assert run_sweep(grid, jobs=2) == run_sweep(grid)


def test_rewiring_probability_sweep_is_monotone():
    """More random rewiring keeps more survivors together."""
    giants = []
    for p in (0.0, 0.5, 1.0):
        s = run_campaign(config(n=200, k=6.0, attack="rd", p_f=0.5, trials=6,
                                policy=RewirePolicy("random", p)))
        giants.append(s.mean["giant"])
    assert giants[0] < giants[1] < giants[2]


def test_config_validation():
    with pytest.raises(ValueError):
        config(trials=0)
    d = config(attack="incomplete").to_dict()
    assert d["attack"] == "incomplete" and d["a"] == 0.4 and d["seed"] == 0
