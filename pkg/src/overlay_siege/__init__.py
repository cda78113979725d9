"""Robustness simulator for peer-to-peer overlay topologies under node
removal attacks, with optional defensive rewiring."""

from .attack import AttackPlan, RemovalEvent, next_victim, run_attack, target_count
from .engine import CampaignSummary, ExperimentConfig, TrialReport, run_campaign, run_sweep, run_trial
from .generators import TopologySpec, generate
from .graph import UNREACHABLE, Graph
from .metrics import MetricsVector, measure
from .rewiring import RewirePolicy, apply_event, react

__all__ = [
    "AttackPlan",
    "CampaignSummary",
    "ExperimentConfig",
    "Graph",
    "MetricsVector",
    "RemovalEvent",
    "RewirePolicy",
    "TopologySpec",
    "TrialReport",
    "UNREACHABLE",
    "apply_event",
    "generate",
    "measure",
    "next_victim",
    "react",
    "run_attack",
    "run_campaign",
    "run_sweep",
    "run_trial",
    "target_count",
]
