"""Batch front end: manifests and figure presets in, tidy CSV/JSON tables out.

Manifest grammar (one statement per line, ``#`` starts a comment)::

    key: value            top-level setting or experiment default
    experiments:          starts the experiment list
      - k=v k=v ...       one experiment; unset keys fall back to the defaults

Top-level keys: ``output``, ``format`` (csv|json), ``preset`` (fig2..fig6)
plus any experiment key used as a default. Experiment keys: ``topology``,
``n``, ``mean_degree``, ``attack``, ``a``, ``p_f``, ``rewiring``,
``rewire_p``, ``trials``, ``seed``, ``basis`` and generator knobs written as
``<topology>.<knob>`` (e.g. ``can.dimensions=9``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .attack import MAX_FAILURE_RATE, AttackPlan, canonical_strategy
from .engine import CampaignSummary, ExperimentConfig, run_sweep
from .generators import KINDS, TopologySpec
from .rewiring import STRATEGIES as REWIRINGS
from .rewiring import RewirePolicy

SEED_ENV = "OVERLAY_SIEGE_SEED"

FORMATS = ("csv", "json")
PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6")

COLUMNS = (
    "topology", "n", "mean_degree", "attack", "a", "p_f", "rewiring", "rewire_p", "trials",
    "disconnection_prob", "cost_mean", "cost_std", "eglob_mean", "eglob_std",
    "eloc_mean", "eloc_std", "giant_mean", "giant_std", "seed",
)
_INT_COLUMNS = {"n", "trials", "seed"}
_STR_COLUMNS = {"topology", "attack", "rewiring"}
_METRIC_COLUMNS = {"cost": "cost", "eglob": "e_glob", "eloc": "e_loc", "giant": "giant"}

PRESET_ATTACKS = (
    ("random", None), ("ib_removal", None), ("id_removal", None),
    ("rb_removal", None), ("rd_removal", None), ("incomplete", 0.4),
)
PRESET_P_F = 0.6
# rewiring probability per figure; None means no rewiring panels
PRESET_REWIRE_P = {"fig2": None, "fig3": 0.4, "fig4": 0.2, "fig5": 0.2, "fig6": None}

DEFAULTS: dict[str, Any] = {
    "n": 2000,
    "mean_degree": 18.0,
    "p_f": PRESET_P_F,
    "rewiring": "none",
    "rewire_p": 0.0,
    "trials": 10,
    "seed": 0,
    "basis": "survivors",
}

_EXPERIMENT_KEYS = {"topology", "attack", "a", *DEFAULTS}
_TOP_KEYS = {"output", "format", "preset"}


class ManifestError(ValueError):
    def __init__(self, line: int | None, message: str) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class RunManifest:
    experiments: list[ExperimentConfig]
    output_path: str | None = None
    format: str = "csv"
    figure_preset: str | None = None


def preset_rows(name: str) -> list[dict[str, Any]]:
    """Experiment key sets for one figure preset, before defaults are applied."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
    p = PRESET_REWIRE_P[name]
    rewirings = [("none", 0.0)] if p is None else [("none", 0.0)] + [
        (r, p) for r in ("greedy", "random", "betweenness")
    ]
    rows = []
    for rewiring, rp in rewirings:
        for kind in KINDS:
            for attack, a in PRESET_ATTACKS:
                rows.append({
                    "topology": kind, "attack": attack, "a": a, "p_f": PRESET_P_F,
                    "rewiring": rewiring, "rewire_p": rp,
                })
    return rows


def _number(key: str, raw: str, line: int | None, integer: bool = False) -> float | int:
    try:
        value = int(raw) if integer else float(raw)
    except ValueError:
        raise ManifestError(line, f"{key} expects {'an integer' if integer else 'a number'}, got {raw!r}")
    if not integer and not math.isfinite(value):
        raise ManifestError(line, f"{key} must be finite, got {raw!r}")
    return value


def _coerce(key: str, raw: Any, line: int | None) -> Any:
    if not isinstance(raw, str):
        return raw
    if key in ("n", "trials", "seed"):
        return _number(key, raw, line, integer=True)
    if key in ("mean_degree", "p_f", "rewire_p", "a"):
        return _number(key, raw, line)
    if "." in key:
        try:
            return int(raw)
        except ValueError:
            return _number(key, raw, line)
    return raw


def build_config(
    values: dict[str, Any], line: int | None = None, allow_extended: bool = False
) -> ExperimentConfig:
    """Validate one experiment's merged key set into an ExperimentConfig."""
    v = {k: _coerce(k, x, line) for k, x in values.items()}
    kind = v.get("topology")
    if kind is None:
        raise ManifestError(line, "experiment has no topology")
    if kind not in KINDS:
        raise ManifestError(line, f"unknown topology {kind!r}; expected one of {', '.join(KINDS)}")
    if "attack" not in v:
        raise ManifestError(line, "experiment has no attack")
    try:
        attack = canonical_strategy(v["attack"])
    except ValueError as exc:
        raise ManifestError(line, str(exc))
    if v["rewiring"] not in REWIRINGS:
        raise ManifestError(line, f"unknown rewiring {v['rewiring']!r}; expected one of {', '.join(REWIRINGS)}")
    p_f = v["p_f"]
    if not 0.0 <= p_f <= 1.0:
        raise ManifestError(line, f"p_f={p_f} outside [0, 1]")
    if p_f > MAX_FAILURE_RATE and not allow_extended:
        raise ManifestError(line, f"p_f={p_f} exceeds {MAX_FAILURE_RATE}; pass --allow-extended to permit it")
    a = v.get("a")
    if attack == "incomplete" and a is None:
        raise ManifestError(line, "incomplete attack needs a=<fraction>")
    if a is not None and attack != "incomplete":
        raise ManifestError(line, f"a only applies to incomplete attacks, not {attack}")
    if a is not None and not 0.0 <= a <= 1.0:
        raise ManifestError(line, f"a={a} outside [0, 1]")
    if not 0.0 <= v["rewire_p"] <= 1.0:
        raise ManifestError(line, f"rewire_p={v['rewire_p']} outside [0, 1]")
    if v["basis"] not in ("survivors", "original"):
        raise ManifestError(line, f"unknown basis {v['basis']!r}")
    params = {}
    for key, val in v.items():
        if "." in key:
            owner, knob = key.split(".", 1)
            if owner not in KINDS:
                raise ManifestError(line, f"unknown topology {owner!r} in knob {key!r}")
            if owner == kind:
                params[knob] = val
    try:
        return ExperimentConfig(
            topology=TopologySpec(kind, v["n"], v["mean_degree"], params),
            plan=AttackPlan(attack, p_f, a=a, extended=allow_extended),
            policy=RewirePolicy(v["rewiring"], v["rewire_p"]),
            trials=v["trials"],
            base_seed=v["seed"],
            basis=v["basis"],
        )
    except ValueError as exc:
        raise ManifestError(line, str(exc))


def _check_key(key: str, line: int, top: bool) -> None:
    if key in _EXPERIMENT_KEYS or (top and key in _TOP_KEYS):
        return
    if "." in key and key.split(".", 1)[1]:
        return
    raise ManifestError(line, f"unknown key {key!r}")


def parse_manifest(
    source: str, allow_extended: bool = False, overrides: dict[str, Any] | None = None
) -> RunManifest:
    """Parse manifest text; ``overrides`` (e.g. command-line flags) win over
    every value the manifest sets."""
    top: dict[str, tuple[str, int]] = {}
    items: list[tuple[dict[str, str], int]] = []
    in_list = False
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if text.startswith("-"):
            if not in_list:
                raise ManifestError(lineno, "list item outside 'experiments:'")
            item: dict[str, str] = {}
            for tok in text[1:].split():
                key, sep, val = tok.partition("=")
                if not sep or not key or not val:
                    raise ManifestError(lineno, f"expected key=value, got {tok!r}")
                _check_key(key, lineno, top=False)
                if key in item:
                    raise ManifestError(lineno, f"duplicate key {key!r}")
                item[key] = val
            items.append((item, lineno))
            continue
        key, sep, val = text.partition(":")
        key, val = key.strip(), val.strip()
        if not sep or not key:
            raise ManifestError(lineno, f"expected 'key: value', got {text!r}")
        if key == "experiments":
            if val:
                raise ManifestError(lineno, "'experiments:' takes no inline value")
            in_list = True
            continue
        in_list = False
        _check_key(key, lineno, top=True)
        if not val:
            raise ManifestError(lineno, f"{key!r} has no value")
        if key in top:
            raise ManifestError(lineno, f"duplicate key {key!r}")
        top[key] = (val, lineno)

    fmt = top.get("format", ("csv", None))
    if fmt[0] not in FORMATS:
        raise ManifestError(fmt[1], f"unknown format {fmt[0]!r}; expected csv or json")
    preset = top.get("preset")
    if preset and preset[0] not in PRESETS:
        raise ManifestError(preset[1], f"unknown preset {preset[0]!r}; expected one of {', '.join(PRESETS)}")

    defaults = dict(DEFAULTS)
    default_lines: dict[str, int] = {}
    for key, (val, lineno) in top.items():
        if key not in _TOP_KEYS:
            defaults[key] = _coerce(key, val, lineno)
            default_lines[key] = lineno
    overrides = overrides or {}
    defaults.update(overrides)

    rows: list[tuple[dict[str, Any], int | None]] = []
    if preset:
        rows += [(r, preset[1]) for r in preset_rows(preset[0])]
    rows += items
    if not rows:
        raise ManifestError(None, "manifest defines no experiments")
    experiments = []
    for row, lineno in rows:
        merged = {**defaults, **row, **overrides}
        experiments.append(build_config(merged, lineno, allow_extended))
    return RunManifest(
        experiments=experiments,
        output_path=top["output"][0] if "output" in top else None,
        format=fmt[0],
        figure_preset=preset[0] if preset else None,
    )


def preset_manifest(name: str, overrides: dict[str, Any] | None = None, allow_extended: bool = False) -> RunManifest:
    return parse_manifest(f"preset: {name}\n", allow_extended=allow_extended, overrides=overrides)


# --- output tables -----------------------------------------------------------


def summary_record(s: CampaignSummary) -> dict[str, Any]:
    c = s.config
    rec: dict[str, Any] = {
        "topology": c.topology.kind,
        "n": c.topology.n,
        "mean_degree": c.topology.mean_degree,
        "attack": c.plan.strategy,
        "a": c.plan.a,
        "p_f": c.plan.failure_rate,
        "rewiring": c.policy.strategy,
        "rewire_p": c.policy.probability,
        "trials": c.trials,
        "disconnection_prob": s.disconnection_probability,
    }
    for col, metric in _METRIC_COLUMNS.items():
        rec[f"{col}_mean"] = s.mean[metric]
        rec[f"{col}_std"] = s.std[metric]
    rec["seed"] = c.base_seed
    return {k: rec[k] for k in COLUMNS}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        # repr is the shortest string that parses back to the same double
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def to_csv(records: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_cell(r[k]) for k in COLUMNS])
    return buf.getvalue()


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def to_json(records: list[dict[str, Any]]) -> str:
    return json.dumps([{k: _json_safe(r[k]) for k in COLUMNS} for r in records], indent=2) + "\n"


def _parse_cell(key: str, cell: str) -> Any:
    if key in _STR_COLUMNS:
        return cell
    if cell == "":
        return None
    if key in _INT_COLUMNS:
        return int(cell)
    return float(cell)


def from_csv(text: str) -> list[dict[str, Any]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    return [{k: _parse_cell(k, c) for k, c in zip(COLUMNS, row)} for row in reader]


def from_json(text: str) -> list[dict[str, Any]]:
    out = []
    for r in json.loads(text):
        rec = {}
        for k in COLUMNS:
            val = r[k]
            if val is None and k not in ("a",):
                val = math.nan
            elif k in _INT_COLUMNS:
                val = int(val)
            elif k not in _STR_COLUMNS and val is not None:
                val = float(val)
            rec[k] = val
        out.append(rec)
    return out


def emit(summaries: list[CampaignSummary], fmt: str, path: str | Path | None = None) -> str:
    """Render summaries as CSV or JSON; written to ``path`` when given."""
    if not summaries:
        raise ValueError("nothing to emit")
    records = [summary_record(s) for s in summaries]
    text = to_csv(records) if fmt == "csv" else to_json(records)
    if path is not None:
        Path(path).write_text(text)
    return text


def load(path: str | Path) -> list[dict[str, Any]]:
    text = Path(path).read_text()
    return from_json(text) if text.lstrip().startswith("[") else from_csv(text)


# --- command line ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which this tool reserves for partial failures
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="overlay-siege",
        description="Run overlay robustness campaigns and write summary tables.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", metavar="FILE", help="experiment manifest")
    src.add_argument("--preset", choices=PRESETS, help="figure grid to run")
    p.add_argument("--n", type=int, help="node count for every experiment")
    p.add_argument("--trials", type=int, help="trials per experiment")
    p.add_argument("--seed", type=int, help=f"base seed (beats ${SEED_ENV})")
    p.add_argument("--format", choices=FORMATS, help="output format (default csv)")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--jobs", type=int, default=1, metavar="K", help="concurrent campaigns")
    p.add_argument("--allow-extended", action="store_true", help="permit p_f up to 1.0")
    p.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")
    return p


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            out["seed"] = int(env)
        except ValueError:
            raise ManifestError(None, f"${SEED_ENV} must be an integer, got {env!r}")
    if args.seed is not None:
        out["seed"] = args.seed
    if args.n is not None:
        out["n"] = args.n
    if args.trials is not None:
        out["trials"] = args.trials
    return out


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(message)s")
    try:
        overrides = _overrides(args)
        if args.jobs < 1:
            raise ManifestError(None, "--jobs must be >= 1")
        if args.manifest:
            try:
                text = Path(args.manifest).read_text()
            except OSError as exc:
                raise ManifestError(None, f"cannot read manifest: {exc}")
            manifest = parse_manifest(text, args.allow_extended, overrides)
        else:
            manifest = preset_manifest(args.preset, overrides, args.allow_extended)
    except ManifestError as exc:
        where = f"{args.manifest}: " if args.manifest and exc.line else ""
        print(f"overlay-siege: {where}{exc}", file=sys.stderr)
        return 1
    fmt = args.format or manifest.format
    out = args.out or manifest.output_path

    def progress(done: int, total: int, s: CampaignSummary) -> None:
        if args.quiet:
            return
        status = f"error: {s.error}" if s.error else f"P(disc)={s.disconnection_probability:.2f}"
        print(f"[{done}/{total}] {s.config.describe()} {status}", file=sys.stderr, flush=True)

    summaries = run_sweep(manifest.experiments, jobs=args.jobs, progress=progress)
    text = emit(summaries, fmt)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            print(f"overlay-siege: cannot write {out}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    failed = [s for s in summaries if s.partial]
    for s in failed:
        detail = s.error or "; ".join(s.failures)
        print(f"overlay-siege: {s.config.describe()}: {detail}", file=sys.stderr)
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
