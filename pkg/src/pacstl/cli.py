"""Command-line entry points.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure,
4 acceptance-check failure (``--check``).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from pacstl.errors import ConfigError, InputError, NumericalError
from pacstl.geomsets import Ellipsoid, Zonotope

log = logging.getLogger("pacstl")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4

DEFAULTS = {
    "duffing": {"N": 1500, "M": 1500, "beta": 1e-9, "seed": 0, "n_seeds": 1, "refine_iters": 200,
                "boundary_points": 200},
    "fit-tube": {"vessel": "L", "buckets": [1, 2, 3, 4], "rep": "ellipsoid", "N": 1500, "M": 1500, "beta": 1e-9,
                 "seed": 0, "dt": 0.5, "horizon": 5, "refine_iters": 0},
    "run-scenario": {"scenario": "head_on", "pairing": "S-L", "t_h": 10.0, "seeds": 10, "seed": 0,
                     "tube_dir": "tubes", "rep": "ellipsoid", "mode": "timepoint", "monitor_hz": 0.6, "dt": 0.1,
                     "max_time": 40.0, "jobs": 1, "write_runs": True},
    "baseline": {"vessel": "L", "buckets": [1, 2, 3, 4], "tube_dir": "tubes", "rep": "ellipsoid", "n_ego": 10,
                 "seed": 0, "N": 1500, "M": 1500, "kind": "head_on"},
    "eval": {"tube": None, "ego": None, "other_pose": [0.0, 0.0, 0.0], "spec": "head_on", "t_h": 10.0,
             "mode": "timepoint"},
    "validate": {"paths": []},
}

# acceptance bands used by --check
DUFFING_BANDS = {
    "ellipsoid": {"eps": (0.012, 0.035), "volume": (19.636 * 0.85, 19.636 * 1.15)},
    "zonotope_identity": {"eps": (0.008, 0.035), "volume": (21.022 * 0.85, 21.022 * 1.15)},
    "zonotope_four": {"volume": (27.215 * 0.75, 27.215 * 1.25)},
}
TUBE_EPS_BAND = (0.02, 0.08)
BASELINE_EPS_GAP = 0.06


def load_config(command: str, path: str | None, overrides: dict) -> dict:
    """Defaults, then the JSON file, then flag overrides; unknown keys raise ``ConfigError``."""
    cfg = dict(DEFAULTS[command])
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        # resolved snapshots carry the command name; accept them for their own command only
        snap = data.pop("command", command)
        if snap != command:
            raise ConfigError(f"config snapshot is for {snap!r}, not {command!r}")
        unknown = sorted(set(data) - set(cfg))
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {unknown}")
        cfg.update(data)
    for k, v in overrides.items():
        if v is None:
            continue
        if k not in cfg:
            raise ConfigError(f"option --{k} does not apply to {command}")
        cfg[k] = v
    return cfg


def _write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, default=_json_default))


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _in(v, band) -> bool:
    return band[0] <= v <= band[1]


def boundary_points(s, n: int) -> np.ndarray:
    """Points on the boundary of a planar set, ordered by angle."""
    th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    d = np.stack([np.cos(th), np.sin(th)], axis=1)
    if isinstance(s, Ellipsoid):
        return np.linalg.solve(s.A, (d + s.b).T).T
    if isinstance(s, Zonotope):
        return s.c + np.sign(d @ s.G) @ s.G.T
    raise InputError(f"unsupported set {type(s).__name__}")


# commands ---------------------------------------------------------------------------------------------------

def cmd_duffing(cfg: dict, out: Path) -> tuple[dict, bool]:
    from pacstl.reach import build_tube
    from pacstl.sim import G0_FOUR, G0_IDENTITY, DuffingStepper, duffing_sample_spec

    variants = {
        "ellipsoid": dict(rep="ellipsoid"),
        "zonotope_four": dict(rep="zonotope", G0=G0_FOUR, refine_iters=cfg["refine_iters"]),
        "zonotope_identity": dict(rep="zonotope", G0=G0_IDENTITY),
    }
    sim = DuffingStepper()
    per_seed = {k: [] for k in variants}
    last = {}
    for i in range(cfg["n_seeds"]):
        spec = duffing_sample_spec(cfg["N"], cfg["M"], cfg["seed"] + i)
        for name, kw in variants.items():
            t0 = time.perf_counter()
            tube = build_tube(sim, spec, beta=cfg["beta"], steps=[1], **kw)
            s = tube.sets[0]
            per_seed[name].append({"eps": tube.eps_tube, "volume": s.volume(), "seconds": time.perf_counter() - t0})
            last[name] = s
    report = {}
    for name, rows in per_seed.items():
        report[name] = {"eps": float(np.mean([r["eps"] for r in rows])),
                        "volume": float(np.mean([r["volume"] for r in rows])),
                        "per_seed": rows}
    _write_json(out / "duffing_report.json", report)
    with (out / "duffing_boundary.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["set", "x", "y"])
        for name, s in last.items():
            for x, y in boundary_points(s, cfg["boundary_points"]):
                w.writerow([name, f"{x:.6g}", f"{y:.6g}"])
    ok = all(_in(report[name][k], band) for name, bands in DUFFING_BANDS.items() for k, band in bands.items())
    for name, r in report.items():
        print(f"{name:18s} eps={r['eps']:.4f} volume={r['volume']:.3f}")
    return report, ok


def _tube_path(tube_dir, vessel: str, rep: str, bucket: int) -> Path:
    return Path(tube_dir) / f"{vessel}_{rep}_U{bucket}.json"


def cmd_fit_tube(cfg: dict, out: Path) -> tuple[dict, bool]:
    from pacstl.maritime import BUCKETS, build_bucket_tube

    report, ok = {}, True
    rows = []
    for b in cfg["buckets"]:
        if not 1 <= int(b) <= len(BUCKETS):
            raise ConfigError(f"bucket must be in 1..{len(BUCKETS)}, got {b}")
        tube = build_bucket_tube(cfg["vessel"], int(b), cfg["rep"], N=cfg["N"], M=cfg["M"], seed=cfg["seed"],
                                 beta=cfg["beta"], dt=cfg["dt"], horizon=cfg["horizon"],
                                 refine_iters=cfg["refine_iters"])
        path = _tube_path(out, cfg["vessel"], cfg["rep"], int(b))
        tube.save(path)
        report[f"U{b}"] = {"path": str(path), "eps_tube": tube.eps_tube, "eps_t": list(tube.eps_t)}
        rows += [(b, "tube", tube.eps_tube)] + [(b, s, e) for s, e in zip(tube.steps, tube.eps_t)]
        print(f"U{b}: eps_tube={tube.eps_tube:.4f} eps_t=" + " ".join(f"{e:.4f}" for e in tube.eps_t))
        ok &= _in(tube.eps_tube, TUBE_EPS_BAND) and max(tube.eps_t) <= tube.eps_tube
    with (out / "eps_table.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bucket", "step", "eps"])
        w.writerows(rows)
    _write_json(out / "fit_report.json", report)
    return report, ok


def load_bank(tube_dir, vessel: str, rep: str):
    from pacstl.maritime import BUCKETS, TubeBank
    from pacstl.reach import ReachTube

    tubes = []
    for b in range(1, len(BUCKETS) + 1):
        path = _tube_path(tube_dir, vessel, rep, b)
        if not path.exists():
            raise ConfigError(f"missing tube for bucket U{b} of vessel {vessel}: {path}")
        tubes.append(ReachTube.load(path))
    return TubeBank(tubes)


def _scenario_job(args):
    from pacstl.maritime import ScenarioConfig, run_scenario

    cfg_kw, tube_dir, rep = args
    cfg = ScenarioConfig(**cfg_kw)
    bank = load_bank(tube_dir, cfg.other_kind, rep)
    return run_scenario(cfg, bank)


def cmd_run_scenario(cfg: dict, out: Path) -> tuple[dict, bool]:
    from pacstl.maritime import ScenarioConfig, aggregate

    seeds = list(range(cfg["seed"], cfg["seed"] + cfg["seeds"])) if isinstance(cfg["seeds"], int) else cfg["seeds"]
    keys = ("scenario", "pairing", "t_h", "mode", "monitor_hz", "dt", "max_time")
    jobs = []
    for s in seeds:
        kw = {k: cfg[k] for k in keys}
        kw["seed"] = int(s)
        ScenarioConfig(**kw)
        jobs.append((kw, cfg["tube_dir"], cfg["rep"]))
    if jobs:
        load_bank(cfg["tube_dir"], cfg["pairing"].split("-")[1], cfg["rep"])
    if cfg["jobs"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as ex:
            runs = list(ex.map(_scenario_job, jobs))
    else:
        runs = [_scenario_job(j) for j in jobs]
    if cfg["write_runs"]:
        for r in runs:
            r.write(out / "runs", f"{cfg['scenario']}_{cfg['pairing']}_th{cfg['t_h']:g}_seed{r.config.seed}")
    summary = aggregate(runs)
    summary["seeds"] = seeds
    _write_json(out / "scenario_summary.json", summary)
    print(json.dumps({k: summary[k] for k in ("n_runs", "n_triggered", "n_collisions", "mean_t_e")}))
    return summary, True


def cmd_baseline(cfg: dict, out: Path) -> tuple[dict, bool]:
    from pacstl.maritime import run_baseline
    from pacstl.reach import ReachTube

    report, ok = {}, True
    for b in cfg["buckets"]:
        path = _tube_path(cfg["tube_dir"], cfg["vessel"], cfg["rep"], int(b))
        if not path.exists():
            raise ConfigError(f"missing tube for bucket U{b}: {path}")
        res = run_baseline(ReachTube.load(path), cfg["vessel"], int(b), cfg["n_ego"], cfg["seed"], cfg["N"],
                           cfg["M"], cfg["kind"])
        report[f"U{b}"] = res
        spec = res["summary"][cfg["kind"]]
        gap = spec["mean_eps_pac"] - spec["mean_eps_direct"]
        contained = all(v["all_contained"] for v in res["summary"].values())
        ok &= contained and gap <= BASELINE_EPS_GAP
        print(f"U{b}: contained={contained} eps_pac={spec['mean_eps_pac']:.4f} "
              f"eps_direct={spec['mean_eps_direct']:.4f} gap={gap:.4f}")
    _write_json(out / "baseline_report.json", report)
    return report, ok


def cmd_eval(cfg: dict, out: Path) -> tuple[dict, bool]:
    from pacstl.istl import attach_guarantee, evaluate, parse
    from pacstl.maritime import ENCOUNTERS, EncounterParams, atomic_signals, encounter_atomics, tube_frame_transform
    from pacstl.maritime.rules import build_encounter_spec
    from pacstl.reach import ReachTube
    from pacstl.robustness import EgoState, RuleParams

    if not cfg["tube"] or cfg["ego"] is None:
        raise ConfigError("eval needs 'tube' (path) and 'ego' (list of [p_x, p_y, psi, v_x, v_y] per tube step)")
    tube = ReachTube.load(cfg["tube"])
    tube = tube.transported(*tube_frame_transform(cfg["other_pose"]))
    ego = [EgoState.from_velocity(e[:2], e[2], e[3:5]) for e in np.asarray(cfg["ego"], dtype=float)]
    rule = RuleParams(t_h=cfg["t_h"])
    atomics = {}
    for k in ENCOUNTERS:
        atomics.update(encounter_atomics(k, EncounterParams.default(k, rule)))
    if cfg["spec"] in ENCOUNTERS:
        spec = build_encounter_spec(cfg["spec"], EncounterParams.default(cfg["spec"], rule))
    else:
        spec = parse(cfg["spec"])
    missing = sorted(set(spec.atomics()) - set(atomics))
    if missing:
        raise ConfigError(f"formula uses unknown atomics {missing}; known: {sorted(atomics)}")
    sig = atomic_signals(ego, tube, {n: atomics[n] for n in spec.atomics()}, rule)
    res = attach_guarantee(evaluate(spec, sig, 0), tube, cfg["mode"], offset=tube.steps[0])
    report = {"spec": str(spec), "interval": [res.lo, res.hi], "t_low": res.t_low, "t_up": res.t_up,
              "eps": res.eps, "beta": res.beta, "mode": res.mode}
    _write_json(out / "eval.json", report)
    print(json.dumps(report))
    return report, True


def cmd_validate(cfg: dict, out: Path) -> tuple[dict, bool]:
    from pacstl.schemas import validate_file

    paths = []
    for p in cfg["paths"]:
        p = Path(p)
        paths += sorted(q for q in p.rglob("*") if q.suffix in (".json", ".csv")) if p.is_dir() else [p]
    report, ok = {}, True
    for p in paths:
        if p.name == "config.json":
            continue
        try:
            report[str(p)] = validate_file(p)
        except InputError as exc:
            report[str(p)] = f"invalid: {exc}"
            ok = False
        print(f"{p}: {report[str(p)]}")
    return report, ok


COMMANDS = {
    "duffing": cmd_duffing, "fit-tube": cmd_fit_tube, "run-scenario": cmd_run_scenario,
    "baseline": cmd_baseline, "eval": cmd_eval, "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pacstl", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file with command options")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--check", action="store_true", help="exit 4 when results leave the acceptance bands")
        if name in ("fit-tube", "run-scenario", "baseline"):
            sp.add_argument("--rep", choices=("ellipsoid", "zonotope"))
        if name in ("run-scenario", "eval"):
            sp.add_argument("--mode", choices=("tube", "timepoint"))
        if name == "validate":
            sp.add_argument("paths", nargs="*")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {"seed": args.seed, "rep": getattr(args, "rep", None), "mode": getattr(args, "mode", None)}
    if args.command == "validate":
        overrides = {"paths": args.paths or None}
    try:
        cfg = load_config(args.command, args.config, overrides)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command != "validate":
            _write_json(out / "config.json", {"command": args.command, **cfg})
        _, ok = COMMANDS[args.command](cfg, out)
    except (ConfigError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.check and not ok:
        print("acceptance check failed", file=sys.stderr)
        return EXIT_CHECK
    if args.command == "validate" and not ok:
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
