"""Command-line entry point.

    simulate run --scenario FILE [--seed N] [--out DIR]
    simulate sweep --scenario FILE --param PATH --values START:STOP:STEPS
                   [--log] [--jobs N] --out DIR
    simulate presets --list

`--scenario` accepts a path or `preset:NAME`.  Outputs land in the --out
directory: metrics.csv, scenario.resolved, and key.bin/key.txt when key
extraction ran.  Exit codes: 0 success, 2 validation failure, 3 runtime
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .presets import PRESET_NAMES, preset_text
from .runner import emit_csv, run_scenario, run_sweep, point_seed
from .scenario import ScenarioError, parse_scenario, parse_sweeps

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _load(scenario_arg: str):
    if scenario_arg.startswith("preset:"):
        text = preset_text(scenario_arg.split(":", 1)[1])
    else:
        text = Path(scenario_arg).read_text()
    return parse_scenario(text), parse_sweeps(text)


def _write_outputs(out_dir: Path, scenario, rows, key_result=None):
    out_dir.mkdir(parents=True, exist_ok=True)
    emit_csv(rows, out_dir / "metrics.csv")
    (out_dir / "scenario.resolved").write_text(scenario.to_text())
    if key_result is not None and len(key_result.final_key):
        np.packbits(key_result.final_key).tofile(out_dir / "key.bin")
        (out_dir / "key.txt").write_text(
            "frames_total={}\nframes_failed={}\nfer={}\nleaked_bits={}\n"
            "beta_achieved={}\nskf={}\nkey_bits={}\nkeys_match={}\n".format(
                key_result.frames_total, key_result.frames_failed,
                key_result.fer, key_result.leaked_bits,
                key_result.beta_achieved, key_result.skf,
                len(key_result.final_key), key_result.keys_match))


def cmd_run(args) -> int:
    scenario, sweeps = _load(args.scenario)
    if args.seed is not None:
        scenario = scenario.with_override("run", "master_seed", args.seed)
    scenario.require_valid()
    rows = []
    key_result = None
    if sweeps:
        for sw in sweeps:
            rows.extend(run_sweep(scenario, sw.param, sw.values, jobs=args.jobs))
    else:
        extras = {}
        rows.append(run_scenario(scenario, extras=extras))
        key_result = extras.get("key_result")
    _write_outputs(Path(args.out), scenario, rows, key_result)
    for row in rows:
        print(f"{row.label} {row.sweep_param}={row.sweep_value}: "
              f"T_eff={row.t_eff:.5f} xi={row.xi_hat:.5f} "
              f"I_AB={row.i_ab:.4f} chi={row.chi_eb:.4f}")
    return EXIT_OK


def _parse_values(spec: str, log: bool):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("--values expects START:STOP:STEPS")
    start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if log:
        return np.geomspace(start, stop, steps)
    return np.linspace(start, stop, steps)


def cmd_sweep(args) -> int:
    scenario, _ = _load(args.scenario)
    if args.seed is not None:
        scenario = scenario.with_override("run", "master_seed", args.seed)
    scenario.require_valid()
    values = _parse_values(args.values, args.log)
    rows = run_sweep(scenario, args.param, values, jobs=args.jobs)
    _write_outputs(Path(args.out), scenario, rows)
    for row in rows:
        print(f"{row.sweep_param}={row.sweep_value:g}: T_eff={row.t_eff:.5f} "
              f"xi={row.xi_hat:.5f}")
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.list:
        for name in PRESET_NAMES:
            print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simulate",
                                 description="CV-QKD link simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario (with its bundled sweeps, if any)")
    p_run.add_argument("--scenario", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default="out")
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one scenario parameter")
    p_sweep.add_argument("--scenario", required=True)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--values", required=True,
                         help="START:STOP:STEPS (linear; --log for geometric)")
    p_sweep.add_argument("--log", action="store_true")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--out", default="out")
    p_sweep.set_defaults(func=cmd_sweep)

    p_presets = sub.add_parser("presets", help="preset management")
    p_presets.add_argument("--list", action="store_true")
    p_presets.set_defaults(func=cmd_presets)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, FileNotFoundError, KeyError, ValueError) as err:
        print(f"validation error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as err:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
