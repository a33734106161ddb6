"""Command line: ``sfbandit run | verify | bench``.

Options may also come from a JSON file passed with ``--config``; explicit
flags override values from the file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .adversaries import KINDS, AdversaryConfig, InvalidConfigError
from .harness import OUT_DIR_ENV, POLICIES, Policy, default_out_dir, emit, run_experiment

RUN_DEFAULTS = {
    "policy": "scale-free-opt1",
    "adversary": "bernoulli-gap",
    "T": 1024,
    "n": 10,
    "seeds": "0-9",
    "adversary_seed": 0,
    "gap": 0.3,
    "k": 1,
    "magnitude": 1.0,
    "density": 1.0,
    "period": 100,
    "scale": 1.0,
    "G": None,
    "workers": 1,
    "out_dir": None,
}


def parse_seeds(text) -> list[int]:
    """``"0-4,9"`` -> ``[0, 1, 2, 3, 4, 9]``; lists of ints pass through."""
    if isinstance(text, (list, tuple)):
        return [int(s) for s in text]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sfbandit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replicated regret experiment")
    run.add_argument("--config", type=Path, help="JSON file with run options")
    run.add_argument("--policy", choices=POLICIES + ("opt1", "opt2"))
    run.add_argument("--adversary", choices=[k for k in KINDS if k != "rescaled"])
    run.add_argument("--T", type=int)
    run.add_argument("--n", type=int)
    run.add_argument("--seeds", help="player seeds, e.g. 0-19 or 1,5,9")
    run.add_argument("--adversary-seed", dest="adversary_seed", type=int)
    run.add_argument("--gap", type=float)
    run.add_argument("--k", type=int)
    run.add_argument("--magnitude", type=float)
    run.add_argument("--density", type=float)
    run.add_argument("--period", type=int)
    run.add_argument("--scale", type=float, help="multiply every loss by this factor")
    run.add_argument("--G", type=float, help="loss range assumed by exp3")
    run.add_argument("--workers", type=int)
    run.add_argument("--out-dir", dest="out_dir", type=Path,
                     help=f"output directory (default ${OUT_DIR_ENV} or ./results)")

    ver = sub.add_parser("verify", help="run the numerical property suites")
    ver.add_argument("--seed", type=int, default=0)

    bench = sub.add_parser("bench", help="time the per-round solver cost")
    bench.add_argument("--n", type=int, nargs="+", default=[2, 10, 100])
    bench.add_argument("--rounds", type=int, default=2000)
    bench.add_argument("--seed", type=int, default=0)
    return ap


def resolve_run_options(args: argparse.Namespace) -> dict:
    opts = dict(RUN_DEFAULTS)
    if args.config is not None:
        try:
            from_file = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SystemExit(f"cannot read config {args.config}: {exc}")
        unknown = set(from_file) - set(opts)
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        opts.update(from_file)
    for key in RUN_DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _cmd_run(args) -> int:
    o = resolve_run_options(args)
    try:
        cfg = AdversaryConfig(o["adversary"], int(o["n"]), int(o["T"]), int(o["adversary_seed"]),
                              gap=o["gap"], k=o["k"], magnitude=o["magnitude"],
                              density=o["density"], period=o["period"])
        if o["scale"] != 1.0:
            cfg = AdversaryConfig.rescale(cfg, float(o["scale"]))
        policy = Policy.parse(o["policy"], o["G"])
    except (InvalidConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary, records = run_experiment(policy, cfg, parse_seeds(o["seeds"]), workers=int(o["workers"]))
    out = Path(o["out_dir"]) if o["out_dir"] is not None else default_out_dir()
    paths = emit(summary, records, out)
    print(f"{summary.policy}: mean regret {summary.mean_regret:.4g} +- {summary.stderr:.2g} "
          f"over {len(summary.seeds)} seeds; regret/bound {summary.ratio_T:.3g} (T), "
          f"{summary.ratio_L1:.3g} (L1)")
    print(f"wrote {len(paths)} files to {out}")
    return 0


def _cmd_verify(args) -> int:
    from .checks import run_all

    results = run_all(args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:34s} {r.detail}  ({r.seconds:.2f}s)")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _cmd_bench(args) -> int:
    from .bandit import BanditState, play_round

    rng = np.random.default_rng(args.seed)
    for n in args.n:
        losses = (rng.random((args.rounds, n)) < 0.5).astype(float)
        state = BanditState.start(n, "adaptive", seed=args.seed)
        t0 = time.perf_counter()
        for row in losses:
            state, _ = play_round(state, row)
        dt = (time.perf_counter() - t0) / args.rounds
        print(f"n={n:5d}  {dt * 1e6:8.1f} us/round  ({args.rounds} rounds)")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "verify": _cmd_verify, "bench": _cmd_bench}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
