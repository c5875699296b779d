"""Command-line front end: figure and table data as CSV/JSON.

Examples::

    xxquench entropy --n 51 --profile pst --times 0:60:0.1 --out entropy.csv
    xxquench fef --n 25 --profile minimal --times 0:25:0.05 --out fef.csv
    xxquench optimize --n 50:1000:50 --out opt.csv
    xxquench noise --noise nmr --n 5 --eps 0,0.05,0.1 --realizations 100 --seed 1 --out nmr.csv
    xxquench verify --n 6 --out verify.json
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .chain import NoiseConfig, NoiseVariant, ProfileKind, build_profile, hopping_matrix
from .checks import verify_report
from .entanglement import end_pair_state, fully_entangled_fraction
from .fermions import block_entropy, diagonalize, initial_state_spec, quench_correlations
from .optimizer import Scenario, ensemble_run, optimal_boundary_coupling

DEFAULTS = {
    "n": "10", "profile": "pst", "init": "neel", "boundary": None, "times": "0:10:0.1",
    "noise": "nmr", "eps": "0", "gamma": "0", "jz": "0", "realizations": 100, "seed": 0,
    "out": None, "format": "csv",
}


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop inclusive when it lands on the grid) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return start + step * np.arange(n)
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}; use start:stop:step or a,b,c") from None


def _profile(args, N):
    kind = ProfileKind(args.profile)
    if kind is ProfileKind.MINIMALLY_ENGINEERED:
        b = args.boundary if args.boundary is not None else (
            optimal_boundary_coupling(N).j_opt if N >= 3 else 0.5)
        return build_profile(kind, N, float(b))
    return build_profile(kind, N)


def _out(args, default):
    return Path(args.out or default)


def _emit(args, command, rows, params, seed=None):
    out = _out(args, f"{command}.{args.format}")
    if args.format == "json":
        header = io.CSV_SCHEMAS[command][1]
        io.write_json(out, {"schema": io.CSV_SCHEMAS[command][0], "rows": [dict(zip(header, r)) for r in rows]})
    else:
        io.write_csv(out, command, rows)
    io.write_manifest(out, command, params, [out], seed)
    return out


def cmd_entropy(args):
    N = int(args.n)
    p = _profile(args, N)
    spec = diagonalize(hopping_matrix(p))
    init = initial_state_spec(args.init, N)
    block = range(N // 2)
    rows = [(t, block_entropy(quench_correlations(spec, init, t), block)) for t in parse_grid(args.times)]
    return _emit(args, "entropy", rows, {"n": N, "profile": p.to_dict(), "init": args.init, "times": args.times})


def cmd_fef(args):
    N = int(args.n)
    p = _profile(args, N)
    spec = diagonalize(hopping_matrix(p))
    init = initial_state_spec(args.init, N)
    rows = [(t, fully_entangled_fraction(end_pair_state(quench_correlations(spec, init, t), init)))
            for t in parse_grid(args.times)]
    return _emit(args, "fef", rows, {"n": N, "profile": p.to_dict(), "init": args.init, "times": args.times})


def cmd_optimize(args):
    rows = []
    for N in parse_grid(args.n):
        r = optimal_boundary_coupling(int(N))
        rows.append((r.N, r.j_opt, r.f_max, r.t_star, r.F))
    return _emit(args, "optimize", rows, {"n": args.n})


def cmd_noise(args):
    N = int(args.n)
    p = _profile(args, N)
    variant = NoiseVariant(args.noise)
    key = {NoiseVariant.NMR_FILTER: "eps", NoiseVariant.DEPHASING: "gamma",
           NoiseVariant.XXZ_ANISOTROPY: "jz"}.get(variant)
    values = parse_grid(getattr(args, key)) if key else [0.0]
    rows = []
    for v in values:
        kw = {key: float(v)} if key else {}
        cfg = NoiseConfig(variant, seed=int(args.seed), **kw)
        s = ensemble_run(Scenario(p, args.init), cfg, int(args.realizations), int(args.seed))
        for k, (m, e) in enumerate(zip(s.mean, s.stderr)):
            rows.append((variant.value, float(v), k + 1, float(np.mean(s.t_prime)), float(m), float(e)))
    params = {"n": N, "profile": p.to_dict(), "noise": variant.value, "values": list(map(float, values)),
              "realizations": int(args.realizations), "init": args.init}
    return _emit(args, "noise", rows, params, seed=int(args.seed))


def cmd_verify(args):
    N = int(args.n)
    report = verify_report(N, int(args.seed))
    out = _out(args, "verify.json")
    io.write_json(out, report)
    io.write_manifest(out, "verify", {"n": N}, [out], int(args.seed))
    if not report["all_pass"]:
        print("verification failed", file=sys.stderr)
    return out


COMMANDS = {"entropy": cmd_entropy, "fef": cmd_fef, "optimize": cmd_optimize,
            "noise": cmd_noise, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xxquench", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON file of option values; explicit flags take precedence")
    ap.add_argument("--n", help="number of sites (optimize: start:stop:step or list)")
    ap.add_argument("--profile", choices=[k.value for k in ProfileKind])
    ap.add_argument("--init", choices=["neel", "fm-dq", "bell-series"])
    ap.add_argument("--boundary", type=float, help="end coupling j' (minimal profile; default: optimal)")
    ap.add_argument("--times", help="time grid start:stop:step in units of 1/J")
    ap.add_argument("--noise", choices=[v.value for v in NoiseVariant])
    ap.add_argument("--eps", help="NMR error strengths (grid)")
    ap.add_argument("--gamma", help="dephasing rates (grid)")
    ap.add_argument("--jz", help="zz anisotropy in units of j_n (grid)")
    ap.add_argument("--realizations", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=["csv", "json"])
    return ap


def resolve(argv=None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    config = io.read_json(args.config) if args.config else {}
    unknown = set(config) - set(DEFAULTS)
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    for key, default in DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, config.get(key, default))
    for key in ("n", "eps", "gamma", "jz", "times"):
        setattr(args, key, str(getattr(args, key)))
    return args


def main(argv=None) -> int:
    args = resolve(argv)
    try:
        out = COMMANDS[args.command](args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
