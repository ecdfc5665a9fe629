"""Command line front end.

Exit codes: 0 success, 2 configuration/input error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from typing import List, Optional, Sequence

from . import bench
from .errors import ParkMatchError
from .matching import MAX_ENUMERATION_SIDE, enumerate_stable_matchings, is_stable, mm_match
from .scenario import EDGES_ONLY, FULL, ScenarioConfig, generate, load_scenario

EXIT_CONFIG = 2
EXIT_VERIFY = 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _matchers(text: str) -> List[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    bad = [n for n in names if n not in bench.MATCHERS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown matcher(s): {', '.join(bad)}")
    return names


def _common(p: argparse.ArgumentParser, eta: float = 0.2, hi: float = 5.0) -> None:
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds from --seed")
    p.add_argument("--drivers", type=int, default=50)
    p.add_argument("--spots", type=int, default=None, help="defaults to --drivers")
    p.add_argument("--eta", type=float, default=eta, help="edge fraction in (0, 1]")
    p.add_argument("--dist-lo", type=float, default=0.0)
    p.add_argument("--dist-hi", type=float, default=hi)
    p.add_argument("--H", dest="H", type=int, default=48, help="time slots per day")
    p.add_argument("--mode", choices=(EDGES_ONLY, FULL), default=EDGES_ONLY)
    p.add_argument("--matchers", type=_matchers, default=list(bench.MATCHERS))
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parkmatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a seeded scenario as JSON")
    _common(p)

    p = sub.add_parser("match", help="run matchers on one scenario")
    _common(p)
    p.add_argument("--scenario", default=None, help="scenario or record JSON file")

    p = sub.add_parser("sweep-size", help="total distance as the market grows")
    _common(p)
    p.add_argument("--sizes", type=_ints, default=list(range(50, 501, 50)))
    p.add_argument("--summary", default=None, help="also write seed-means to this CSV")

    p = sub.add_parser("sweep-density", help="metrics as the edge fraction varies")
    _common(p, hi=100.0)
    p.add_argument("--etas", type=_floats,
                   default=[0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    p.add_argument("--summary", default=None, help="also write seed-means to this CSV")

    p = sub.add_parser("time", help="median wall time per matcher and size")
    _common(p)
    p.add_argument("--sizes", type=_ints, default=[100, 200, 300, 400, 500])
    p.add_argument("--repeats", type=int, default=1)

    p = sub.add_parser("verify", help="stability and oracle checks for MM")
    _common(p)
    p.add_argument("--scenario", default=None, help="scenario or record JSON file")
    return parser


def _seeds(args) -> List[int]:
    if args.seeds < 1:
        raise _Fail(EXIT_CONFIG, "--seeds must be >= 1")
    return list(range(args.seed, args.seed + args.seeds))


def _config(args, seed: Optional[int] = None) -> ScenarioConfig:
    return ScenarioConfig(
        num_drivers=args.drivers,
        num_spots=args.spots if args.spots is not None else args.drivers,
        edge_fraction=args.eta,
        distance_range=(args.dist_lo, args.dist_hi),
        seed=args.seed if seed is None else seed,
        H=args.H,
        constraint_mode=args.mode,
    )


def _scenario(args):
    if getattr(args, "scenario", None):
        return load_scenario(args.scenario)
    return generate(_config(args))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _metrics_json(rows) -> list:
    out = []
    for r in rows:
        d = asdict(r)
        d["pairs"] = [list(p) for p in r.pairs]
        d.pop("config")
        out.append(d)
    return out


def cmd_generate(args) -> int:
    _emit(generate(_config(args)).to_json() + "\n", args.out)
    return 0


def cmd_match(args) -> int:
    s = _scenario(args)
    rows = bench.run_matchers(s, args.matchers, _seeds(args))
    if (args.format or "json") == "csv":
        _emit(bench.to_csv(rows), args.out)
    else:
        config = s.config.to_dict() if s.config else None
        _emit(_json({"config": config, "results": _metrics_json(rows)}), args.out)
    return 0


def _sweep_out(args, rows, key) -> int:
    if (args.format or "csv") == "json":
        _emit(_json({"rows": _metrics_json(rows), "summary": bench.aggregate(rows, key)}), args.out)
    else:
        _emit(bench.to_csv(rows), args.out)
    if args.summary:
        summary = bench.aggregate(rows, key)
        cols = list(summary[0]) if summary else [key, "matcher"]
        with open(args.summary, "w", encoding="utf-8", newline="") as fh:
            fh.write(bench.to_csv(summary, cols))
    return 0


def cmd_sweep_size(args) -> int:
    if any(n < 1 for n in args.sizes):
        raise _Fail(EXIT_CONFIG, "sizes must be positive")
    _config(args)  # validate shared flags early
    rows = bench.sweep_size(args.sizes, args.eta, (args.dist_lo, args.dist_hi),
                            _seeds(args), args.matchers, args.mode, args.H)
    return _sweep_out(args, rows, "drivers")


def cmd_sweep_density(args) -> int:
    for eta in args.etas:
        if not 0 < eta <= 1:
            raise _Fail(EXIT_CONFIG, f"eta {eta} outside (0, 1]")
    rows = bench.sweep_density(args.etas, args.drivers, (args.dist_lo, args.dist_hi),
                               _seeds(args), args.matchers, args.mode, args.H)
    return _sweep_out(args, rows, "eta")


def cmd_time(args) -> int:
    if args.sizes != sorted(args.sizes):
        raise _Fail(EXIT_CONFIG, "--sizes must be nondecreasing")
    _config(args)
    rows = bench.time_matchers(args.sizes, args.eta, _seeds(args), args.matchers,
                               (args.dist_lo, args.dist_hi), args.repeats)
    if (args.format or "csv") == "json":
        _emit(_json([r.row() for r in rows]), args.out)
    else:
        _emit(bench.to_csv(rows, bench.TIMING_COLUMNS), args.out)
    return 0


def verify_scenario(s) -> list:
    """Checks on MM output; oracle checks only when the instance is small."""
    prep = bench.Prepared.of(s)
    dl, sl = prep.driver_lists, prep.spot_lists
    m, trace = mm_match(dl, sl)
    bound = len(s.drivers) * len(s.spots)
    checks = [
        {"check": "no_blocking_pairs", "passed": is_stable(m, dl, sl)},
        {"check": "proposal_bound", "passed": trace.proposal_count <= bound,
         "detail": f"{trace.proposal_count} <= {bound}"},
    ]
    if len(dl) <= MAX_ENUMERATION_SIDE and len(sl) <= MAX_ENUMERATION_SIDE:
        stable = enumerate_stable_matchings(dl, sl)
        matched_sets = {frozenset(d for d, _ in x.pairs) for x in stable}
        mine = m.spot_of()
        optimal = all(
            not any(dl[d].prefers(p, mine.get(d)) for d, p in x.pairs)
            for x in stable
        )
        checks += [
            {"check": "oracle_contains_output", "passed": m in stable},
            {"check": "oracle_matched_set", "passed": matched_sets == {frozenset(mine)}},
            {"check": "driver_optimal", "passed": optimal},
        ]
    return checks


def cmd_verify(args) -> int:
    checks = verify_scenario(_scenario(args))
    ok = all(c["passed"] for c in checks)
    _emit(_json({"passed": ok, "checks": checks}), args.out)
    return 0 if ok else EXIT_VERIFY


COMMANDS = {
    "generate": cmd_generate,
    "match": cmd_match,
    "sweep-size": cmd_sweep_size,
    "sweep-density": cmd_sweep_density,
    "time": cmd_time,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except _Fail as exc:
        print(f"parkmatch: {exc}", file=sys.stderr)
        return exc.code
    except (ParkMatchError, ValueError, OSError) as exc:
        print(f"parkmatch: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
