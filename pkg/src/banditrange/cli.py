"""Command-line front end.

Subcommands: ``gen`` (write an instance file), ``geom`` (hitting set and
slabs), ``skyline`` (one skyline call with optional trace file), ``solve``
(full range search to an answers file), ``verify`` (oracle verdicts for an
answers file), and ``bench`` (trial batches with success statistics).  All
I/O is JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import Bandit, Interval, load_instance, save_instance
from .errors import BanditRangeError
from .experiments import (
    ExperimentConfig,
    compare_sample_complexity,
    render_table,
    run_experiment,
)
from .generators import (
    lower_bound_instance_1d,
    lower_bound_instance_dd,
    random_instance,
)
from .geometry import build_slabs, min_hitting_set
from .oracles import check_eps_optimal, check_eps_pareto
from .search import AnswerSet, max_range_search, naive_range_search, pareto_range_search
from .skyline import left_skyline, right_skyline

_BEST_FLAGS = {"median-elim": "median_elimination", "naive": "naive"}


def _parse_interval(text: str) -> Interval:
    left, right = (float(part) for part in text.split(","))
    return Interval(left, right)


def _write_json(path: str | None, data: dict) -> None:
    text = json.dumps(data, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_gen(args) -> int:
    if args.type == "random":
        instance = random_instance(args.n, args.q, args.d, args.seed, args.kind)
    elif args.type == "lb1d":
        instance, _ = lower_bound_instance_1d(args.m, args.eps, args.tau, args.seed)
    else:
        instance, _ = lower_bound_instance_dd(
            args.m, args.eps, args.tau, args.d, args.seed
        )
    save_instance(args.out, instance)
    print(
        json.dumps(
            {"written": args.out, "n": instance.n, "q": instance.q, "dimension": instance.dimension}
        )
    )
    return 0


def _cmd_geom(args) -> int:
    instance = load_instance(args.instance)
    hs = min_hitting_set(instance.intervals)
    out = {"points": list(hs.points), "tau": hs.size}
    if args.action == "slabs" or args.slabs:
        decomposition = build_slabs(hs, intervals=instance.intervals)
        out["slabs"] = [[s.left, s.right] for s in decomposition.slabs]
    print(json.dumps(out))
    return 0


def _cmd_skyline(args) -> int:
    instance = load_instance(args.instance)
    bandit = Bandit(instance, args.seed)
    interval = _parse_interval(args.interval)
    compute = left_skyline if args.side == "left" else right_skyline
    ids, estimates, trace = compute(bandit, interval, args.eps, args.delta)
    result = {
        "side": args.side,
        "eps": args.eps,
        "delta": args.delta,
        "seed": args.seed,
        "arms": sorted(ids),
        "estimates": {str(a): estimates[a].to_json() for a in sorted(ids)},
        "total_pulls": bandit.ledger.total,
    }
    if args.trace:
        _write_json(args.trace, {"schema": 1, **result, "trace": trace.to_json()})
    print(json.dumps(result))
    return 0


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    bandit = Bandit(instance, args.seed)
    if args.algo == "alg-rs":
        answers = max_range_search(bandit, args.eps, args.delta, _BEST_FLAGS[args.best])
    elif args.algo == "alg-d-rs":
        answers = pareto_range_search(bandit, args.eps, args.delta)
    else:
        answers = naive_range_search(bandit, args.eps, args.delta)
    payload = answers.to_json()
    payload.update({"algorithm": args.algo, "eps": args.eps, "delta": args.delta, "seed": args.seed})
    _write_json(args.out, payload)
    if args.out:
        print(json.dumps({"written": args.out, "total_pulls": answers.total_pulls}))
    return 0


def _cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    with open(args.answers) as fh:
        payload = json.load(fh)
    mode = payload["mode"]
    verdicts = []
    all_ok = True
    for idx, interval in enumerate(instance.intervals):
        answer = payload["answers"][idx]
        if answer is None:
            verdicts.append({"interval": idx, "ok": None, "note": "no arms"})
            continue
        if mode == "max":
            verdict = check_eps_optimal(instance, interval, answer, args.eps)
        else:
            verdict = check_eps_pareto(instance, interval, set(answer), args.eps)
        verdicts.append(
            {
                "interval": idx,
                "ok": verdict.ok,
                "witness": None if verdict.ok else list(map(str, verdict.witness)),
            }
        )
        all_ok = all_ok and verdict.ok
    print(json.dumps({"per_interval": verdicts, "pass": all_ok}))
    return 0 if all_ok else 1


def _cmd_bench(args) -> int:
    instance = load_instance(args.instance)
    algos = [args.algo] + (args.compare.split(",") if args.compare else [])
    configs = [
        ExperimentConfig(
            instance=instance,
            algorithm=algo.strip(),
            eps=args.eps,
            delta=args.delta,
            trials=args.trials,
            master_seed=args.seed,
            best_method=_BEST_FLAGS[args.best],
        )
        for algo in algos
    ]
    if len(configs) > 1:
        rows = compare_sample_complexity(configs)
        print(render_table(rows))
        ok = all(row["success_fraction"] >= args.min_success for row in rows)
        if args.out:
            _write_json(args.out, {"schema": 1, "rows": rows})
        return 0 if ok else 1
    report = run_experiment(configs[0])
    if args.out:
        _write_json(args.out, report.to_json())
    print(json.dumps(report.aggregate))
    return 0 if report.aggregate["success_fraction"] >= args.min_success else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banditrange",
        description="PAC range searching over stochastic arms on the line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--type", choices=("random", "lb1d", "lbd"), required=True)
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--q", type=int, default=10)
    gen.add_argument("--m", type=int, default=3)
    gen.add_argument("--eps", type=float, default=0.125)
    gen.add_argument("--tau", type=int, default=1)
    gen.add_argument("--d", type=int, default=1)
    gen.add_argument("--kind", choices=("bernoulli", "constant"), default="bernoulli")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=_cmd_gen)

    geom = sub.add_parser("geom", help="hitting set and slab geometry")
    geom.add_argument("action", choices=("hitting-set", "slabs"))
    geom.add_argument("--instance", required=True)
    geom.add_argument("--slabs", action="store_true", help="also print the slabs")
    geom.set_defaults(handler=_cmd_geom)

    sky = sub.add_parser("skyline", help="run one skyline computation")
    sky.add_argument("--instance", required=True)
    sky.add_argument("--interval", required=True, help="L,R")
    sky.add_argument("--eps", type=float, required=True)
    sky.add_argument("--delta", type=float, required=True)
    sky.add_argument("--side", choices=("left", "right"), default="left")
    sky.add_argument("--seed", type=int, required=True)
    sky.add_argument("--trace", help="write the run trace to this JSON file")
    sky.set_defaults(handler=_cmd_skyline)

    solve = sub.add_parser("solve", help="answer every query interval")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--algo", choices=("alg-rs", "alg-d-rs", "naive"), required=True)
    solve.add_argument("--eps", type=float, required=True)
    solve.add_argument("--delta", type=float, required=True)
    solve.add_argument("--seed", type=int, required=True)
    solve.add_argument("--best", choices=tuple(_BEST_FLAGS), default="median-elim")
    solve.add_argument("--out")
    solve.set_defaults(handler=_cmd_solve)

    verify = sub.add_parser("verify", help="judge an answers file against true means")
    verify.add_argument("--instance", required=True)
    verify.add_argument("--answers", required=True)
    verify.add_argument("--eps", type=float, required=True)
    verify.set_defaults(handler=_cmd_verify)

    bench = sub.add_parser("bench", help="seeded trial batches with statistics")
    bench.add_argument("--instance", required=True)
    bench.add_argument("--algo", choices=("alg-rs", "alg-d-rs", "naive"), required=True)
    bench.add_argument("--compare", help="comma-separated extra algorithms")
    bench.add_argument("--eps", type=float, required=True)
    bench.add_argument("--delta", type=float, required=True)
    bench.add_argument("--trials", type=int, default=20)
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--best", choices=tuple(_BEST_FLAGS), default="median-elim")
    bench.add_argument("--min-success", type=float, default=0.0)
    bench.add_argument("--out")
    bench.set_defaults(handler=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BanditRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
