"""Command-line entry point.

Exit codes: 0 success, 2 usage error (bad flags, unknown scenario, malformed
action or policy), 3 infeasible configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .actions import HopsCombination, enumerate_actions
from .bandit import PolicyConfig
from .config import CONFIG_DIR_ENV, PRESETS, dump_config, load_config, load_scenario
from .energy import brute_force_optimal, evaluate_action, evaluate_all
from .errors import (
    CapacityError,
    ConfigurationError,
    DresgError,
    InfeasibleActionError,
    InfeasibleLinkError,
    ValidationError,
)
from .harness import ExperimentConfig, run_experiment, similarity_ratio
from .results import fmt, report_csv, write_experiment, write_ratio

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _cmd_enumerate(args) -> int:
    space = enumerate_actions(args.rings)
    print(len(space))
    if args.list:
        for action in space:
            print(action)
    return 0


def _cmd_evaluate(args) -> int:
    scenario = load_scenario(args.scenario)
    action = HopsCombination.parse(args.action)
    if action.rings != scenario.network.rings:
        raise ValidationError("action", f"{action} has {action.rings} rings, scenario has {scenario.network.rings}")
    report = evaluate_action(scenario.network, action, scenario.profile, scenario.link, scenario.packet)
    sys.stdout.write(report_csv(report))
    return 0


def _cmd_oracle(args) -> int:
    scenario = load_scenario(args.scenario)
    action, report = brute_force_optimal(scenario.network, scenario.profile, scenario.link, scenario.packet)
    print(f"action {action}")
    print(f"e_b {fmt(report.e_b)}")
    print(f"bottleneck_ring {report.bottleneck_ring}")
    return 0


def _experiment_from_args(args, policy_text: str | None = None) -> ExperimentConfig:
    if getattr(args, "config", None):
        base = load_config(args.config)
        scenario = base.scenario
        policy = base.policy
        iterations, reps, seed = base.iterations, base.repetitions, base.seed_base
    else:
        if not args.scenario:
            raise ValidationError("scenario", "give --scenario or --config")
        scenario = load_scenario(args.scenario)
        policy = None
        preset = PRESETS.get(args.scenario)
        iterations = preset.iterations if preset else 500
        reps, seed = 1000, 0
    if policy_text is not None:
        policy = PolicyConfig.parse(policy_text)
    if policy is None:
        raise ValidationError("policy", "give --policy or a config with a policy section")
    return ExperimentConfig(
        scenario=scenario,
        policy=policy,
        iterations=args.iterations if args.iterations is not None else iterations,
        repetitions=args.reps if args.reps is not None else reps,
        seed_base=args.seed if args.seed is not None else seed,
    )


def _cmd_learn(args) -> int:
    config = _experiment_from_args(args, args.policy)
    log = run_experiment(config, workers=args.workers)
    files = write_experiment(log, args.out, json_mirror=args.json)
    files["config"] = Path(args.out) / "config.yaml"
    files["config"].write_text(dump_config(config))
    mean_h = log.mean_historic()
    print(f"scenario {config.scenario.name} policy {config.policy.label} actions {len(log.table.space)}")
    print(f"oracle {log.table.space[log.table.optimum]} e_b {fmt(log.table.min_e_b)}")
    print(f"mean historic bottleneck at I={config.iterations}: {fmt(mean_h[-1])}")
    found = log.optimal_iteration[~log.censored]
    print(f"optimum found in {found.size}/{log.repetitions} repetitions, mean i* {found.mean() if found.size else float('nan'):.3f}")
    for path in files.values():
        print(f"wrote {path}")
    return 0


def _cmd_compare(args) -> int:
    plain_cfg = _experiment_from_args(args, args.policy_a)
    sim_cfg = ExperimentConfig(
        plain_cfg.scenario, PolicyConfig.parse(args.policy_b), plain_cfg.iterations, plain_cfg.repetitions, plain_cfg.seed_base
    )
    table = evaluate_all(plain_cfg.scenario)
    plain = run_experiment(plain_cfg, table, workers=args.workers)
    sim = run_experiment(sim_cfg, table, workers=args.workers)
    ratio = similarity_ratio(plain, sim)
    if args.out:
        path = write_ratio(plain, sim, ratio, Path(args.out) / "similarity_ratio.csv")
        print(f"wrote {path}")
    step = max(1, len(ratio) // 10)
    print("iteration,ratio")
    for i in list(range(step, len(ratio) + 1, step)) + ([len(ratio)] if len(ratio) % step else []):
        print(f"{i},{fmt(ratio[i - 1])}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dresg",
        description="Energy model and epsilon-greedy routing learners for ring-structured multi-hop LPWANs.",
        epilog=f"Scenario arguments accept a preset name ({', '.join(sorted(PRESETS))}) or a config file; "
        f"relative config paths are also looked up in ${CONFIG_DIR_ENV}.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count (and optionally list) the hops combinations for R rings")
    p.add_argument("--rings", type=int, required=True)
    p.add_argument("--list", action="store_true", help="print every action")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("evaluate", help="per-ring energy report of one action")
    p.add_argument("--scenario", required=True)
    p.add_argument("--action", required=True, help='hop vector, e.g. "(1 1 3)"')
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("oracle", help="brute-force optimal action")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_oracle)

    def run_flags(p, policy_flags):
        p.add_argument("--scenario", help="preset name or scenario/config file")
        p.add_argument("--config", help="full experiment config; flags given explicitly override it")
        for flag in policy_flags:
            p.add_argument(flag, help="policy, e.g. cnt:1, dec:0.2, dec:1/dec:0.5, dec:1/dec:0@definition")
        p.add_argument("--iterations", type=int)
        p.add_argument("--reps", type=int, help="repetitions (default 1000)")
        p.add_argument("--seed", type=int, help="seed base; repetition k uses seed+k")
        p.add_argument("--workers", type=int, default=1, help="worker processes")

    p = sub.add_parser("learn", help="run repeated learner experiments and write CSV outputs")
    run_flags(p, ["--policy"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--json", action="store_true", help="also write aggregate.json")
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("compare", help="similarity improvement ratio between two policies")
    run_flags(p, ["--policy-a", "--policy-b"])
    p.add_argument("--out", help="directory for similarity_ratio.csv")
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "compare" and (args.policy_a is None or args.policy_b is None):
        parser.error("compare needs --policy-a and --policy-b")
    try:
        return args.func(args)
    except (InfeasibleActionError, InfeasibleLinkError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValidationError, CapacityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DresgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
