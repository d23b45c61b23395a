"""Command line front end: gen, analyze, run, experiment.

Exit codes: 0 success, 1 usage error, 2 infeasible input or validation
failure.  All randomness flows from --seed, so identical invocations
produce byte-identical output.
"""
from __future__ import annotations

import argparse
import sys

from .dbqt import NotQuasiTreeError, dbqt_schedule
from .formats import (
    dumps_document,
    dumps_instance,
    experiment_csv,
    instance_digest,
    plan_document,
    read_instance,
    transcript_document,
)
from .general import (
    ExperimentConfig,
    dbqt_general,
    min_degree_bound,
    run_experiment,
)
from .generators import RNG_ALGORITHM, GenConfig, add_cycle_edges, random_quasi_tree
from .sim import materialize_payloads, naive_schedule, run_schedule, verify_payload_run
from .topology import StorageTopology, from_hypergraph

__all__ = ["main", "main_script"]


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2
    # for infeasible inputs and uses 1 for usage problems
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypercast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[], help="generate a random instance")
    gen.add_argument("--users", type=int, required=True)
    gen.add_argument("--segments", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--extra-edges", type=int, default=0)
    gen.add_argument("--max-edge-size", type=int, default=3)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_gen)

    analyze = sub.add_parser("analyze", help="report structure and bounds")
    analyze.add_argument("--in", dest="infile", required=True)
    analyze.set_defaults(func=cmd_analyze)

    run = sub.add_parser("run", help="plan, simulate, and verify a schedule")
    run.add_argument("--in", dest="infile", required=True)
    run.add_argument(
        "--strategy", choices=["dbqt", "dbqt-general", "naive"], default="dbqt"
    )
    run.add_argument("--payload-check", action="store_true")
    run.add_argument("--transcript", default=None)
    run.add_argument("--plan", default=None)
    run.set_defaults(func=cmd_run)

    exp = sub.add_parser("experiment", help="seeded grid of general-planner runs")
    exp.add_argument("--users-list", required=True)
    exp.add_argument("--segments-list", required=True)
    exp.add_argument("--trials", type=int, required=True)
    exp.add_argument("--extra-edges", type=int, required=True)
    exp.add_argument("--seed", type=int, required=True)
    exp.add_argument("--max-edge-size", type=int, default=3)
    exp.add_argument("--out", default=None)
    exp.set_defaults(func=cmd_experiment)

    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    cfg = GenConfig(
        num_users=args.users,
        num_segments=args.segments - args.extra_edges,
        max_edge_size=args.max_edge_size,
        extra_edges=args.extra_edges,
        seed=args.seed,
    )
    _topo, h, placement = random_quasi_tree(cfg)
    if args.extra_edges:
        h, placement = add_cycle_edges(h, placement, args.extra_edges, args.seed)
    topology = from_hypergraph(h, placement)
    metadata = {
        "generator": "quasi-tree-grower-v1",
        "rng": RNG_ALGORITHM,
        "seed": args.seed,
        "extra_edges": args.extra_edges,
        "max_edge_size": args.max_edge_size,
    }
    _emit(dumps_instance(topology, metadata), args.out)
    return 0



def _classification(topology: StorageTopology):
    h, _placement, leftovers = topology.to_hypergraph()
    connected = h.is_connected()
    quasi_tree = h.is_quasi_tree()
    return h, leftovers, connected, quasi_tree


def cmd_analyze(args) -> int:
    topology, _metadata = read_instance(args.infile)
    h, leftovers, connected, quasi_tree = _classification(topology)
    cut = h.min_cut(method="auto" if quasi_tree else "exhaustive")
    agreement = None
    if quasi_tree:
        agreement = h.min_cut(method="exhaustive").capacity == h.min_cut(
            method="edge-scan"
        ).capacity
    reps = None
    if quasi_tree:
        from .dbqt import ordered_representatives

        reps = list(ordered_representatives(h).order)
    doc = {
        "instance_digest": instance_digest(topology),
        "num_users": topology.num_users,
        "num_segments": topology.num_segments,
        "leftover_segments": sorted(leftovers),
        "connected": connected,
        "quasi_tree": quasi_tree,
        "min_cut": cut.capacity,
        "min_cut_single_scan_agrees": agreement,
        "broadcast_lower_bound": h.total_weight - cut.capacity,
        "min_degree_lower_bound": min_degree_bound(h) if h.edges else None,
        "representatives": reps,
    }
    _emit(dumps_document(doc), None)
    return 0


def cmd_run(args) -> int:
    topology, _metadata = read_instance(args.infile)
    h, leftovers, connected, quasi_tree = _classification(topology)
    plan_doc = None
    extra: dict = {}
    if args.strategy == "dbqt":
        try:
            plan = dbqt_schedule(topology)
        except NotQuasiTreeError as exc:
            raise ValueError(
                f"{exc}; rerun with --strategy dbqt-general to reduce it first"
            ) from exc
        schedule = list(plan.schedule)
        plan_doc = plan_document(plan)
    elif args.strategy == "dbqt-general":
        result, schedule = dbqt_general(topology)
        extra.update(
            {
                "dbqt_broadcasts": result.dbqt_broadcasts,
                "completion_broadcasts": result.completion_broadcasts,
            }
        )
    else:
        schedule = naive_schedule(topology)
    if h.num_vertices >= 2 and h.edges:
        cut = h.min_cut(method="auto" if quasi_tree else "exhaustive")
        extra["min_cut"] = cut.capacity
        extra["lower_bound"] = h.total_weight - cut.capacity
        extra["min_degree_lower_bound"] = min_degree_bound(h)
    transcript = run_schedule(topology, schedule, track_edges=args.transcript is not None)
    payload_ok = None
    if args.payload_check:
        store = materialize_payloads(topology, seed=0)
        payload_ok = verify_payload_run(store, schedule)
        if not payload_ok:
            raise ValueError("payload-level run disagrees with coefficient-level decoding")
    doc = {
        "instance_digest": instance_digest(topology),
        "strategy": args.strategy,
        "connected": connected,
        "quasi_tree": quasi_tree,
        "num_users": topology.num_users,
        "num_segments": topology.num_segments,
        "num_broadcasts": transcript.num_broadcasts,
        "complete": transcript.complete,
        "payload_check": payload_ok,
        **extra,
    }
    if not transcript.complete:
        raise ValueError("schedule did not complete decoding for every user")
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(dumps_document(transcript_document(transcript)))
    if args.plan and plan_doc is not None:
        with open(args.plan, "w") as fh:
            fh.write(dumps_document(plan_doc))
    _emit(dumps_document(doc), None)
    return 0


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValueError(f"{flag} must be a comma-separated integer list: {exc}") from exc
    if not values:
        raise ValueError(f"{flag} must contain at least one value")
    return values


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        users_list=_parse_int_list(args.users_list, "--users-list"),
        segments_list=_parse_int_list(args.segments_list, "--segments-list"),
        trials=args.trials,
        extra_edges=args.extra_edges,
        seed=args.seed,
        max_edge_size=args.max_edge_size,
    )
    rows = run_experiment(config)
    _emit(experiment_csv(rows), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_script():
    sys.exit(main())


if __name__ == "__main__":
    main_script()
