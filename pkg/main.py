#!/usr/bin/env python3
"""
mms-sampler CLI - sample household microdata consistent with block tabulations.

Usage:
    python main.py <subcommand> [OPTIONS]

Subcommands:
    gen        Generate instance files
    enumerate  Decide, count or enumerate solutions of one instance
    sample     Draw samples for one instance
    analyze    Spectral report of the simple or swap chain (CSV)
    evaluate   Statewide type frequencies and TVD from a batch output (CSV)
    batch      Sample every instance of a directory in parallel

Environment Variables:
    MMS_SAMPLER_SEED: Default base seed for randomized subcommands
    MMS_SAMPLER_WORKERS: Default worker count for batch runs (default: 1)
    MMS_SAMPLER_ALGORITHM: Default sampler (default: hybrid)
    MMS_SAMPLER_*: Limits and caps, see mms_sampler/config/limits.py

Exit codes: 0 ok, 1 run failure, 2 usage or configuration error.
"""

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from mms_sampler import __version__
from mms_sampler.batch import MANIFEST_NAME, instance_files, load_manifest, run_batch
from mms_sampler.chains import Algorithm, ChainConfig, StartRule, ephemeral_seed
from mms_sampler.core import (
    Solution,
    load_instance,
    read_samples,
    save_instance,
    write_jsonl,
)
from mms_sampler.config import list_projection_presets
from mms_sampler.diagnostics import KernelKind, build_kernel, spectral_report
from mms_sampler.enumeration import (
    count_feasible,
    decide_mms,
    enumerate_exact,
    enumerate_feasible,
    enumerate_top_n,
)
from mms_sampler.errors import ConfigError, MMSError
from mms_sampler.evaluation import (
    WEIGHTINGS,
    TypeProjection,
    empirical_frequencies_qhat,
    format_label,
    parse_label,
    pums_frequencies_p,
    reweight_lambda,
    reweight_partition,
    summarize_tvds,
    tvd,
)
from mms_sampler.generators import GeneratorKind, GeneratorSpec, generate, parse_dimacs
from mms_sampler.sampler import BlockSampler

logger = logging.getLogger("mms_sampler.cli")

LOG_FORMAT = "%(asctime)s [%(filename)s:%(lineno)s] %(levelname)s %(message)s"

# Generator kinds that consume randomness
RANDOMIZED_KINDS = {GeneratorKind.RANDOM, GeneratorKind.HYPERRECTANGLE, GeneratorKind.THREESAT}


class UsageError(Exception):
    """A command line that parses but cannot run as given."""


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    # argparse applies type= to string defaults, so a malformed env value is a usage error
    parser.add_argument(
        "--seed",
        type=int,
        default=os.getenv("MMS_SAMPLER_SEED") or None,
        help="Base seed (required by randomized subcommands)",
    )
    parser.add_argument(
        "--ephemeral",
        action="store_true",
        help="Allow a random seed when --seed is missing (the seed is logged)",
    )
    parser.add_argument("--config", type=str, metavar="FILE", help="JSON file mirroring flags")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", "-q", action="store_true", help="Warnings only")


def add_chain_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--algorithm",
        choices=[a.value for a in Algorithm],
        default=os.getenv("MMS_SAMPLER_ALGORITHM", Algorithm.HYBRID.value),
        help="Sampler to run (default: hybrid)",
    )
    parser.add_argument("--gamma", type=float, default=1.0, help="Residual penalty of the simple chain")
    parser.add_argument("--k", type=int, default=2, help="Swap size")
    parser.add_argument("--t", type=int, default=0, help="MCMC iterations per sample")
    parser.add_argument("--top-n", type=int, default=5000, help="Enumerated start set size (hybrid)")
    parser.add_argument("--omega", type=int, default=0, help="Residual slack of the truncated chain")
    parser.add_argument("--max-restarts", type=int, default=None, help="Restart cap")
    parser.add_argument(
        "--start",
        choices=[s.value for s in StartRule],
        default=StartRule.POSTERIOR.value,
        help="Hybrid start rule",
    )
    parser.add_argument("--samples", type=int, default=1, help="Samples to draw")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per subcommand."""
    parser = argparse.ArgumentParser(
        prog="mms-sampler",
        description="mms-sampler - multiset-sum sampling for block-level microdata",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Generate the disconnected 4-type block and enumerate it
    mms-sampler gen --kind disconnected_example --out block.json
    mms-sampler enumerate block.json

    # Components of the 2-swap chain
    mms-sampler analyze block.json --kind reduced --k 2

    # Sample a directory of blocks on 4 workers
    mms-sampler batch blocks/ --out results/ --seed 7 --workers 4

    # Evaluate a batch run
    mms-sampler evaluate blocks/ results/ --projection example1 --out eval/
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("gen", help="Generate instance files")
    gen.add_argument("--kind", required=True, choices=[k.value for k in GeneratorKind])
    gen.add_argument("--n", type=int, default=8, help="Household types (random)")
    gen.add_argument("--d", type=int, default=3, help="Attributes including the count (random)")
    gen.add_argument("--m", type=int, default=5, help="Households per block")
    gen.add_argument("--density", type=float, default=1.0, help="Nonzero density (random)")
    gen.add_argument("--ranges", type=str, help="Hyperrectangle ranges, e.g. 0:2,0:3")
    gen.add_argument("--ell", type=int, default=3, help="High-mixing family parameter")
    gen.add_argument("--num-vars", type=int, default=5, help="3SAT variables")
    gen.add_argument("--num-clauses", type=int, default=10, help="3SAT clauses")
    gen.add_argument("--dimacs", type=str, metavar="FILE", help="Encode this CNF instead of a random one")
    gen.add_argument("--b-copies", type=int, default=1, help="Copies of block B (example1)")
    gen.add_argument("--name", type=str, default="", help="Instance name")
    gen.add_argument("--out", required=True, help="Output file (or directory for example1)")
    add_common_arguments(gen)

    enum = subparsers.add_parser("enumerate", help="Decide, count or enumerate solutions")
    enum.add_argument("instance")
    enum.add_argument(
        "--mode",
        choices=["exact", "top", "feasible", "count", "decide"],
        default="exact",
        help="exact: lexicographic X; top: best by linear score; feasible: Y",
    )
    enum.add_argument("--limit", type=int, default=100_000, help="Cap on returned solutions")
    enum.add_argument("--top-n", type=int, default=5000)
    enum.add_argument("--omega", type=int, default=None, help="Residual slack (feasible mode)")
    enum.add_argument("--out", type=str, help="JSONL output with a completeness footer")
    add_common_arguments(enum)

    sample = subparsers.add_parser("sample", help="Draw samples for one instance")
    sample.add_argument("instance")
    sample.add_argument("--out", type=str, help="JSONL output")
    add_chain_arguments(sample)
    add_common_arguments(sample)

    analyze = subparsers.add_parser("analyze", help="Spectral report of a chain (CSV)")
    analyze.add_argument("instance")
    analyze.add_argument("--kind", choices=["simple", "reduced", "truncated"], default="reduced")
    analyze.add_argument("--gammas", type=float, nargs="+", default=[1.0], help="Sweep of gamma")
    analyze.add_argument("--k", type=int, nargs="+", default=[2], help="Sweep of k")
    analyze.add_argument("--omega", type=int, default=0)
    analyze.add_argument("--out", type=str, help="CSV output (default: stdout)")
    add_common_arguments(analyze)

    evaluate = subparsers.add_parser("evaluate", help="Type frequencies and TVD of a batch run")
    evaluate.add_argument("instance_dir")
    evaluate.add_argument("samples_dir")
    evaluate.add_argument(
        "--projection", type=str, default=None, help=f"Preset: {', '.join(list_projection_presets())}"
    )
    evaluate.add_argument("--projection-table", type=str, metavar="FILE", help="JSON list of labels")
    evaluate.add_argument("--partition", type=str, metavar="FILE", help="JSON map label -> class")
    evaluate.add_argument("--weighting", choices=WEIGHTINGS, default="household")
    evaluate.add_argument(
        "--reweight-lambda",
        type=float,
        default=None,
        metavar="LAM",
        help="Smoothing of the (p + lam) / (qhat + lam) reweighting (default: from limits)",
    )
    evaluate.add_argument("--out", type=str, required=True, help="Output directory")
    add_common_arguments(evaluate)

    batch = subparsers.add_parser("batch", help="Sample a directory of instances")
    batch.add_argument("instance_dir")
    batch.add_argument("--out", type=str, required=True, help="Output directory")
    batch.add_argument(
        "--workers", type=int, default=os.getenv("MMS_SAMPLER_WORKERS", "1")
    )
    add_chain_arguments(batch)
    add_common_arguments(batch)

    parser.subcommands = subparsers.choices
    return parser


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """
    Parse arguments, applying --config file values under explicit flags.

    Precedence: explicit flags, then config file, then environment defaults.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser.subcommands[args.command]
        try:
            values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            parser.error(f"cannot read config {args.config}: {e}")
        if not isinstance(values, dict):
            parser.error("config file must hold a JSON object")
        known = {action.dest for action in sub._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    if not args.ephemeral:
        raise UsageError("this subcommand is randomized: pass --seed or --ephemeral")
    seed = ephemeral_seed()
    logger.warning("using ephemeral seed %d", seed)
    return seed


def chain_config(args: argparse.Namespace) -> ChainConfig:
    return ChainConfig(
        algorithm=args.algorithm,
        gamma=args.gamma,
        k=args.k,
        t=args.t,
        top_n=args.top_n,
        omega=args.omega,
        seed=resolve_seed(args),
        max_restarts=args.max_restarts,
        start=args.start,
    )


def parse_ranges(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(v) for v in part.split(":")) for part in text.split(",")]
    except ValueError as e:
        raise UsageError(f"bad --ranges {text!r}; expected lo:hi,lo:hi") from e


def cmd_gen(args: argparse.Namespace) -> int:
    kind = GeneratorKind(args.kind)
    params = {"name": args.name, "m": args.m}
    if kind in RANDOMIZED_KINDS and not (kind is GeneratorKind.THREESAT and args.dimacs):
        params["seed"] = resolve_seed(args)
    if kind is GeneratorKind.RANDOM:
        params.update(n=args.n, d=args.d, density=args.density)
    elif kind is GeneratorKind.HYPERRECTANGLE:
        if not args.ranges:
            raise UsageError("--kind hyperrectangle needs --ranges")
        params["ranges"] = parse_ranges(args.ranges)
    elif kind is GeneratorKind.HIGH_MIXING_FAMILY:
        params["ell"] = args.ell
    elif kind is GeneratorKind.THREESAT:
        if args.dimacs:
            params["formula"] = parse_dimacs(Path(args.dimacs).read_text(encoding="utf-8"))
        else:
            params.update(num_vars=args.num_vars, num_clauses=args.num_clauses)
    elif kind is GeneratorKind.EXAMPLE1:
        params["b_copies"] = args.b_copies

    instances = generate(GeneratorSpec(kind, params))
    out = Path(args.out)
    if len(instances) == 1:
        save_instance(instances[0], out)
        print(f"✅ wrote {out} ({instances[0].describe()})")
        return 0
    out.mkdir(parents=True, exist_ok=True)
    for inst in instances:
        save_instance(inst, out / f"{inst.name}.json")
    print(f"✅ wrote {len(instances)} instances to {out}/")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if args.mode == "decide":
        found = decide_mms(inst)
        print(f"{'✅ solvable' if found else '❌ no exact solution'}: {inst.name}")
        return 0
    if args.mode == "count":
        count = count_feasible(inst, args.limit)
        suffix = "+" if count >= args.limit else ""
        print(f"|Y| = {count}{suffix}")
        return 0

    if args.mode == "feasible":
        states = enumerate_feasible(inst, args.limit, args.omega)
        footer = {"complete": True, "count": len(states), "bound_gap": None}
    else:
        result = (
            enumerate_exact(inst, args.limit)
            if args.mode == "exact"
            else enumerate_top_n(inst, args.top_n)
        )
        states = result.solutions
        footer = result.footer()

    print(f"{len(states)} solution(s), complete={footer['complete']}")
    if footer.get("bound_gap") is not None:
        print(f"bound gap: {footer['bound_gap']:.6f}")
    records = [x.to_record() for x in states] + [footer]
    if args.out:
        write_jsonl(args.out, records)
    else:
        for x in states:
            print(" ".join(str(v) for v in x.multiplicities))
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    cfg = chain_config(args)
    sampler = BlockSampler(inst, cfg)
    if args.verbose:
        sampler.progress.add_callback(logger.debug)
    reports = sampler.run(args.samples)
    records = [{"block": inst.name, **r.to_record()} for r in reports]
    if args.out:
        write_jsonl(args.out, records)
        print(f"✅ {len(records)} sample(s) written to {args.out}")
    else:
        for r in reports:
            print(" ".join(str(v) for v in r.solution.multiplicities))
    return 0


ANALYZE_FIELDS = [
    "kind", "param", "states", "components", "lambda2", "tau_rel", "p_star", "n_lower", "n_upper",
]


def cmd_analyze(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    top = enumerate_top_n(inst, 1)
    if not top.solutions:
        print(f"❌ {inst.name} has no exact solution")
        return 1
    # The simple chain starts from the empty multiset, the others from the top-1 solution
    x0 = Solution.zeros(inst.num_types_n) if args.kind == "simple" else top.solutions[0]

    if args.kind == "reduced":
        sweep = [(f"k={k}", KernelKind.reduced(k)) for k in args.k]
    elif args.kind == "truncated":
        sweep = [(f"gamma={g:g}", KernelKind.truncated(g, args.omega)) for g in args.gammas]
    else:
        sweep = [(f"gamma={g:g}", KernelKind.simple(g)) for g in args.gammas]

    rows = []
    for param, kind in sweep:
        kernel = build_kernel(inst, kind)
        report = spectral_report(kernel, x0)
        rows.append(
            {
                "kind": args.kind,
                "param": param,
                "states": report.num_states,
                "components": report.components,
                "lambda2": report.lambda2,
                "tau_rel": report.tau_rel,
                "p_star": report.p_star,
                "n_lower": report.n_lower,
                "n_upper": report.n_upper,
            }
        )
        print(f"{param}: components={report.components} tau_rel={report.tau_rel:.4f}", file=sys.stderr)

    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as f:
            write_csv(f, ANALYZE_FIELDS, rows)
    else:
        write_csv(sys.stdout, ANALYZE_FIELDS, rows)
    return 0


def write_csv(stream, fields: list[str], rows: list[dict]) -> None:
    writer = csv.DictWriter(stream, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else row[k] for k in fields})


def load_projection(args: argparse.Namespace, inst) -> TypeProjection:
    if args.projection_table:
        table = json.loads(Path(args.projection_table).read_text(encoding="utf-8"))
        return TypeProjection.from_table(table)
    if args.projection:
        return TypeProjection.from_preset(inst, args.projection)
    raise UsageError("evaluate needs --projection or --projection-table")


def cmd_evaluate(args: argparse.Namespace) -> int:
    samples_dir = Path(args.samples_dir)
    excluded: list[str] = []
    manifest_path = samples_dir / MANIFEST_NAME
    if manifest_path.exists():
        excluded = load_manifest(manifest_path).excluded

    blocks = {p.stem: load_instance(p) for p in instance_files(args.instance_dir)}
    samples = {}
    for name in sorted(blocks):
        path = samples_dir / f"{name}.jsonl"
        if name in excluded or not path.exists():
            continue
        samples[name] = read_samples(path)
    if not samples:
        print("❌ no sampled blocks found")
        return 1

    first = blocks[next(iter(samples))]
    projection = load_projection(args, first)
    p = pums_frequencies_p(first.probs, projection)

    runs = min(len(recs) for recs in samples.values())
    tvds, qhats = [], []
    for r in range(runs):
        sampled = [(blocks[name], recs[r].x) for name, recs in samples.items()]
        qhat = empirical_frequencies_qhat(sampled, projection, args.weighting)
        qhats.append(qhat)
        tvds.append(tvd(p, qhat))
    summary = summarize_tvds(tvds)

    p_tilde = None
    if args.partition:
        raw = json.loads(Path(args.partition).read_text(encoding="utf-8"))
        partition = {parse_label(label): cls_ for label, cls_ in raw.items()}
        p_tilde = reweight_partition(p, qhats[0], partition)

    adjusted = reweight_lambda(first.probs, projection, p, qhats[0], args.reweight_lambda)
    p_lambda = pums_frequencies_p(adjusted, projection)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    labels = sorted(set(p.weights) | set(qhats[0].weights))
    fields = ["label", "p", "qhat", "p_lambda"] + (["p_tilde"] if p_tilde is not None else [])
    rows = []
    for label in labels:
        row = {
            "label": format_label(label),
            "p": p.get(label),
            "qhat": qhats[0].get(label),
            "p_lambda": p_lambda.get(label),
        }
        if p_tilde is not None:
            row["p_tilde"] = p_tilde.get(label)
        rows.append(row)
    with open(out / "types.csv", "w", newline="", encoding="utf-8") as f:
        write_csv(f, fields, rows)
    summary_row = {
        "runs": summary.count,
        "blocks": len(samples),
        "excluded": len(excluded),
        "tvd_mean": summary.mean,
        "tvd_max": summary.max,
    }
    if p_tilde is not None:
        summary_row["tvd_p_tilde_qhat"] = tvd(p_tilde, qhats[0])
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as f:
        write_csv(f, list(summary_row), [summary_row])

    print(f"✅ TVD(P, Q̂): mean={summary.mean:.6f} max={summary.max:.6f} over {summary.count} run(s)")
    if excluded:
        print(f"   {len(excluded)} block(s) excluded: {', '.join(excluded)}")
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    cfg = chain_config(args)
    manifest, _ = run_batch(
        args.instance_dir,
        cfg,
        workers=args.workers,
        out_dir=args.out,
        num_samples=args.samples,
        command=["mms-sampler"] + sys.argv[1:],
        version=__version__,
    )
    print("=" * 50)
    for block in manifest.blocks:
        icon = "❌" if block.failed else "✅"
        print(f"{icon} {block.block:<30} {block.status}")
    print("=" * 50)
    if manifest.failed_count:
        print(f"{manifest.failed_count} of {len(manifest.blocks)} block(s) failed")
        return 1
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
    "analyze": cmd_analyze,
    "evaluate": cmd_evaluate,
    "batch": cmd_batch,
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    args = parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        code = COMMANDS[args.command](args)
    except (UsageError, ConfigError) as e:
        print(f"❌ {e}", file=sys.stderr)
        code = 2
    except (MMSError, ValueError, OSError) as e:
        logger.debug("run failed", exc_info=True)
        print(f"❌ {e}", file=sys.stderr)
        code = 1
    return code


if __name__ == "__main__":
    sys.exit(main())
