"""Command-line surface.

Subcommands: ``infer`` (machine reconstruction from a stream file),
``report`` (one-shot reference reproduction; exit 0 iff every row passes),
``mine`` / ``chain`` (proof-of-work wrappers), ``chaos`` (map diagnostics),
``collision`` (birthday-bound arithmetic).

Exit codes: 0 success, 1 report rows failed, 2 usage or parse error, 3 data
error (e.g. a stream too short to infer from).  All randomized subcommands
are deterministic under ``--seed``.  When ``--out`` is given, the report and
scan paths also render a companion PNG next to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import blockmodel, dynamics, powchain, report as report_mod, symbolic

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DATA = 3


def _fmt(x: float, full: bool) -> str:
    return repr(float(x)) if full else f"{x:.5e}"


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _target_from_args(args) -> powchain.DifficultyTarget:
    if args.difficulty is not None:
        return powchain.difficulty_to_target(args.difficulty)
    return powchain.target_for_zeros(args.zeros)


# -- subcommand handlers -------------------------------------------------------

def cmd_infer(args) -> int:
    try:
        stream = symbolic.read_stream(args.stream_file)
    except (OSError, ValueError) as exc:
        print(f"error: cannot parse stream file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    config = symbolic.InferenceConfig(
        max_history_length=args.max_history,
        merge_tolerance=args.merge_tol,
        min_history_count=args.min_count,
    )
    try:
        machine = symbolic.infer_causal_states(stream, config)
    except symbolic.InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    c_mu = symbolic.statistical_complexity(machine)
    machine_json = symbolic.machine_to_json(machine)
    if args.format == "json":
        doc = {"states": machine.n_states, "c_mu": c_mu, "machine": json.loads(machine_json)}
        _write_or_print(json.dumps(doc, indent=2, sort_keys=True), args.out)
    else:
        text = f"states: {machine.n_states}, C_mu: {c_mu:.6f}\n{machine_json}"
        _write_or_print(text, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    rows = report_mod.build_report(max_tolerance=args.max_tol)
    if args.format == "json":
        text = report_mod.report_to_json(rows)
    elif args.format == "csv":
        text = report_mod.report_to_csv(rows)
    else:
        text = report_mod.report_to_text(rows, full_precision=args.full_precision)
    _write_or_print(text, args.out)
    if args.out:
        from .plots import companion_figure_path, save_report_figure

        save_report_figure(rows, companion_figure_path(args.out))
    return EXIT_OK if report_mod.all_passed(rows) else EXIT_FAIL


def cmd_mine(args) -> int:
    target = _target_from_args(args)
    parent = powchain.Hash256.from_hex(args.parent)
    merkle = powchain.merkle_root([p.encode("utf-8") for p in args.payload])
    result = powchain.mine(
        parent,
        merkle,
        target,
        nonce_start=args.start,
        nonce_mode=args.mode,
        seed=args.seed,
        max_attempts=args.max_attempts,
    )
    print(f"target: {target.hex}")
    if result.found:
        print(f"nonce: {result.nonce}")
        print(f"hash: {result.block_hash.hex}")
        print(f"attempts: {result.attempts}")
    else:
        print(f"exhausted after {result.attempts} attempts, no qualifying nonce")
    return EXIT_OK


def cmd_chain(args) -> int:
    target = _target_from_args(args)
    chain = powchain.Chain()
    for i in range(args.blocks):
        parent = chain.tip_block()
        payloads = (f"block {i} payload".encode(),)
        merkle = powchain.merkle_root(payloads)
        result = powchain.mine(
            parent.hash, merkle, target, nonce_mode="random", seed=args.seed + i,
            max_attempts=args.max_attempts,
        )
        if not result.found:
            print(f"error: mining exhausted at block {i}", file=sys.stderr)
            return EXIT_DATA
        header = powchain.BlockHeader(parent.hash, merkle, result.nonce)
        chain.extend(powchain.Block(header, payloads, parent.height + 1), target)
    text = powchain.chain_to_json(chain)
    _write_or_print(text, args.out)
    print(f"height: {chain.height}, tip: {chain.active_tip}", file=sys.stderr)
    return EXIT_OK


def cmd_chaos(args) -> int:
    full = args.full_precision
    if args.scan:
        rows = dynamics.bifurcation_scan(
            args.map,
            args.r_min,
            args.r_max,
            args.steps,
            burn_in=args.burn_in,
            keep=args.keep,
            exponent_iters=args.iters,
            regime_tol=args.tol,
        )
        _write_or_print(dynamics.scan_to_csv(rows), args.out)
        if args.out:
            from .plots import companion_figure_path, save_bifurcation_figure

            save_bifurcation_figure(rows, companion_figure_path(args.out))
        return EXIT_OK
    spec = dynamics.MapSpec(args.map, args.r)
    initial = tuple(args.x0) if args.x0 else None
    if args.lyapunov:
        exponent = dynamics.lyapunov(spec, initial, burn_in=args.burn_in, n=args.iters)
        print(f"lyapunov: {_fmt(exponent, full)}")
        print(f"regime: {dynamics.classify_regime(exponent, args.tol)}")
    else:
        orbit = dynamics.iterate(spec, initial, burn_in=args.burn_in, keep=args.keep)
        print(" ".join(_fmt(x, full) for x in orbit.samples))
    return EXIT_OK


def cmd_collision(args) -> int:
    full = args.full_precision
    did_something = False
    if args.blocks is not None:
        print(f"collision probability: {_fmt(powchain.collision_probability(args.blocks), full)}")
        did_something = True
    if args.horizon:
        h = powchain.collision_horizon(args.interval)
        print(f"expected blocks to collision: {_fmt(h.expected_blocks, full)}")
        print(f"years at {args.interval:g} min/block: {_fmt(h.years, full)}")
        did_something = True
    if not did_something:
        print("error: give --blocks and/or --horizon", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainmech",
        description="Causal-state machines, statistical complexity, and proof-of-work simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--full-precision",
            action="store_true",
            help="print full float precision instead of 6 significant digits",
        )
        p.add_argument("--out", help="write primary output to this file instead of stdout")

    p = sub.add_parser("infer", help="reconstruct a causal-state machine from a stream file")
    p.add_argument("stream_file")
    p.add_argument("--max-history", type=int, default=3)
    p.add_argument("--merge-tol", type=float, default=0.05)
    p.add_argument("--min-count", type=int, default=10)
    p.add_argument("--format", choices=["text", "json"], default="text")
    add_common(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("report", help="reproduce the reference figures; exit 0 iff all rows pass")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument(
        "--max-tol",
        type=float,
        default=None,
        help="cap every row tolerance (0 = strictest; self-test of the pass logic)",
    )
    add_common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("mine", help="search nonces against a difficulty target")
    p.add_argument("--zeros", type=int, default=1, help="target = 16^(64-zeros)")
    p.add_argument("--difficulty", type=float, default=None, help="target = max_target/difficulty")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["sequential", "random"], default="sequential")
    p.add_argument("--start", type=int, default=0, help="first nonce in sequential mode")
    p.add_argument("--max-attempts", type=int, default=1_000_000)
    p.add_argument("--parent", default="0" * 64, help="parent hash, 64 lowercase hex chars")
    p.add_argument("--payload", action="append", default=None, help="transaction payload (repeatable)")
    add_common(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("chain", help="mine a demo chain and emit its JSON")
    p.add_argument("--blocks", type=int, default=4)
    p.add_argument("--zeros", type=int, default=1)
    p.add_argument("--difficulty", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-attempts", type=int, default=1_000_000)
    add_common(p)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("chaos", help="orbits, Lyapunov exponents, bifurcation scans")
    p.add_argument("--map", choices=list(dynamics.MAP_KINDS), default=dynamics.LOGISTIC)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--x0", type=float, action="append", default=None, help="initial state (repeat for the delayed map)")
    p.add_argument("--lyapunov", action="store_true", help="print the leading exponent and regime")
    p.add_argument("--scan", action="store_true", help="bifurcation scan as CSV")
    p.add_argument("--r-min", type=float, default=2.5)
    p.add_argument("--r-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--burn-in", type=int, default=dynamics.DEFAULT_BURN_IN)
    p.add_argument("--keep", type=int, default=100)
    p.add_argument("--iters", type=int, default=dynamics.DEFAULT_EXPONENT_ITERS)
    p.add_argument("--tol", type=float, default=0.01, help="regime dead band around zero")
    add_common(p)
    p.set_defaults(func=cmd_chaos)

    p = sub.add_parser("collision", help="birthday-bound collision arithmetic")
    p.add_argument("--blocks", type=int, default=None, help="collision probability among this many blocks")
    p.add_argument("--horizon", action="store_true", help="expected blocks and years to a collision")
    p.add_argument("--interval", type=float, default=10.0, help="minutes per block for the horizon")
    add_common(p)
    p.set_defaults(func=cmd_collision)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "payload") and args.payload is None:
        args.payload = ["demo"]
    return args.func(args)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
