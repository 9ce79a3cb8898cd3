"""One-shot reproduction report against the published reference figures.

Each row recomputes one quantity from scratch and compares it with the
reference value at a tolerance matched to the precision the figure was
quoted at: 1e-9 relative for the 17-digit target, 1% for two-significant-
figure values, 2% for the collision horizon, 1e-12 for the clock process,
and exact zero for the ordered/random processes.  Rows whose reference is
zero compare absolutely; everything else relatively.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from . import processes
from .blockmodel import blockchain_machine
from .powchain import (
    collision_horizon,
    collision_probability,
    difficulty_to_target,
    leading_zero_probability,
)
from .symbolic import InferenceConfig, generate, infer_causal_states, statistical_complexity

__all__ = ["ReportRow", "build_report", "all_passed", "report_to_text", "report_to_json", "report_to_csv"]

#: Network snapshot the reference figures were quoted for (May 2017):
#: difficulty, and the hash rate in TH/s (context only; nothing consumes it).
REFERENCE_DIFFICULTY = 595_921_917_085.42
REFERENCE_HASHRATE_THS = 4_887_867.46

_REFERENCE_BLOCK_COUNT = 431_616
_STREAM_LENGTH = 10_000
_STREAM_SEED = 20_170_529


@dataclass(frozen=True)
class ReportRow:
    label: str
    reference: float
    computed: float
    tolerance: float
    mode: str  # "relative" or "absolute"

    @property
    def error(self) -> float:
        if self.mode == "absolute":
            return abs(self.computed - self.reference)
        return abs(self.computed - self.reference) / abs(self.reference)

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def _inferred_complexity(machine) -> tuple[int, float]:
    stream = generate(machine, _STREAM_LENGTH, _STREAM_SEED)
    inferred = infer_causal_states(stream, InferenceConfig())
    return inferred.n_states, statistical_complexity(inferred)


def build_report(max_tolerance: float | None = None) -> list[ReportRow]:
    """Recompute every reference figure; optionally cap all tolerances.

    Capping with ``max_tolerance=0`` forces the strictest comparison and is
    the self-test that the pass/fail logic can actually fail.
    """
    rows: list[ReportRow] = []

    def add(label, reference, computed, tolerance, mode="relative"):
        if max_tolerance is not None:
            tolerance = min(tolerance, max_tolerance)
        rows.append(ReportRow(label, reference, float(computed), tolerance, mode))

    add(
        f"target at difficulty {REFERENCE_DIFFICULTY}",
        4.5240046586784463e55,
        difficulty_to_target(REFERENCE_DIFFICULTY).target,
        1e-9,
    )
    add("success probability P(18) = 16^-18", 2.1e-22, leading_zero_probability(18), 1e-2)
    add(
        "block-process complexity C_mu at p = 2^-72 (bits)",
        1.56e-20,
        statistical_complexity(blockchain_machine(2.0**-72).machine),
        1e-2,
    )
    add(
        f"collision probability among {_REFERENCE_BLOCK_COUNT} blocks",
        8.0e-67,
        collision_probability(_REFERENCE_BLOCK_COUNT),
        1e-2,
    )
    horizon = collision_horizon(10.0)
    add("collision horizon (blocks)", 3.4e38, horizon.expected_blocks, 2e-2)
    add("collision horizon at 10 min/block (years)", 6.5e33, horizon.years, 2e-2)

    for name, machine, reference in [
        ("tick-tock", processes.tick_tock(), 1.0),
        ("crystal", processes.crystal(), 0.0),
        ("fair coin", processes.fair_coin(), 0.0),
    ]:
        tol = 1e-12 if reference else 0.0
        mode = "relative" if reference else "absolute"
        add(f"{name} C_mu, analytic (bits)", reference, statistical_complexity(machine), tol, mode)
        n_states, c_mu = _inferred_complexity(machine)
        add(
            f"{name} C_mu, inferred from {_STREAM_LENGTH} symbols (bits)",
            reference,
            c_mu,
            tol,
            mode,
        )
        expected_states = 2 if name == "tick-tock" else 1
        add(f"{name} causal states, inferred", expected_states, n_states, 0.0, "absolute")
    return rows


def all_passed(rows: list[ReportRow]) -> bool:
    return all(r.passed for r in rows)


def _fmt(x: float, full: bool = False) -> str:
    if full:
        return repr(x)
    if x == 0.0 or x == int(x) and abs(x) < 1e6:
        return f"{x:.6g}"
    return f"{x:.5e}"


def report_to_text(rows: list[ReportRow], full_precision: bool = False) -> str:
    lines = [
        "reference reproduction report",
        f"  network snapshot: difficulty {REFERENCE_DIFFICULTY}, "
        f"hash rate {REFERENCE_HASHRATE_THS} TH/s (context only)",
        "",
    ]
    header = f"{'label':52s} {'reference':>14s} {'computed':>14s} {'error':>11s} {'tol':>9s}  status"
    lines.append(header)
    lines.append("-" * len(header))
    for r in rows:
        lines.append(
            f"{r.label:52s} {_fmt(r.reference, full_precision):>14s} "
            f"{_fmt(r.computed, full_precision):>14s} {r.error:>11.3e} {r.tolerance:>9.1e}  "
            f"{'pass' if r.passed else 'FAIL'}"
        )
    n_pass = sum(r.passed for r in rows)
    lines.append("")
    lines.append(f"{n_pass}/{len(rows)} rows passed")
    return "\n".join(lines) + "\n"


def report_to_json(rows: list[ReportRow]) -> str:
    doc = [
        {
            "label": r.label,
            "reference": r.reference,
            "computed": r.computed,
            "relative_error" if r.mode == "relative" else "absolute_error": r.error,
            "tolerance": r.tolerance,
            "pass": r.passed,
        }
        for r in rows
    ]
    return json.dumps(doc, indent=2)


def report_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "reference", "computed", "error", "tolerance", "mode", "pass"])
    for r in rows:
        writer.writerow(
            [r.label, repr(r.reference), repr(r.computed), repr(r.error), repr(r.tolerance), r.mode, r.passed]
        )
    return buf.getvalue()
