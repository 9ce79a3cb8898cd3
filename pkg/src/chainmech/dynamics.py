"""Route-to-chaos map diagnostics: orbits, Lyapunov exponents, bifurcation scans.

Two discrete-time maps are provided.  The logistic map
``x[n+1] = r*x[n]*(1-x[n])`` keeps [0, 1] invariant for 0 < r <= 4 and runs
through the classic period-doubling cascade.  The delayed logistic map
``x[n+1] = r*x[n]*(1-x[n-1])`` is two-dimensional (Henon-type) and reaches
chaos through a quasi-periodic route; it does *not* confine orbits to [0, 1]
for every admissible r, and divergent parameter choices simply produce
non-finite samples.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LOGISTIC",
    "DELAYED_LOGISTIC",
    "MAP_KINDS",
    "MapSpec",
    "Orbit",
    "ScanRow",
    "iterate",
    "lyapunov",
    "bifurcation_scan",
    "classify_regime",
    "scan_to_csv",
    "REGIME_PERIODIC",
    "REGIME_MARGINAL",
    "REGIME_CHAOTIC",
]

LOGISTIC = "logistic"
DELAYED_LOGISTIC = "delayed_logistic"
MAP_KINDS = (LOGISTIC, DELAYED_LOGISTIC)

REGIME_PERIODIC = "fixed_or_periodic"
REGIME_MARGINAL = "marginal"
REGIME_CHAOTIC = "chaotic"

#: ln|f'| terms at an exactly-zero derivative are clamped here (double underflow floor).
LOG_ZERO_CLAMP = -745.0

_TANGENT_RENORM_EVERY = 10

DEFAULT_BURN_IN = 1_000
DEFAULT_EXPONENT_ITERS = 100_000
_DEFAULT_X0 = 0.3141
_SCAN_EXPONENT_ITERS = 20_000


@dataclass(frozen=True)
class MapSpec:
    kind: str
    r: float

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise ValueError(f"kind must be one of {MAP_KINDS}, got {self.kind!r}")
        if not 0.0 < self.r <= 4.0:
            raise ValueError(f"r must be in (0, 4], got {self.r!r}")

    @property
    def dimension(self) -> int:
        return 1 if self.kind == LOGISTIC else 2


@dataclass(frozen=True)
class Orbit:
    spec: MapSpec
    initial: tuple[float, ...]
    burn_in: int
    samples: np.ndarray  # retained x values, length == requested keep


def _check_initial(spec: MapSpec, initial) -> tuple[float, ...]:
    if initial is None:
        initial = (_DEFAULT_X0,) if spec.kind == LOGISTIC else (_DEFAULT_X0, _DEFAULT_X0)
    if isinstance(initial, (int, float)):
        initial = (float(initial),)
    initial = tuple(float(v) for v in initial)
    if len(initial) != spec.dimension:
        raise ValueError(f"{spec.kind} needs {spec.dimension} initial value(s), got {len(initial)}")
    if any(not 0.0 <= v <= 1.0 for v in initial):
        raise ValueError(f"initial state {initial} outside [0, 1]")
    return initial


def iterate(spec: MapSpec, initial=None, burn_in: int = DEFAULT_BURN_IN, keep: int = 100) -> Orbit:
    """Run the map, discard ``burn_in`` iterates, retain the next ``keep`` x values."""
    initial = _check_initial(spec, initial)
    if keep < 1:
        raise ValueError("keep must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    r = spec.r
    out = np.empty(keep)
    if spec.kind == LOGISTIC:
        x = initial[0]
        for _ in range(burn_in):
            x = r * x * (1.0 - x)
        for i in range(keep):
            out[i] = x
            x = r * x * (1.0 - x)
    else:
        v, u = initial  # u = x[n], v = x[n-1]
        for _ in range(burn_in):
            u, v = r * u * (1.0 - v), u
        for i in range(keep):
            out[i] = u
            u, v = r * u * (1.0 - v), u
    out.flags.writeable = False
    return Orbit(spec, initial, burn_in, out)


def lyapunov(
    spec: MapSpec,
    initial=None,
    burn_in: int = DEFAULT_BURN_IN,
    n: int = DEFAULT_EXPONENT_ITERS,
) -> float:
    """Leading Lyapunov exponent in nats per iteration.

    Averages ln|f'(x)| along a logistic orbit; for the delayed map, iterates
    a tangent vector under the Jacobian, renormalizing every
    ``_TANGENT_RENORM_EVERY`` steps to keep the product in range.  Estimates
    settle to ~2% for n >= 1e4 on the regimes exercised here.  Exactly-zero
    derivative terms are clamped at ``LOG_ZERO_CLAMP`` with a warning.
    """
    initial = _check_initial(spec, initial)
    if n < 1:
        raise ValueError("n must be >= 1")
    r = spec.r
    if spec.kind == LOGISTIC:
        xs = iterate(spec, initial, burn_in, n).samples
        deriv = np.abs(r * (1.0 - 2.0 * xs))
        zero = deriv == 0.0
        if zero.any():
            warnings.warn(
                f"{int(zero.sum())} orbit point(s) hit a zero derivative; "
                f"clamping ln-terms at {LOG_ZERO_CLAMP}",
                RuntimeWarning,
                stacklevel=2,
            )
        terms = np.where(zero, LOG_ZERO_CLAMP, np.log(np.where(zero, 1.0, deriv)))
        return float(terms.mean())

    v, u = initial
    for _ in range(burn_in):
        u, v = r * u * (1.0 - v), u
    t1, t2 = 1.0, 0.0
    acc = 0.0
    clamped = False
    for i in range(n):
        # Jacobian of (u, v) -> (r*u*(1-v), u) is [[r(1-v), -r*u], [1, 0]].
        t1, t2 = r * (1.0 - v) * t1 - r * u * t2, t1
        if (i + 1) % _TANGENT_RENORM_EVERY == 0:
            norm = math.hypot(t1, t2)
            if norm == 0.0:
                acc += LOG_ZERO_CLAMP
                clamped = True
                t1, t2 = 1.0, 0.0
            else:
                acc += math.log(norm)
                t1, t2 = t1 / norm, t2 / norm
        u, v = r * u * (1.0 - v), u
    norm = math.hypot(t1, t2)
    if norm > 0.0:
        acc += math.log(norm)
    if clamped:
        warnings.warn(
            f"tangent vector collapsed to zero; ln-terms clamped at {LOG_ZERO_CLAMP}",
            RuntimeWarning,
            stacklevel=2,
        )
    return acc / n


def classify_regime(exponent: float, tol: float = 0.01) -> str:
    """Sign of the exponent with a dead band: negative, ~zero, or positive."""
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    if exponent < -tol:
        return REGIME_PERIODIC
    if exponent > tol:
        return REGIME_CHAOTIC
    return REGIME_MARGINAL


@dataclass(frozen=True)
class ScanRow:
    r: float
    lyapunov: float
    regime: str
    samples: np.ndarray


def bifurcation_scan(
    kind: str,
    r_min: float,
    r_max: float,
    r_steps: int,
    burn_in: int = DEFAULT_BURN_IN,
    keep: int = 100,
    initial=None,
    exponent_iters: int = _SCAN_EXPONENT_ITERS,
    regime_tol: float = 0.01,
) -> list[ScanRow]:
    """Sweep r over an inclusive grid; each row restarts from the same initial state."""
    if r_steps < 2:
        raise ValueError("r_steps must be >= 2")
    if not r_min < r_max:
        raise ValueError("need r_min < r_max")
    rows = []
    for r in np.linspace(r_min, r_max, r_steps):
        spec = MapSpec(kind, float(r))
        orbit = iterate(spec, initial, burn_in, keep)
        exponent = lyapunov(spec, initial, burn_in, exponent_iters)
        rows.append(
            ScanRow(float(r), exponent, classify_regime(exponent, regime_tol), orbit.samples)
        )
    return rows


def scan_to_csv(rows: list[ScanRow]) -> str:
    """CSV with header ``r,lyapunov,regime,sample_0,...``; fixed sample count per row."""
    if not rows:
        raise ValueError("no rows to serialize")
    n_samples = len(rows[0].samples)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "lyapunov", "regime"] + [f"sample_{i}" for i in range(n_samples)])
    for row in rows:
        writer.writerow(
            [repr(row.r), repr(row.lyapunov), row.regime] + [repr(float(s)) for s in row.samples]
        )
    return buf.getvalue()
