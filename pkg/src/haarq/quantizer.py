"""Noise-shaping quantizer built on a parity-constrained integer pyramid.

The construction mirrors the signal's totals pyramid with integers, level
by level: the root is the rounded grand total, and every split picks an
integer child difference D that shares the parent's parity and lies within
1 of the real difference.  Parity is what keeps both children integral
while the running error halves on the way down, so the quantized signal g
satisfies, for a grid of size 2**N,

    |dc(f) - dc(g)|                <= 2**(-N-1)
    |detail_k(f) - detail_k(g)|    <= 2**(-N+(k-1)/2)   for every level k
    sup |f - g|                    <= 1 - 2**(-N-1)

where dc/detail_k are the orthonormal Haar coefficients.  The per-sample
rounding baseline is provided for contrast, together with a report type
that re-measures all three bound families for any (signal, quantized)
pair.
"""

import math
import operator
import warnings
from dataclasses import dataclass

import numpy as np

from .haar import (
    HaarCoefficients,
    Signal,
    TimeGrid,
    _pairwise_levels,
    _readonly,
    haar_analyze,
)

__all__ = [
    "TIE_BREAKS",
    "PARITIES",
    "BOUND_SLACK",
    "QuantizerConfig",
    "QuantizedSignal",
    "IntegerPyramid",
    "HaarErrorReport",
    "choose_parity_constrained",
    "quantize_haar_optimal",
    "quantize_simple",
    "verify_haar_bounds",
    "check_range",
    "integer_totals_pyramid",
]

TIE_BREAKS = ("toward_negative", "toward_positive")
PARITIES = ("even", "odd")

# Additive slack used when re-checking the proved inequalities in floats.
BOUND_SLACK = 1e-12

# Totals beyond this magnitude risk int64 trouble downstream; reject early.
_INT_BUDGET = float(2**60)


@dataclass(frozen=True)
class QuantizerConfig:
    """Tie rule plus optional input dither.

    dither_amplitude is the full width of the uniform perturbation added to
    the input before pyramid construction; with the default 0 the seed is
    never consulted and output depends on the input and tie rule alone.
    """

    tie_break: str = "toward_negative"
    dither_amplitude: float = 0.0
    dither_seed: int = 0

    def __post_init__(self):
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
        amp = float(self.dither_amplitude)
        if not (math.isfinite(amp) and amp >= 0.0):
            raise ValueError("dither_amplitude must be finite and >= 0")
        object.__setattr__(self, "dither_amplitude", amp)
        object.__setattr__(self, "dither_seed", operator.index(self.dither_seed))


@dataclass(frozen=True, eq=False)
class QuantizedSignal:
    """Integer-valued samples on a TimeGrid."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim != 1 or arr.shape[0] != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} samples, got shape {arr.shape}"
            )
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.all(np.isfinite(arr)) or not np.all(arr == rounded):
                raise ValueError("quantized values must be integers")
            arr = rounded
        object.__setattr__(self, "values", _readonly(arr.astype(np.int64)))

    @property
    def n_exponent(self) -> int:
        return self.grid.n_exponent

    def to_signal(self) -> Signal:
        return Signal(self.grid, self.values.astype(np.float64))


@dataclass(frozen=True, eq=False)
class IntegerPyramid:
    """Integer totals over the dyadic tree; parents equal the sum of children."""

    n_exponent: int
    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        n = operator.index(self.n_exponent)
        object.__setattr__(self, "n_exponent", n)
        if len(self.levels) != n + 1:
            raise ValueError(f"expected {n + 1} levels, got {len(self.levels)}")
        fixed = []
        for k, level in enumerate(self.levels):
            arr = np.array(level, dtype=np.int64, copy=True)
            if arr.shape != (1 << k,):
                raise ValueError(f"level {k} must hold {1 << k} totals")
            fixed.append(_readonly(arr))
        for k in range(1, n + 1):
            child = fixed[k]
            if not np.array_equal(fixed[k - 1], child[0::2] + child[1::2]):
                raise ValueError(f"level {k - 1} is not the pairwise sum of level {k}")
        object.__setattr__(self, "levels", tuple(fixed))

    def value(self, k: int, j: int) -> int:
        if not (0 <= k <= self.n_exponent and 1 <= j <= 1 << k):
            raise ValueError(f"invalid pyramid node ({k}, {j})")
        return int(self.levels[k][j - 1])

    @property
    def root(self) -> int:
        return int(self.levels[0][0])


@dataclass(frozen=True, eq=False)
class HaarErrorReport:
    """Measured coefficient errors versus the proved bounds for one pair.

    All three flags can be recomputed from the stored errors, bounds and
    slack; they are precomputed for convenience.
    """

    n_exponent: int
    dc_input: float
    dc_quantized: float
    dc_error: float
    dc_bound: float
    detail_errors: tuple[np.ndarray, ...]
    detail_bounds: np.ndarray
    sup_error: float
    sup_bound: float
    slack: float
    dc_ok: bool
    details_ok: bool
    sup_ok: bool

    @property
    def passed(self) -> bool:
        return self.dc_ok and self.details_ok and self.sup_ok

    def max_detail_errors(self) -> np.ndarray:
        """Largest per-level coefficient error, one entry per level k = 1..N."""
        return np.array([float(e.max()) for e in self.detail_errors])


def _round_nearest(x, tie_break: str):
    # Half-integer ties go to the smaller (toward_negative) or larger integer.
    if tie_break == "toward_negative":
        return np.ceil(x - 0.5)
    return np.floor(x + 0.5)


def choose_parity_constrained(
    target: float, parent_parity: str, tie_break: str = "toward_negative"
) -> int:
    """Nearest integer to target with the given parity.

    Integers of one parity are spaced 2 apart, so the result D always
    satisfies |target - D| <= 1; an exact distance-1 tie on both sides is
    resolved by tie_break.
    """
    if not math.isfinite(target):
        raise ValueError("target must be finite")
    if parent_parity not in PARITIES:
        raise ValueError(f"parent_parity must be one of {PARITIES}")
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
    p = PARITIES.index(parent_parity)
    m = int(_round_nearest((target - p) / 2.0, tie_break))
    return 2 * m + p


def quantize_haar_optimal(
    f: Signal, config: QuantizerConfig | None = None
) -> tuple[QuantizedSignal, IntegerPyramid]:
    """Quantize by rounding the totals pyramid level by level.

    Steps: (1) sum the (optionally dithered) input over the dyadic tree;
    (2) round the grand total to the nearest integer, ties per config;
    (3) walking down, round each child difference to the nearest integer
    of the parent's parity and split the parent accordingly; (4) read the
    quantized samples off the bottom level.  O(2**N) total work.
    """
    cfg = config if config is not None else QuantizerConfig()
    n = f.n_exponent
    values = f.values
    if cfg.dither_amplitude > 0.0:
        if cfg.dither_amplitude >= 2.0 ** (-n - 1):
            warnings.warn(
                f"dither amplitude {cfg.dither_amplitude} is >= 2**-(N+1)="
                f"{2.0 ** (-n - 1)}; bound checks against the undithered "
                "input may fail",
                stacklevel=2,
            )
        rng = np.random.default_rng(cfg.dither_seed & 0xFFFF_FFFF_FFFF_FFFF)
        half = cfg.dither_amplitude / 2.0
        values = values + rng.uniform(-half, half, values.shape[0])

    totals = _pairwise_levels(values)
    for level in totals:
        if float(np.abs(level).max()) > _INT_BUDGET:
            raise OverflowError("signal totals exceed the 64-bit integer budget")

    root = np.int64(_round_nearest(totals[0][0], cfg.tie_break))
    glevels = [np.array([root], dtype=np.int64)]
    for k in range(1, n + 1):
        v = totals[k]
        target = v[1::2] - v[0::2]
        parent = glevels[-1]
        parity = parent & np.int64(1)
        m = _round_nearest((target - parity) * 0.5, cfg.tie_break).astype(np.int64)
        diff = 2 * m + parity
        child = np.empty(1 << k, dtype=np.int64)
        # parent +/- diff is even by construction, so // 2 is exact.
        child[0::2] = (parent - diff) // 2
        child[1::2] = (parent + diff) // 2
        glevels.append(child)

    pyramid = IntegerPyramid(n, tuple(glevels))
    return QuantizedSignal(f.grid, glevels[-1]), pyramid


def quantize_simple(f: Signal) -> QuantizedSignal:
    """Per-sample rounding to the nearest integer, half-ties downward."""
    if float(np.abs(f.values).max()) > _INT_BUDGET:
        raise OverflowError("signal values exceed the 64-bit integer budget")
    rounded = np.ceil(f.values - 0.5)
    return QuantizedSignal(f.grid, rounded.astype(np.int64))


def integer_totals_pyramid(g: QuantizedSignal) -> IntegerPyramid:
    """Exact integer totals of a quantized signal over the dyadic tree."""
    levels = [g.values]
    while levels[-1].size > 1:
        v = levels[-1]
        levels.append(v[0::2] + v[1::2])
    levels.reverse()
    return IntegerPyramid(g.n_exponent, tuple(levels))


def verify_haar_bounds(f: Signal, g: QuantizedSignal) -> HaarErrorReport:
    """Measure every coefficient error of (f, g) against the proved bounds.

    Checks the DC bound 2**(-N-1), the level-k bound 2**(-N+(k-1)/2) and
    the uniform bound 1 - 2**(-N-1), each with BOUND_SLACK of additive
    tolerance for float rounding.
    """
    if f.grid != g.grid:
        raise ValueError("signal and quantized signal live on different grids")
    n = f.n_exponent
    cf = haar_analyze(f)
    cg = haar_analyze(g.to_signal())

    dc_bound = 2.0 ** (-n - 1)
    dc_error = abs(cf.dc - cg.dc)
    detail_errors = tuple(
        _readonly(np.abs(a - b)) for a, b in zip(cf.details, cg.details)
    )
    detail_bounds = _readonly(np.exp2(-n + 0.5 * np.arange(n, dtype=np.float64)))
    sup_error = float(np.abs(f.values - g.values.astype(np.float64)).max())
    sup_bound = 1.0 - dc_bound

    details_ok = all(
        float(err.max()) <= bound + BOUND_SLACK
        for err, bound in zip(detail_errors, detail_bounds)
    )
    return HaarErrorReport(
        n_exponent=n,
        dc_input=cf.dc,
        dc_quantized=cg.dc,
        dc_error=dc_error,
        dc_bound=dc_bound,
        detail_errors=detail_errors,
        detail_bounds=detail_bounds,
        sup_error=sup_error,
        sup_bound=sup_bound,
        slack=BOUND_SLACK,
        dc_ok=dc_error <= dc_bound + BOUND_SLACK,
        details_ok=details_ok,
        sup_ok=sup_error <= sup_bound + BOUND_SLACK,
    )


def check_range(f: Signal, lower: int, upper: int, g: QuantizedSignal) -> bool:
    """True iff f stays within [lower+1, upper-1] and g within [lower, upper].

    Whenever the input condition holds and g came from
    quantize_haar_optimal, the uniform error bound forces the output
    condition, so this returns True.
    """
    lo = operator.index(lower)
    hi = operator.index(upper)
    if lo + 2 >= hi:
        raise ValueError(f"need lower + 2 < upper, got ({lo}, {hi})")
    if f.grid != g.grid:
        raise ValueError("signal and quantized signal live on different grids")
    f_in = bool(np.all((f.values >= lo + 1) & (f.values <= hi - 1)))
    g_in = bool(np.all((g.values >= lo) & (g.values <= hi)))
    return f_in and g_in
