"""Independent reference implementations used only as test oracles.

Everything here evaluates defining formulas directly (pointwise step
functions, naive O(4**N) dot products, brute-force enumeration) so the
fast pyramid code paths are checked against something that shares no code
with them.
"""

import itertools
import math

import numpy as np

from haarq import Signal


def mother_step(u: float) -> float:
    """The unit step shape: +1 on (0, 1/2), -1 on (-1/2, 0), else 0."""
    if 0.0 < u < 0.5:
        return 1.0
    if -0.5 < u < 0.0:
        return -1.0
    return 0.0


def basis_by_formula(k: int, j: int, grid) -> np.ndarray:
    """Evaluate the scaled/translated step function pointwise at the samples."""
    if k == 0:
        return np.ones(grid.size)
    center = -0.5 + (2 * j - 1) / 2**k
    scale = 2.0 ** ((k - 1) / 2)
    return np.array(
        [scale * mother_step(2 ** (k - 1) * (t - center)) for t in grid.samples]
    )


def naive_coefficient(f: Signal, k: int, j: int) -> float:
    """O(2**N) dot product straight from the definition."""
    return float(basis_by_formula(k, j, f.grid) @ f.values) / f.grid.size


def all_indices(n: int):
    yield (0, 1)
    for k in range(1, n + 1):
        for j in range(1, 2 ** (k - 1) + 1):
            yield (k, j)


def parity_choice_oracle(target: float, parity: str, tie_break: str) -> int:
    """Enumerate nearby integers of the right parity and pick the closest."""
    p = 0 if parity == "even" else 1
    lo = math.floor(target) - 2
    hi = math.ceil(target) + 2
    candidates = [
        c for c in range(lo, hi + 1) if (c - p) % 2 == 0 and abs(c - target) <= 1.0
    ]
    best = min(abs(c - target) for c in candidates)
    tied = [c for c in candidates if abs(c - target) == best]
    return min(tied) if tie_break == "toward_negative" else max(tied)


def dft_by_sum(f: Signal, xi: int) -> complex:
    """Single-frequency transform by direct summation."""
    t = f.grid.samples
    return complex(np.sum(np.exp(-2j * np.pi * t * xi) * f.values) / f.grid.size)


def enumerate_integer_quantizations(f: Signal):
    """All integer-valued signals within sup distance < 1 of f."""
    per_sample = []
    for v in f.values:
        lo = math.floor(v - 1) + 1
        hi = math.ceil(v + 1) - 1
        per_sample.append([c for c in range(lo, hi + 1) if abs(c - v) < 1.0])
    yield from itertools.product(*per_sample)


def satisfies_all_haar_bounds(f: Signal, g_values, slack: float = 1e-12) -> bool:
    """Check the DC, per-level and sup bounds using only naive dot products."""
    n = f.grid.n_exponent
    g = Signal(f.grid, np.array(g_values, dtype=float))
    if abs(naive_coefficient(f, 0, 1) - naive_coefficient(g, 0, 1)) > 2.0 ** (-n - 1) + slack:
        return False
    for k in range(1, n + 1):
        bound = 2.0 ** (-n + (k - 1) / 2)
        for j in range(1, 2 ** (k - 1) + 1):
            if abs(naive_coefficient(f, k, j) - naive_coefficient(g, k, j)) > bound + slack:
                return False
    sup = float(np.abs(f.values - g.values).max())
    return sup <= 1.0 - 2.0 ** (-n - 1) + slack
