"""
Catalan arithmetic and numeric diagnostics for the generating functions
s_r(z) = sum_n |S_{n,r}(321)| z^n.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, InsufficientData, RangeError

__all__ = [
    "catalan", "catalan_convolution_check", "catalan_quadrupling_check",
    "closed_form_s", "CoefficientSeries", "GrowthEstimate",
    "catalan_series", "partial_sum_at", "partial_sums_at", "growth_estimate",
    "export_csv",
]


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    """binom(2n, n) / (n + 1), exactly."""
    if n < 0:
        raise ValueError(f"catalan needs n >= 0, got {n}")
    return math.comb(2 * n, n) // (n + 1)


def catalan_convolution_check(n: int) -> bool:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return sum(catalan(k - 1) * catalan(n - k) for k in range(1, n + 1)) == catalan(n)


def catalan_quadrupling_check(m: int) -> bool:
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    return catalan(m + 1) <= 4 * catalan(m)


def closed_form_s(z: float) -> float:
    """(1 - sqrt(1 - 4z)) / (2z) on [0, 1/4], with the series value 1 at z = 0."""
    if not 0 <= z <= 0.25:
        raise DomainError(f"z={z} is outside [0, 1/4]")
    if z == 0:
        return 1.0
    return (1 - math.sqrt(1 - 4 * z)) / (2 * z)


@dataclass(frozen=True)
class CoefficientSeries:
    """Exact coefficients |S_{n,r}(321)| for n = 0..len-1."""
    r: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if any(c < 0 for c in self.coefficients):
            raise ValueError("coefficients must be non-negative")

    def __len__(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_table(cls, table, r: int) -> "CoefficientSeries":
        return cls(r, tuple(table.coefficients(r)))


def catalan_series(N: int) -> CoefficientSeries:
    """The r = 0 series, known in closed form for any N."""
    return CoefficientSeries(0, tuple(catalan(n) for n in range(N + 1)))


def _terms(coefficients: Sequence[int], z: float):
    """Yield c_n * z^n, each from the last nonzero term by an exact coefficient ratio.

    Keeps huge coefficients and tiny powers of z from ever meeting as floats.
    """
    prev_n, prev_term = None, 0.0
    for n, c in enumerate(coefficients):
        if c == 0:
            yield 0.0
            continue
        if prev_n is None or prev_term == 0.0:
            term = float(Fraction(c) * Fraction(z) ** n)
        else:
            term = prev_term * float(Fraction(c, coefficients[prev_n])) * z ** (n - prev_n)
        prev_n, prev_term = n, term
        yield term


def partial_sums_at(series: CoefficientSeries, z: float, N: int | None = None) -> list[float]:
    """Running sums sum_{m<=n} c_m z^m for n = 0..N."""
    N = len(series) - 1 if N is None else N
    if N >= len(series):
        raise RangeError(f"N={N} needs {N + 1} coefficients, only {len(series)} available")
    sums, total = [], 0.0
    for term in _terms(series.coefficients[:N + 1], z):
        total += term
        sums.append(total)
    return sums


def partial_sum_at(series: CoefficientSeries, z: float, N: int) -> float:
    if N < 0:
        raise RangeError(f"N must be non-negative, got {N}")
    return partial_sums_at(series, z, N)[-1]


@dataclass(frozen=True)
class GrowthEstimate:
    r: int
    # n -> c_n / c_{n-1}, only where c_{n-1} > 0
    ratios: dict[int, float]
    # n -> c_n ** (1/n), only where c_n > 0 and n >= 1
    nth_roots: dict[int, float]


def growth_estimate(series: CoefficientSeries) -> GrowthEstimate:
    tail = series.coefficients[-4:]
    if len(tail) < 4 or any(c == 0 for c in tail):
        raise InsufficientData(
            f"growth table needs 4 nonzero trailing coefficients, got {list(tail)}")
    coeffs = series.coefficients
    ratios = {n: float(Fraction(coeffs[n], coeffs[n - 1]))
              for n in range(1, len(coeffs)) if coeffs[n - 1] > 0}
    roots = {n: math.exp(math.log(coeffs[n]) / n)
             for n in range(1, len(coeffs)) if coeffs[n] > 0}
    return GrowthEstimate(series.r, ratios, roots)


def export_csv(series: CoefficientSeries) -> str:
    """CSV with columns n, coefficient, ratio, nth_root, partial_sum_at_quarter."""
    growth = growth_estimate(series)
    sums = partial_sums_at(series, 0.25)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "coefficient", "ratio", "nth_root", "partial_sum_at_quarter"])
    for n, c in enumerate(series.coefficients):
        ratio = growth.ratios.get(n)
        root = growth.nth_roots.get(n)
        writer.writerow([
            n, c,
            "" if ratio is None else repr(ratio),
            "" if root is None else repr(root),
            repr(sums[n]),
        ])
    return out.getvalue()
