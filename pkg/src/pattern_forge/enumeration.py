"""
Exhaustive enumeration of S_{n,r}(321), the bound checks built on it and
the persisted sequence table.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernel
from .errors import LimitExceeded
from .perm import Permutation, pattern_type
from .series import catalan

__all__ = [
    "DEFAULT_LIMIT", "SequenceTable", "BoundReport", "ScanResult",
    "enumerate_fixed", "enumerate_avoiders", "group_by_type", "bound_report",
    "k_r_formula", "scan", "build_table",
]

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 11
CACHE_FILENAME = "sequence_table.txt"
TABLE_VERSION = 1


def check_limit(n: int, limit: int | None = None, force: bool = False) -> None:
    limit = DEFAULT_LIMIT if limit is None else limit
    if n < 0:
        raise ValueError(f"length must be non-negative, got {n}")
    if n > limit:
        if not force:
            raise LimitExceeded(
                f"n={n} is above the enumeration limit {limit}; "
                f"that is {math.factorial(n)} permutations")
        log.warning("enumerating n=%d above the limit %d", n, limit)


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _scan_chunk(n: int, start: int, stop: int, collect_types: bool):
    counts, excess, seen = _kernel.scan_range(n, start, stop, collect_types)
    return counts.tolist(), int(excess), {(int(r), int(key)): int(c) for (r, key), c in seen.items()}


def _list_chunk(n: int, r: int, start: int, stop: int) -> np.ndarray:
    return _kernel.list_range(n, r, start, stop)


def _map_chunks(func, arg_lists, jobs: int):
    if jobs > 1 and len(arg_lists) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, *zip(*arg_lists)))
    return [func(*args) for args in arg_lists]


@dataclass
class ScanResult:
    """Counts for one length n, merged over all workers."""
    n: int
    counts: dict[int, int]
    # max over non-avoiders of len(type) - 3r; None when every p avoids 321
    type_excess: int | None
    type_counts: dict[tuple[int, tuple[int, ...]], int] = field(default_factory=dict)


def scan(n: int, *, collect_types: bool = False, jobs: int = 1,
         limit: int | None = None, force: bool = False) -> ScanResult:
    """Tally every permutation of length n by its number of 321 occurrences."""
    check_limit(n, limit, force)
    if collect_types and n > _kernel.MAX_TYPE_LENGTH:
        raise ValueError(f"type collection supports n <= {_kernel.MAX_TYPE_LENGTH}")
    ranges = _chunks(math.factorial(n), jobs)
    parts = _map_chunks(
        _scan_chunk, [(n, lo, hi, collect_types) for lo, hi in ranges], jobs)

    counts: dict[int, int] = {}
    excess = None
    type_counts: dict[tuple[int, tuple[int, ...]], int] = {}
    for part_counts, part_excess, part_types in parts:
        for r, c in enumerate(part_counts):
            if c:
                counts[r] = counts.get(r, 0) + c
        if part_excess > -(1 << 62):
            excess = part_excess if excess is None else max(excess, part_excess)
        for (r, key), c in part_types.items():
            k = (r, _kernel.unpack_type(key))
            type_counts[k] = type_counts.get(k, 0) + c
    return ScanResult(n, dict(sorted(counts.items())), excess, dict(sorted(type_counts.items())))


def enumerate_fixed(n: int, r: int, *, limit: int | None = None, force: bool = False,
                    jobs: int = 1, raw: bool = False) -> list:
    """All permutations of length n with exactly r occurrences of 321, lexicographically.

    With `raw` the entries come back as plain tuples.
    """
    check_limit(n, limit, force)
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if n == 0:
        rows = [()] if r == 0 else []
    else:
        ranges = _chunks(math.factorial(n), jobs)
        arrays = _map_chunks(_list_chunk, [(n, r, lo, hi) for lo, hi in ranges], jobs)
        rows = [tuple(row) for arr in arrays for row in arr.tolist()]
    if raw:
        return rows
    return [Permutation(row) for row in rows]


def enumerate_avoiders(n: int, **kwargs) -> list[Permutation]:
    return enumerate_fixed(n, 0, **kwargs)


def group_by_type(n: int, r: int, **kwargs) -> dict[Permutation, list[Permutation]]:
    """Partition S_{n,r}(321) by type; keys sorted lexicographically."""
    if r < 1:
        raise ValueError(f"group_by_type needs r >= 1, got {r}")
    groups: dict[Permutation, list[Permutation]] = {}
    for p in enumerate_fixed(n, r, **kwargs):
        groups.setdefault(pattern_type(p), []).append(p)
    return dict(sorted(groups.items()))


def k_r_formula(r: int, K: int) -> int:
    """(1! + 2! + ... + (3r)!) * 4^(3r) * K^2."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    return sum(math.factorial(m) for m in range(1, 3 * r + 1)) * 4 ** (3 * r) * K * K


def _catalan_or_zero(m: int) -> int:
    # no permutations of negative length
    return catalan(m) if m >= 0 else 0


@dataclass
class BoundReport:
    r: int
    counts: dict[int, int]
    ratios: dict[int, Fraction]
    lower_ok: dict[int, bool]

    @property
    def max_ratio(self) -> Fraction:
        return max(self.ratios.values(), default=Fraction(0))

    def upper_ok(self, K: int) -> dict[int, bool]:
        bound = k_r_formula(self.r, K)
        return {n: c <= bound * catalan(n) for n, c in self.counts.items()}

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "rows": [
                {"n": n, "count": self.counts[n], "catalan": catalan(n),
                 "ratio": str(self.ratios[n]), "lower_ok": self.lower_ok[n]}
                for n in sorted(self.counts)
            ],
            "max_ratio": str(self.max_ratio),
        }

    def to_text(self) -> str:
        lines = [f"r={self.r}"]
        for n in sorted(self.counts):
            lines.append(
                f"n={n} count={self.counts[n]} catalan={catalan(n)} "
                f"ratio={self.ratios[n]} lower_ok={str(self.lower_ok[n]).lower()}")
        lines.append(f"max_ratio={self.max_ratio} (~{float(self.max_ratio):.6g})")
        return "\n".join(lines) + "\n"


def bound_report(r: int, n_max: int, *, table: "SequenceTable | None" = None,
                 jobs: int = 1, limit: int | None = None, force: bool = False) -> BoundReport:
    """Exact ratios |S_{n,r}| / |S_n(321)| for 1 <= n <= n_max, plus the lower sandwich."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    check_limit(n_max, limit, force)
    counts = {}
    for n in range(1, n_max + 1):
        if table is not None and n <= table.limit:
            counts[n] = table.count(n, r)
        else:
            counts[n] = scan(n, jobs=jobs, limit=limit, force=force).counts.get(r, 0)
    ratios = {n: Fraction(c, catalan(n)) for n, c in counts.items()}
    lower_ok = {n: c >= _catalan_or_zero(n - 3 * r) for n, c in counts.items()}
    return BoundReport(r, counts, ratios, lower_ok)


@dataclass
class SequenceTable:
    """Counts |S_{n,r}(321)| for n <= limit, and per-type counts for n <= type_limit."""
    limit: int
    rows: dict[tuple[int, int], int] = field(default_factory=dict)
    type_rows: dict[tuple[int, int, tuple[int, ...]], int] = field(default_factory=dict)
    type_limit: int = -1

    def count(self, n: int, r: int) -> int:
        if not 0 <= n <= self.limit:
            raise LimitExceeded(f"n={n} is outside the table (limit {self.limit})")
        return self.rows.get((n, r), 0)

    def type_count(self, n: int, r: int, q: Permutation | tuple[int, ...]) -> int:
        if not 0 <= n <= self.type_limit:
            raise LimitExceeded(f"n={n} is outside the per-type table (limit {self.type_limit})")
        q = tuple(q)
        return self.type_rows.get((n, r, q), 0)

    def row(self, n: int) -> dict[int, int]:
        return {r: c for (m, r), c in sorted(self.rows.items()) if m == n}

    def coefficients(self, r: int) -> list[int]:
        return [self.count(n, r) for n in range(self.limit + 1)]

    def to_text(self) -> str:
        lines = [f"version={TABLE_VERSION} limit={self.limit} type_limit={self.type_limit}"]
        entries = [((n, r, ()), f"n={n} r={r} count={c}") for (n, r), c in self.rows.items()]
        entries += [((n, r, (0,) + q), f"n={n} r={r} q={Permutation(q)} count={c}")
                    for (n, r, q), c in self.type_rows.items()]
        lines += [line for _, line in sorted(entries)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SequenceTable":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty sequence table")
        header = dict(field.split("=", 1) for field in lines[0].split())
        if int(header.get("version", -1)) != TABLE_VERSION:
            raise ValueError(f"unsupported table header: {lines[0]!r}")
        table = cls(limit=int(header["limit"]), type_limit=int(header.get("type_limit", -1)))
        for line in lines[1:]:
            fields = dict(field.split("=", 1) for field in line.split())
            n, r, c = int(fields["n"]), int(fields["r"]), int(fields["count"])
            if "q" in fields:
                q = Permutation.parse(fields["q"]).entries
                table.type_rows[(n, r, q)] = c
            else:
                table.rows[(n, r)] = c
        return table

    def save(self, directory: str | Path) -> Path:
        path = Path(directory) / CACHE_FILENAME
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(self.to_text(), encoding="utf-8")
        tmp.replace(path)
        return path

    @classmethod
    def load(cls, directory: str | Path) -> "SequenceTable":
        path = Path(directory) / CACHE_FILENAME
        return cls.from_text(path.read_text(encoding="utf-8"))


def build_table(limit: int = DEFAULT_LIMIT, *, type_limit: int = 8, jobs: int = 1,
                force: bool = False) -> SequenceTable:
    """Enumerate every n <= limit; per-type rows only for n <= type_limit."""
    check_limit(limit, DEFAULT_LIMIT, force)
    type_limit = min(type_limit, limit)
    table = SequenceTable(limit=limit, type_limit=type_limit)
    for n in range(limit + 1):
        result = scan(n, collect_types=n <= type_limit, jobs=jobs, limit=limit, force=True)
        for r, c in result.counts.items():
            table.rows[(n, r)] = c
        for (r, q), c in result.type_counts.items():
            table.type_rows[(n, r, q)] = c
        log.info("n=%d done: %d classes", n, len(result.counts))
    return table
