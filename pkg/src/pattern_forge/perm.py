"""
Permutations in one-line notation and the 321-pattern primitives.

Positions are 0-based inside the library.  Anything a human reads (CLI
output, error messages) is 1-based.

>>> p = Permutation.parse("125643")
>>> count_321(p)
2
>>> pattern_type(p)
Permutation(entries=(3, 4, 2, 1))
>>> reduce(Word((8, 4, 5, 2), 9))
Permutation(entries=(4, 2, 3, 1))
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import InvalidPermutation

__all__ = [
    "Permutation", "Word", "Occurrence",
    "reduce", "direct_sum", "count_321", "occurrences_321",
    "participating_indices", "pattern_type", "first_middle",
    "format_entries", "parse_entries",
]

_SEPARATORS = re.compile(r"[,\s]+")


def format_entries(entries: Sequence[int], compact: bool = False) -> str:
    """Comma form, or the all-digit form when `compact` and every value is a digit."""
    if compact and all(1 <= x <= 9 for x in entries):
        return "".join(map(str, entries))
    return ",".join(map(str, entries))


def parse_entries(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    if text.isdigit():
        # compact form: one value per digit
        return tuple(int(ch) for ch in text)
    parts = [part for part in _SEPARATORS.split(text) if part]
    try:
        return tuple(int(part) for part in parts)
    except ValueError:
        raise InvalidPermutation(f"not a list of integers: {text!r}") from None


@dataclass(frozen=True)
class Permutation:
    """A permutation of 1..n in one-line notation (n may be 0)."""
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        seen = [False] * (n + 1)
        for pos, x in enumerate(entries):
            if not isinstance(x, int) or not 1 <= x <= n:
                raise InvalidPermutation(
                    f"value {x!r} at position {pos + 1} is outside 1..{n}")
            if seen[x]:
                raise InvalidPermutation(
                    f"value {x} repeated at position {pos + 1}")
            seen[x] = True

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(parse_entries(text))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __lt__(self, other: "Permutation") -> bool:
        return self.entries < other.entries

    def __str__(self) -> str:
        return format_entries(self.entries)

    def format(self, compact: bool = False) -> str:
        return format_entries(self.entries, compact)


@dataclass(frozen=True)
class Word:
    """Distinct positive integers drawn from 1..universe."""
    entries: tuple[int, ...]
    universe: int

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if self.universe < len(entries):
            raise InvalidPermutation(
                f"universe {self.universe} is smaller than the word length {len(entries)}")
        if len(set(entries)) != len(entries):
            raise InvalidPermutation(f"word entries are not distinct: {entries}")
        for pos, x in enumerate(entries):
            if not 1 <= x <= self.universe:
                raise InvalidPermutation(
                    f"value {x} at position {pos + 1} is outside 1..{self.universe}")

    @classmethod
    def of(cls, entries: Iterable[int]) -> "Word":
        """Word whose universe is its own maximum."""
        entries = tuple(entries)
        return cls(entries, max(entries, default=0))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return format_entries(self.entries)


class Occurrence(NamedTuple):
    """0-based positions a < b < c of a 321 pattern."""
    a: int
    b: int
    c: int

    def values(self, p: Sequence[int]) -> tuple[int, int, int]:
        return p[self.a], p[self.b], p[self.c]


def _ranks(entries: Sequence[int]) -> tuple[int, ...]:
    order = sorted(range(len(entries)), key=entries.__getitem__)
    ranks = [0] * len(entries)
    for rank, pos in enumerate(order, 1):
        ranks[pos] = rank
    return tuple(ranks)


def reduce(w: Word | Sequence[int]) -> Permutation:
    """Relabel the entries of `w` by 1..len(w), preserving relative order."""
    entries = w.entries if isinstance(w, (Word, Permutation)) else tuple(w)
    return Permutation(_ranks(entries))


def direct_sum(p: Permutation, q: Permutation) -> Permutation:
    shift = len(p)
    return Permutation(p.entries + tuple(x + shift for x in q.entries))


def _middle_counts(entries: Sequence[int]) -> tuple[list[int], list[int]]:
    """For every position: (# larger entries before it, # smaller entries after it).

    Works for any sequence of distinct integers, not only for permutations.
    """
    n = len(entries)
    larger_before = [0] * n
    smaller_after = [0] * n
    for b in range(n):
        x = entries[b]
        larger_before[b] = sum(1 for a in range(b) if entries[a] > x)
        smaller_after[b] = sum(1 for c in range(b + 1, n) if entries[c] < x)
    return larger_before, smaller_after


def count_321(p: Sequence[int]) -> int:
    """Number of 321 occurrences, summed over the middle entry.

    `p` may be a Permutation, a Word or any sequence of distinct integers.
    """
    entries = p.entries if isinstance(p, (Word, Permutation)) else p
    larger_before, smaller_after = _middle_counts(entries)
    return sum(x * y for x, y in zip(larger_before, smaller_after))


def occurrences_321(p: Sequence[int]) -> list[Occurrence]:
    """All occurrences in lexicographic (a, b, c) order."""
    entries = p.entries if isinstance(p, (Word, Permutation)) else p
    n = len(entries)
    found = []
    for a in range(n):
        for b in range(a + 1, n):
            if entries[b] >= entries[a]:
                continue
            for c in range(b + 1, n):
                if entries[c] < entries[b]:
                    found.append(Occurrence(a, b, c))
    return found


def participating_indices(p: Sequence[int]) -> tuple[int, ...]:
    """Positions, in increasing order, of entries lying in some 321 occurrence.

    An entry participates iff it is a middle itself, or a later middle is
    smaller than it, or an earlier middle is larger than it.
    """
    entries = p.entries if isinstance(p, (Word, Permutation)) else p
    n = len(entries)
    larger_before, smaller_after = _middle_counts(entries)
    is_middle = [larger_before[b] > 0 and smaller_after[b] > 0 for b in range(n)]

    as_first = [False] * n
    smallest_later_middle = None
    for pos in range(n - 1, -1, -1):
        if smallest_later_middle is not None and entries[pos] > smallest_later_middle:
            as_first[pos] = True
        if is_middle[pos] and (smallest_later_middle is None
                               or entries[pos] < smallest_later_middle):
            smallest_later_middle = entries[pos]

    result = []
    largest_earlier_middle = None
    for pos in range(n):
        as_last = (largest_earlier_middle is not None
                   and entries[pos] < largest_earlier_middle)
        if is_middle[pos] or as_first[pos] or as_last:
            result.append(pos)
        if is_middle[pos] and (largest_earlier_middle is None
                               or entries[pos] > largest_earlier_middle):
            largest_earlier_middle = entries[pos]
    return tuple(result)


def pattern_type(p: Sequence[int]) -> Permutation:
    """Reduction of the participating entries; empty for avoiders."""
    entries = p.entries if isinstance(p, (Word, Permutation)) else p
    return reduce([entries[pos] for pos in participating_indices(entries)])


def first_middle(p: Sequence[int]) -> tuple[int, int] | None:
    """(0-based position, value) of the leftmost entry playing the 2, or None."""
    entries = p.entries if isinstance(p, (Word, Permutation)) else p
    running_max = 0
    suffix_min = _suffix_minima(entries)
    for b, x in enumerate(entries):
        if running_max > x and b + 1 < len(entries) and suffix_min[b + 1] < x:
            return b, x
        running_max = max(running_max, x)
    return None


def _suffix_minima(entries: Sequence[int]) -> list[int]:
    out = list(entries)
    for pos in range(len(out) - 2, -1, -1):
        out[pos] = min(out[pos], out[pos + 1])
    return out
