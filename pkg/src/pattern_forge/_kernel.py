"""
Compiled inner loops for exhaustive enumeration.

Permutations are int64 arrays holding 1..n.  The rank space 0..n!-1 (in
lexicographic order) is walked in contiguous ranges, so callers can hand
disjoint ranges to separate workers and add the results.
"""

import numpy as np
from numba import njit, types
from numba.typed import Dict

# packed type keys use 4 bits per entry; ranks start at 1, so the first
# zero nibble marks the end
MAX_TYPE_LENGTH = 15

_KEY_TYPE = types.UniTuple(types.int64, 2)


@njit(cache=True)
def unrank(n, rank):
    """The permutation with the given lexicographic rank."""
    pool = np.arange(1, n + 1)
    out = np.empty(n, dtype=np.int64)
    fact = 1
    for m in range(2, n):
        fact *= m
    avail = n
    for pos in range(n):
        if avail > 1:
            idx = rank // fact
            rank = rank % fact
            fact //= avail - 1
        else:
            idx = 0
        out[pos] = pool[idx]
        for m in range(idx, avail - 1):
            pool[m] = pool[m + 1]
        avail -= 1
    return out


@njit(cache=True)
def next_permutation(p):
    n = p.shape[0]
    i = n - 2
    while i >= 0 and p[i] > p[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while p[j] < p[i]:
        j -= 1
    p[i], p[j] = p[j], p[i]
    lo, hi = i + 1, n - 1
    while lo < hi:
        p[lo], p[hi] = p[hi], p[lo]
        lo += 1
        hi -= 1
    return True


@njit(cache=True)
def _larger_before(p, out):
    n = p.shape[0]
    for b in range(n):
        x = p[b]
        c = 0
        for a in range(b):
            if p[a] > x:
                c += 1
        out[b] = c


@njit(cache=True)
def count_321(p, larger):
    """Occurrence count; `larger` is scratch space of length n."""
    _larger_before(p, larger)
    total = 0
    for b in range(p.shape[0]):
        smaller_after = p[b] - 1 - (b - larger[b])
        total += larger[b] * smaller_after
    return total


@njit(cache=True)
def _participating(p, larger, mask):
    """Fill `mask` with participation flags (after count_321 filled `larger`)."""
    n = p.shape[0]
    big = n + 1
    for b in range(n):
        mask[b] = larger[b] > 0 and p[b] - 1 - (b - larger[b]) > 0
    # an entry is a "1" when an earlier middle exceeds it
    top = 0
    first = np.empty(n, dtype=np.bool_)
    for b in range(n):
        first[b] = mask[b]
    for b in range(n):
        if p[b] < top:
            mask[b] = True
        if first[b] and p[b] > top:
            top = p[b]
    # an entry is a "3" when a later middle is below it
    low = big
    for b in range(n - 1, -1, -1):
        if p[b] > low:
            mask[b] = True
        if first[b] and p[b] < low:
            low = p[b]
    count = 0
    for b in range(n):
        if mask[b]:
            count += 1
    return count


@njit(cache=True)
def _pack_type(p, mask):
    """Pack the reduced participating subsequence into one int64 key."""
    n = p.shape[0]
    key = 0
    length = 0
    for b in range(n):
        if mask[b]:
            rank = 1
            for a in range(n):
                if mask[a] and p[a] < p[b]:
                    rank += 1
            key |= rank << (4 * length)
            length += 1
    return key


def unpack_type(key):
    out = []
    while key:
        out.append(key & 0xF)
        key >>= 4
    return tuple(out)


@njit(cache=True)
def scan_range(n, start, stop, collect_types):
    """Tally ranks start..stop-1.

    Returns (counts by r, worst type-length excess over 3r, type tallies).
    The excess is max(len(type) - 3r) over non-avoiders; <= 0 means the
    cap holds.  Type tallies map (r, packed type) to a count and stay empty
    unless `collect_types` is set.
    """
    max_r = n * (n - 1) * (n - 2) // 6
    counts = np.zeros(max_r + 1, dtype=np.int64)
    types_seen = Dict.empty(key_type=_KEY_TYPE, value_type=types.int64)
    excess = -(1 << 62)
    if start >= stop:
        return counts, excess, types_seen
    p = unrank(n, start)
    larger = np.empty(n, dtype=np.int64)
    mask = np.empty(n, dtype=np.bool_)
    for _ in range(stop - start):
        r = count_321(p, larger)
        counts[r] += 1
        if r > 0:
            length = _participating(p, larger, mask)
            if length - 3 * r > excess:
                excess = length - 3 * r
            if collect_types:
                key = (r, _pack_type(p, mask))
                types_seen[key] = types_seen.get(key, 0) + 1
        next_permutation(p)
    return counts, excess, types_seen


@njit(cache=True)
def list_range(n, r, start, stop):
    """Rows (in lexicographic order) of the permutations in start..stop-1 with exactly r occurrences."""
    larger = np.empty(n, dtype=np.int64)
    found = 0
    capacity = 1024
    out = np.empty((capacity, n), dtype=np.int64)
    if start >= stop:
        return out[:0]
    p = unrank(n, start)
    for _ in range(stop - start):
        if count_321(p, larger) == r:
            if found == capacity:
                capacity *= 2
                grown = np.empty((capacity, n), dtype=np.int64)
                grown[:found] = out[:found]
                out = grown
            out[found] = p
            found += 1
        next_permutation(p)
    return out[:found]
