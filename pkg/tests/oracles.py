"""Brute-force reference implementations, kept independent of pattern_forge."""

import itertools
import math


def triples_321(p):
    n = len(p)
    return [(a, b, c) for a, b, c in itertools.combinations(range(n), 3)
            if p[a] > p[b] > p[c]]


def count_321_bruteforce(p):
    return len(triples_321(p))


def reduce_bruteforce(w):
    # rank = 1 + number of smaller entries
    return tuple(1 + sum(1 for y in w if y < x) for x in w)


def participating_bruteforce(p):
    return sorted({pos for triple in triples_321(p) for pos in triple})


def type_bruteforce(p):
    return reduce_bruteforce([p[pos] for pos in participating_bruteforce(p)])


def first_middle_bruteforce(p):
    middles = sorted(b for _, b, _ in triples_321(p))
    return (middles[0], p[middles[0]]) if middles else None


def all_perms(n):
    return list(itertools.permutations(range(1, n + 1)))


def count_with_r(n, r):
    return sum(1 for p in all_perms(n) if count_321_bruteforce(p) == r)


def catalan_recurrence(n_max):
    """Catalan numbers from C(0) = 1, C(m+1) = sum C(k) C(m-k)."""
    cat = [1]
    for m in range(n_max):
        cat.append(sum(cat[k] * cat[m - k] for k in range(m + 1)))
    return cat


def factorial_sum(top):
    total, fact = 0, 1
    for m in range(1, top + 1):
        fact *= m
        total += fact
    return total


def s_closed_form(z):
    return (1 - math.sqrt(1 - 4 * z)) / (2 * z)
