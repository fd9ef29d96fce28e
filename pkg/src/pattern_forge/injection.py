"""
The injection on permutations with r copies of 321, split by type, and its
partial inverse.

A permutation p whose first middle entry (the leftmost entry playing the
"2") is beta sits at 1-based position k.  Writing p = w1 beta w2, let the
gammas be the entries of w1 above beta and the alphas the entries of w2
below beta.  Then

    sigma = w1 + alphas,     tau = gammas + w2,
    phi(p) = (reduce(sigma), reduce(tau)).

Given the type q of p, `psi` rebuilds p from the two reductions.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import Avoider, NotAType, NotInImage
from .perm import (
    Permutation, Word, count_321, first_middle, pattern_type, reduce,
)

__all__ = [
    "TypeProfile", "Decomposition", "InjectionImage", "VerificationReport",
    "type_profile", "decompose", "phi", "psi", "verify_injection",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TypeProfile:
    q: Permutation
    b1_value: int
    b1_position: int  # 0-based
    i: int  # entries right of b1 and smaller
    j: int  # entries left of b1 and larger
    s: int
    t: int
    r: int


@dataclass(frozen=True)
class Decomposition:
    w1: Word
    beta1: int
    k: int  # 1-based position of beta1
    w2: Word
    gammas: tuple[int, ...]
    alphas: tuple[int, ...]
    sigma: Word
    tau: Word

    @property
    def i(self) -> int:
        return len(self.alphas)

    @property
    def j(self) -> int:
        return len(self.gammas)


@dataclass(frozen=True)
class InjectionImage:
    left: Permutation
    right: Permutation
    q: Permutation
    n: int
    k: int


@lru_cache(maxsize=1 << 16)
def type_profile(q: Permutation) -> TypeProfile:
    """Derived quantities of a type q: first middle b1, i, j, s and t."""
    r = count_321(q)
    if r == 0:
        raise NotAType(f"{q} avoids 321, so it is not a type")
    q_type = pattern_type(q)
    if q_type != q:
        raise NotAType(f"{q} is not saturated; its own type is {q_type}")
    pos, b1 = first_middle(q)
    before, after = q.entries[:pos], q.entries[pos + 1:]
    i = sum(1 for x in after if x < b1)
    j = sum(1 for x in before if x > b1)
    s = count_321(before + tuple(x for x in after if x < b1))
    t = count_321(tuple(x for x in before if x > b1) + after)
    return TypeProfile(q, b1, pos, i, j, s, t, r)


def decompose(p: Permutation) -> Decomposition:
    middle = first_middle(p)
    if middle is None:
        raise Avoider(f"{p} has no 321 occurrence")
    pos, beta1 = middle
    n = len(p)
    w1, w2 = p.entries[:pos], p.entries[pos + 1:]
    gammas = tuple(x for x in w1 if x > beta1)
    alphas = tuple(x for x in w2 if x < beta1)
    return Decomposition(
        w1=Word(w1, n), beta1=beta1, k=pos + 1, w2=Word(w2, n),
        gammas=gammas, alphas=alphas,
        sigma=Word(w1 + alphas, n), tau=Word(gammas + w2, n),
    )


def phi(p: Permutation) -> InjectionImage:
    d = decompose(p)
    return InjectionImage(
        left=reduce(d.sigma), right=reduce(d.tau),
        q=pattern_type(p), n=len(p), k=d.k,
    )


def _rank_replace(values: list[int], targets: list[int], replacements: list[int]) -> list[int]:
    """Replace each of `targets` by the equally ranked entry of `replacements`."""
    mapping = dict(zip(sorted(targets), sorted(replacements)))
    return [mapping.get(x, x) for x in values]


def psi(left: Permutation, right: Permutation, q: Permutation) -> Permutation:
    """Rebuild p from phi(p) = (left, right) and the type q of p.

    Raises NotInImage when no p of type q maps to (left, right).
    """
    profile = type_profile(q)
    i, j = profile.i, profile.j
    n = len(left) + len(right) + 1 - i - j
    if len(left) < i + j or len(right) < i + j or n < 1:
        raise NotInImage(
            f"lengths {len(left)} and {len(right)} are too short for type {q} "
            f"(i={i}, j={j})")

    alphas = list(left.entries[-i:])
    shift = n - max(right.entries)
    shifted = [x + shift for x in right.entries]
    gammas = shifted[:j]

    sigma = _rank_replace(list(left.entries), sorted(left.entries)[-j:], gammas)
    tau = _rank_replace(shifted, sorted(shifted)[:i], alphas)
    w1, w2 = sigma[:-i], tau[j:]

    used = w1 + w2
    missing = set(range(1, n + 1)).difference(used)
    if len(set(used)) != len(used) or len(missing) != 1 or any(
            not 1 <= x <= n for x in used):
        raise NotInImage(
            f"({left}, {right}) with type {q} does not leave a unique middle value")
    beta1 = missing.pop()
    p = Permutation(tuple(w1) + (beta1,) + tuple(w2))

    try:
        image = phi(p)
    except Avoider:
        raise NotInImage(
            f"({left}, {right}) with type {q} rebuilds {p}, which avoids 321") from None
    if (image.left, image.right, image.q) != (left, right, q):
        raise NotInImage(
            f"({left}, {right}) is not the image of a permutation of type {q}; "
            f"the candidate {p} maps to ({image.left}, {image.right}) "
            f"with type {image.q}")
    return p


@dataclass
class TypeTally:
    q: Permutation
    count: int = 0
    violations: int = 0


@dataclass
class VerificationReport:
    n: int
    r: int
    rows: list[TypeTally]
    messages: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return sum(row.count for row in self.rows)

    @property
    def violations(self) -> int:
        return sum(row.violations for row in self.rows)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "types": [
                {"type": str(row.q), "count": row.count, "violations": row.violations}
                for row in self.rows
            ],
            "count": self.count,
            "violations": self.violations,
            "messages": list(self.messages),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"n={self.n} r={self.r}"]
        for row in self.rows:
            lines.append(f"type={row.q} count={row.count} violations={row.violations}")
        lines.append(f"total count={self.count} violations={self.violations}")
        lines.extend(f"violation: {msg}" for msg in self.messages)
        return "\n".join(lines) + "\n"


# messages kept per report; the tallies still count every violation
_MAX_MESSAGES = 20


def _check_one(p: Permutation, r: int) -> tuple[Permutation, tuple, list[str]]:
    """Check every per-permutation contract; return (type, image key, problems)."""
    problems = []
    image = phi(p)
    q = image.q
    key = (image.left.entries, image.right.entries)
    profile = type_profile(q)
    n, k = len(p), image.k
    if (len(image.left), len(image.right)) != (k - 1 + profile.i, n - k + profile.j):
        problems.append(
            f"{p}: image lengths ({len(image.left)}, {len(image.right)}) "
            f"differ from ({k - 1 + profile.i}, {n - k + profile.j})")
    s, t = count_321(image.left), count_321(image.right)
    if (s, t) != (profile.s, profile.t):
        problems.append(f"{p}: image counts ({s}, {t}) differ from ({profile.s}, {profile.t})")
    if not (s < r and t < r):
        problems.append(f"{p}: image counts ({s}, {t}) are not both below r={r}")
    try:
        back = psi(image.left, image.right, q)
    except NotInImage as exc:
        problems.append(f"{p}: inverse failed: {exc}")
    else:
        if back != p:
            problems.append(f"{p}: inverse returned {back}")
    return q, key, problems


def _check_chunk(chunk: list[tuple[int, ...]], r: int) -> list[tuple]:
    out = []
    for entries in chunk:
        q, key, problems = _check_one(Permutation(entries), r)
        out.append((q.entries, key, problems))
    return out


def verify_injection(n: int, r: int, *, jobs: int = 1, limit: int | None = None,
                     force: bool = False) -> VerificationReport:
    """Exhaustively check the injection on S_{n,r}(321).

    Every p gets the round trip, length and count checks; images are then
    checked for collisions within each type.  Rows come out sorted by type,
    whatever the worker count.
    """
    from .enumeration import enumerate_fixed

    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    perms = enumerate_fixed(n, r, limit=limit, force=force, jobs=jobs, raw=True)

    if jobs > 1 and len(perms) > 1:
        size = -(-len(perms) // jobs)
        chunks = [perms[lo:lo + size] for lo in range(0, len(perms), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [item for part in pool.map(_check_chunk, chunks, [r] * len(chunks))
                       for item in part]
    else:
        results = _check_chunk(perms, r)

    tallies: dict[tuple[int, ...], TypeTally] = {}
    seen: dict[tuple[int, ...], dict[tuple, tuple[int, ...]]] = defaultdict(dict)
    messages = []
    for entries, (q, key, problems) in zip(perms, results):
        tally = tallies.setdefault(q, TypeTally(Permutation(q)))
        tally.count += 1
        other = seen[q].get(key)
        if other is not None:
            problems = problems + [
                f"{Permutation(entries)}: same image as {Permutation(other)} within type {tally.q}"]
        else:
            seen[q][key] = entries
        if problems:
            tally.violations += 1
            messages.extend(problems)

    rows = [tallies[q] for q in sorted(tallies)]
    report = VerificationReport(n, r, rows, messages[:_MAX_MESSAGES])
    if not report.ok:
        log.warning("n=%d r=%d: %d violations", n, r, report.violations)
    return report
