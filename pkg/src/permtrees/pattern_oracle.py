"""Brute-force pattern containment for length-3 patterns.

Everything here is deliberately naive; it is the ground truth the bijections
are checked against.  Permutations are tuples in one-line notation with
values ``1..n``.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache
from itertools import combinations, permutations

Permutation = tuple[int, ...]
Pattern = tuple[int, int, int]

PATTERNS: tuple[Pattern, ...] = tuple(permutations((1, 2, 3)))  # type: ignore[assignment]

MAX_ENUMERATION_N = 12


def as_pattern(sigma: str | int | Sequence[int]) -> Pattern:
    """Normalise ``"231"``, ``231`` or ``(2, 3, 1)`` to a tuple."""
    if isinstance(sigma, (str, int)):
        sigma = tuple(int(c) for c in str(sigma))
    sigma = tuple(int(a) for a in sigma)
    if sorted(sigma) != [1, 2, 3]:
        raise ValueError(f"not a permutation of 1,2,3: {sigma!r}")
    return sigma  # type: ignore[return-value]


def pattern_name(sigma) -> str:
    return "".join(map(str, as_pattern(sigma)))


def _order_type(values: Sequence[int]) -> tuple[int, ...]:
    ranked = sorted(values)
    return tuple(ranked.index(v) + 1 for v in values)


def contains(pi: Sequence[int], sigma) -> bool:
    """Exhaustive scan over all index triples."""
    sigma = as_pattern(sigma)
    return any(_order_type(tri) == sigma for tri in combinations(pi, 3))


def _closes_pattern(prefix: list[int], x: int, sigma: Pattern) -> bool:
    # any occurrence that uses x as its last entry
    m = len(prefix)
    for a in range(m):
        for b in range(a + 1, m):
            if _order_type((prefix[a], prefix[b], x)) == sigma:
                return True
    return False


def enumerate_avoiders(n: int, sigma) -> set[Permutation]:
    """All of Av_n(sigma), by backtracking with avoidance pruning."""
    sigma = as_pattern(sigma)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_ENUMERATION_N:
        raise ValueError("exhaustion bound exceeded")
    out: set[Permutation] = set()
    prefix: list[int] = []
    unused = set(range(1, n + 1))

    def extend() -> None:
        if len(prefix) == n:
            out.add(tuple(prefix))
            return
        for x in sorted(unused):
            if _closes_pattern(prefix, x, sigma):
                continue
            prefix.append(x)
            unused.remove(x)
            extend()
            unused.add(x)
            prefix.pop()

    extend()
    return out


def ltr_maxima_indices(pi: Sequence[int]) -> tuple[int, ...]:
    """1-based positions of the left-to-right maxima."""
    out = []
    best = 0
    for i, x in enumerate(pi, start=1):
        if x > best:
            out.append(i)
            best = x
    return tuple(out)


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    """Catalan numbers from ``C_0 = 1`` and ``C_{n+1} = sum C_i C_{n-i}``."""
    if n == 0:
        return 1
    return sum(catalan(i) * catalan(n - 1 - i) for i in range(n))
