"""Offspring distributions, Galton-Watson trees and uniform plane trees.

Randomness comes from ``numpy.random.Generator`` objects (PCG64).  Callers
own the generator; nothing here keeps global state.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .tree_core import OrderedTree, Vertex

DEFAULT_CAP = 10**6
MAX_ENUMERATION_SIZE = 12

RNG_ALGORITHM = "numpy.random.PCG64 seeded through numpy.random.SeedSequence"


def make_rng(seed: int | np.random.SeedSequence | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


def child_seed(parent: np.random.SeedSequence, *key: int) -> np.random.SeedSequence:
    """Deterministic sub-stream: same entropy, ``key`` appended to the spawn key."""
    return np.random.SeedSequence(parent.entropy, spawn_key=tuple(parent.spawn_key) + tuple(key))


def geometric_half_pmf(k: int) -> float:
    """Geometric(1/2) on ``{0, 1, 2, ...}``: ``2**-(k+1)``."""
    if k < 0:
        return 0.0
    return 2.0 ** -(k + 1)


@dataclass(frozen=True)
class OffspringDistribution:
    """An offspring law given by its pmf on the nonnegative integers.

    Sampling uses inverse-CDF lookup on a table truncated once the
    remaining tail mass drops below ``tail``.
    """

    pmf: Callable[[int], float]
    label: str
    tail: float = 1e-15
    max_support: int = 100_000
    _table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        probs = []
        total = 0.0
        k = 0
        while k <= self.max_support:
            p = float(self.pmf(k))
            probs.append(p)
            total += p
            k += 1
            if total >= 1.0 - self.tail:
                break
        object.__setattr__(self, "_table", np.asarray(probs))

    @property
    def probabilities(self) -> np.ndarray:
        return self._table

    @cached_property
    def mean(self) -> float:
        return float(np.dot(np.arange(self._table.size), self._table))

    @property
    def is_critical(self) -> bool:
        return abs(self.mean - 1.0) < 1e-9

    @cached_property
    def _cdf(self) -> np.ndarray:
        return np.cumsum(self._table)

    @cached_property
    def _size_biased_cdf(self) -> np.ndarray:
        k = np.arange(self._table.size)
        return np.cumsum(k * self._table)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        u = rng.random(size)
        return np.minimum(np.searchsorted(self._cdf, u, side="right"), self._table.size - 1)

    def sample_size_biased(self, rng: np.random.Generator, size: int | None = None):
        if not self.is_critical:
            raise ValueError("not critical")
        cdf = self._size_biased_cdf
        u = rng.random(size)
        return np.clip(np.searchsorted(cdf, u, side="right"), 1, cdf.size - 1)


GEOMETRIC_HALF = OffspringDistribution(geometric_half_pmf, "Geometric(1/2)")


def size_biased_pmf(xi: OffspringDistribution, k: int) -> float:
    """``k * xi(k)``; requires a critical offspring law."""
    if not xi.is_critical:
        raise ValueError("not critical")
    if k < 1:
        return 0.0
    return k * float(xi.pmf(k))


class TreeOverflow(Exception):
    """A Galton-Watson tree grew past its vertex cap."""


@dataclass(frozen=True)
class Overflow:
    """Returned by :func:`sample_gw` instead of a tree that exceeded ``cap``."""

    cap: int


class LazyGWTree:
    """A Galton-Watson tree realised one generation at a time.

    ``generations[h]`` holds the offspring counts of the vertices at height
    ``h``, left to right.  Generation ``h + 1`` is drawn only when something
    asks about it, and always with exactly ``sum(generations[h])`` draws, so
    the tree obtained from a given generator does not depend on the order
    of queries.  A node is addressed as ``(h, i)``: height and position
    within its generation.
    """

    def __init__(self, xi: OffspringDistribution, rng, cap: int = DEFAULT_CAP):
        self.xi = xi
        self._rng_source = rng
        self._rng: np.random.Generator | None = rng if isinstance(rng, np.random.Generator) else None
        self.cap = cap
        self.generations: list[np.ndarray] = []
        self._offsets: list[np.ndarray] = []
        self._count = 1
        self._extinct = False
        self._sizes: list[np.ndarray] | None = None

    def _draw(self, n: int) -> np.ndarray:
        if self._rng is None:
            self._rng = make_rng(self._rng_source)
        return self.xi.sample(self._rng, n)

    def _grow(self) -> None:
        n = 1 if not self.generations else int(self.generations[-1].sum())
        if n == 0:
            self._extinct = True
            return
        deg = self._draw(n)
        self.generations.append(deg)
        self._offsets.append(np.concatenate(([0], np.cumsum(deg))))
        self._count += int(deg.sum())
        if self._count > self.cap:
            raise TreeOverflow(self.cap)

    def realize(self, h: int) -> bool:
        """Draw offspring counts down to height ``h``; False if the tree is shallower."""
        while len(self.generations) <= h and not self._extinct:
            self._grow()
        return len(self.generations) > h

    def complete(self) -> LazyGWTree:
        while not self._extinct:
            self._grow()
        return self

    @property
    def extinct(self) -> bool:
        if not self._extinct and self.generations and self.generations[-1].sum() == 0:
            self._extinct = True
        return self._extinct

    @property
    def realized_height(self) -> int:
        """Heights ``0..realized_height-1`` have known offspring counts."""
        return len(self.generations)

    @property
    def height(self) -> int:
        self.complete()
        return len(self.generations) - 1

    @property
    def size(self) -> int:
        self.complete()
        return self._count

    def degree(self, h: int, i: int) -> int:
        self.realize(h)
        return int(self.generations[h][i])

    def children(self, h: int, i: int) -> range:
        self.realize(h)
        off = self._offsets[h]
        return range(int(off[i]), int(off[i + 1]))

    def _subtree_sizes(self) -> list[np.ndarray]:
        if self._sizes is None:
            self.complete()
            sizes: list[np.ndarray] = [None] * len(self.generations)  # type: ignore[list-item]
            below = np.zeros(0, dtype=np.int64)
            for h in range(len(self.generations) - 1, -1, -1):
                cs = np.concatenate(([0], np.cumsum(below)))
                off = self._offsets[h]
                sizes[h] = 1 + cs[off[1:]] - cs[off[:-1]]
                below = sizes[h]
            self._sizes = sizes
        return self._sizes

    def fringe(self, h: int, i: int) -> tuple[int, int]:
        """Size of the subtree at ``(h, i)`` and the last height it reaches.

        Generations are drawn only until that subtree dies out.
        """
        lo, hi, g = i, i + 1, h
        total = 0
        while hi > lo:
            total += hi - lo
            self.realize(g)
            off = self._offsets[g]
            lo, hi, g = int(off[lo]), int(off[hi]), g + 1
        return total, g - 1

    def fringe_size(self, h: int, i: int) -> int:
        return self.fringe(h, i)[0]

    def path(self, h: int, i: int) -> Vertex:
        """Ulam-Harris label of node ``(h, i)`` relative to this tree's root."""
        label = []
        while h > 0:
            off = self._offsets[h - 1]
            parent = int(np.searchsorted(off, i, side="right")) - 1
            label.append(i - int(off[parent]) + 1)
            h, i = h - 1, parent
        return tuple(reversed(label))

    def preorder(self) -> Iterator[tuple[int, int]]:
        """Nodes in lexicographic order; realises generations only as reached."""
        stack = [(0, 0)]
        while stack:
            h, i = stack.pop()
            yield h, i
            stack.extend((h + 1, c) for c in reversed(self.children(h, i)))

    def reverse_preorder(self) -> Iterator[tuple[int, int]]:
        """Nodes in decreasing lexicographic order."""
        stack = [(0, 0, False)]
        while stack:
            h, i, expanded = stack.pop()
            if expanded:
                yield h, i
                continue
            stack.append((h, i, True))
            stack.extend((h + 1, c, False) for c in self.children(h, i))

    def truncated(self, m: int) -> OrderedTree:
        """The tree cut at height ``m`` (realises heights below ``m`` only)."""
        if m <= 0:
            return OrderedTree([0])
        self.realize(m - 1)
        gens = list(self.generations[:m])
        cut = int(gens[-1].sum())
        if cut:
            gens.append(np.zeros(cut, dtype=np.int64))
        return _generations_to_tree(gens)

    def to_tree(self) -> OrderedTree:
        self.complete()
        return _generations_to_tree(self.generations)


def _generations_to_tree(gens: list[np.ndarray]) -> OrderedTree:
    # the last generation must consist of leaves
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    offsets = [np.concatenate(([0], np.cumsum(g))) for g in gens]
    sizes: list[np.ndarray] = [None] * len(gens)  # type: ignore[list-item]
    below = np.zeros(0, dtype=np.int64)
    for h in range(len(gens) - 1, -1, -1):
        cs = np.concatenate(([0], np.cumsum(below)))
        off = offsets[h]
        sizes[h] = 1 + cs[off[1:]] - cs[off[:-1]]
        below = sizes[h]
    total = int(sizes[0][0])
    degrees = np.empty(total, dtype=np.int64)
    pre = np.zeros(1, dtype=np.int64)
    degrees[pre] = gens[0]
    for h in range(len(gens) - 1):
        deg = gens[h]
        if deg.sum() == 0:
            break
        parent = np.repeat(np.arange(deg.size), deg)
        cs = np.concatenate(([0], np.cumsum(sizes[h + 1])))
        earlier = cs[:-1] - cs[offsets[h][parent]]
        pre = pre[parent] + 1 + earlier
        degrees[pre] = gens[h + 1]
    return OrderedTree(degrees)


def sample_gw(xi: OffspringDistribution, rng: np.random.Generator, cap: int = DEFAULT_CAP) -> OrderedTree | Overflow:
    """One Galton-Watson tree, or :class:`Overflow` if it has more than ``cap`` vertices.

    Depth first: preorder degrees are i.i.d. draws from ``xi`` and the tree
    ends when every promised child has been placed, i.e. when the walk
    ``1 + sum(d - 1)`` first reaches zero.  Draws are taken in growing blocks.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    parts: list[np.ndarray] = []
    open_slots = 1
    drawn = 0
    block = 8
    while drawn < cap:
        d = xi.sample(rng, min(block, cap - drawn))
        walk = open_slots + np.cumsum(d - 1)
        done = np.flatnonzero(walk == 0)
        if done.size:
            parts.append(d[: done[0] + 1])
            return OrderedTree(np.concatenate(parts))
        parts.append(d)
        drawn += d.size
        open_slots = int(walk[-1])
        block *= 2
    return Overflow(cap)


def sample_uniform_dyck(n: int, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` independent uniform Dyck words with ``n`` up-steps, as int8 rows of +-1.

    Cycle lemma: a uniform arrangement of ``n`` ups and ``n + 1`` downs has
    exactly one rotation whose partial sums stay nonnegative until the final
    step; it starts right after the first minimum of the partial sums.
    Dropping that final down leaves a uniform Dyck path.
    """
    length = 2 * n + 1
    base = np.empty((count, length), dtype=np.int8)
    base[:, :n] = 1
    base[:, n:] = -1
    word = rng.permuted(base, axis=1)
    walk = np.cumsum(word, axis=1, dtype=np.int32)
    start = np.argmin(walk, axis=1) + 1
    idx = (start[:, None] + np.arange(length)) % length
    return np.take_along_axis(word, idx, axis=1)[:, :-1]


def sample_uniform_tree(size: int, rng: np.random.Generator) -> OrderedTree:
    """Uniform plane tree with ``size`` vertices."""
    if size < 1:
        raise ValueError("size must be positive")
    if size == 1:
        return OrderedTree([0])
    return OrderedTree.from_dyck(sample_uniform_dyck(size - 1, rng, 1)[0])


def enumerate_trees(size: int) -> list[OrderedTree]:
    """Every plane tree with ``size`` vertices, in lexicographic order of degree sequences."""
    if size < 1:
        raise ValueError("size must be positive")
    if size > MAX_ENUMERATION_SIZE:
        raise ValueError("exhaustion bound exceeded")
    out: list[OrderedTree] = []
    seq: list[int] = []

    def rec(remaining: int, pending: int) -> None:
        # pending = vertices promised by parents but not yet placed
        if remaining == 0:
            if pending == 0:
                out.append(OrderedTree(seq))
            return
        for d in range(0, remaining - pending + 1):
            after = pending - 1 + d
            if after == 0 and remaining > 1:
                continue
            seq.append(d)
            rec(remaining - 1, after)
            seq.pop()

    rec(size, 1)
    return out

