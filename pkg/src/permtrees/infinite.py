"""Lazily grown size-biased Galton-Watson trees and the bijections on them.

A :class:`SpineTree` is built one spine step at a time: spine vertex
``eta_j`` gets ``K_j`` children drawn from the size-biased law, the spine
continues through a uniformly chosen child, and every other child roots an
independent Galton-Watson tree.  Those side trees are realised only as far
as a query needs them.

Random streams are split by position, not by call order.  For a tree with
seed sequence ``S``:

* spine steps come from ``S`` with spawn key suffix ``(0,)``, in order;
* the side tree at child ``p`` of ``eta_j`` comes from suffix ``(1, j, p)``.

So the realised tree is a function of the seed alone, whatever order the
queries arrive in.

The maps below return ``math.inf`` for infinite values.  Whether a fringe
subtree is infinite is decided exactly (it is iff its root is on the
spine), so every returned value is exact.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from itertools import islice
from typing import NamedTuple, Union

import numpy as np

from .gw import DEFAULT_CAP, GEOMETRIC_HALF, LazyGWTree, OffspringDistribution, child_seed, make_rng
from .pattern_oracle import as_pattern
from .tree_core import OrderedTree, Vertex

INF = math.inf
ExtendedNat = Union[int, float]

LEAF_CAP = 10**6


class HorizonExceeded(RuntimeError):
    """Evaluation of a 321 value streamed more leaves than the hard cap allows."""


class Node(NamedTuple):
    """A vertex of a spine tree.

    Spine vertex ``eta_j`` is ``Node(j, 0)``.  Otherwise ``(level, position)``
    names the side tree hanging from child ``position`` of ``eta_level`` and
    ``(h, i)`` the vertex inside it.
    """

    level: int
    position: int = 0
    h: int = 0
    i: int = 0

    @property
    def on_spine(self) -> bool:
        return self.position == 0

    @property
    def depth(self) -> int:
        return self.level if self.position == 0 else self.level + 1 + self.h


@dataclass
class SpineStep:
    k: int
    spine_index: int
    _side: dict[int, LazyGWTree] = field(default_factory=dict, repr=False)

    def side(self, position: int) -> LazyGWTree:
        return self._side[position]

    @property
    def side_positions(self) -> list[int]:
        return [p for p in range(1, self.k + 1) if p != self.spine_index]

    @property
    def side_trees(self) -> list[OrderedTree]:
        """The ``k - 1`` side trees left to right (realised in full)."""
        return [self._side[p].to_tree() for p in self.side_positions]


class SpineTree:
    """Size-biased Galton-Watson tree, grown on demand.

    Single owner: queries mutate the realised portion (never the values
    already drawn), so one tree must not be shared between threads.
    """

    def __init__(
        self,
        seed: int | np.random.SeedSequence | None = None,
        xi: OffspringDistribution = GEOMETRIC_HALF,
        cap: int = DEFAULT_CAP,
    ):
        if not xi.is_critical:
            raise ValueError("not critical")
        self.seed = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self.xi = xi
        self.cap = cap
        self.steps: list[SpineStep] = []
        self._spine_rng = make_rng(child_seed(self.seed, 0))
        self._probe = 0

    @property
    def realized_height(self) -> int:
        return len(self.steps)

    def extend(self) -> SpineTree:
        j = len(self.steps)
        k = int(self.xi.sample_size_biased(self._spine_rng))
        spine_index = int(self._spine_rng.integers(1, k + 1))
        side = {
            p: LazyGWTree(self.xi, child_seed(self.seed, 1, j, p), self.cap)
            for p in range(1, k + 1)
            if p != spine_index
        }
        self.steps.append(SpineStep(k, spine_index, side))
        return self

    def step(self, j: int) -> SpineStep:
        while len(self.steps) <= j:
            self.extend()
        self._touch(j + 1)
        return self.steps[j]

    # horizon bookkeeping: 1 + the largest height whose degree was consulted
    def _touch(self, m: int) -> None:
        if m > self._probe:
            self._probe = m

    def _side_tree(self, node: Node) -> LazyGWTree:
        return self.step(node.level).side(node.position)

    def degree(self, node: Node) -> int:
        if node.on_spine:
            return self.step(node.level).k
        self._touch(node.depth + 1)
        return self._side_tree(node).degree(node.h, node.i)

    def fringe_size(self, node: Node) -> ExtendedNat:
        """``|t_v|``; infinite exactly on the spine."""
        if node.on_spine:
            return INF
        size, deepest = self._side_tree(node).fringe(node.h, node.i)
        self._touch(node.level + 2 + deepest)
        return size

    def complement_size(self, node: Node) -> ExtendedNat:
        """``|t minus t_v|``; finite exactly on the spine."""
        if not node.on_spine:
            return INF
        total = node.level
        for j in range(node.level):
            step = self.step(j)
            for p in step.side_positions:
                tree = step.side(p)
                tree.complete()
                self._touch(j + 2 + tree.height)
                total += tree.size
        return total

    def label(self, node: Node) -> Vertex:
        spine = tuple(self.steps[j].spine_index for j in range(node.level))
        if node.on_spine:
            return spine
        return spine + (node.position,) + self._side_tree(node).path(node.h, node.i)

    def spine_vertex(self, j: int) -> Vertex:
        self.step(max(j - 1, 0))
        return self.label(Node(j))

    def _side_preorder(self, j: int, p: int) -> Iterator[Node]:
        tree = self.step(j).side(p)
        stack = [(0, 0)]
        while stack:
            h, i = stack.pop()
            yield Node(j, p, h, i)
            self._touch(j + h + 2)
            stack.extend((h + 1, c) for c in reversed(tree.children(h, i)))

    def _side_reverse_preorder(self, j: int, p: int) -> Iterator[Node]:
        tree = self.step(j).side(p)
        stack = [(0, 0, False)]
        while stack:
            h, i, expanded = stack.pop()
            if expanded:
                yield Node(j, p, h, i)
                continue
            self._touch(j + h + 2)
            stack.append((h, i, True))
            stack.extend((h + 1, c, False) for c in tree.children(h, i))

    def v_chain(self) -> Iterator[Node]:
        """``v_0, v_1, ...``: the spine and everything left of it, in lexicographic order."""
        j = 0
        while True:
            yield Node(j)
            step = self.step(j)
            for p in range(1, step.spine_index):
                yield from self._side_preorder(j, p)
            j += 1

    def w_chain(self) -> Iterator[Node]:
        """``w_1, w_2, ...``: vertices right of the spine, largest first."""
        j = 0
        while True:
            step = self.step(j)
            for p in range(step.k, step.spine_index, -1):
                yield from self._side_reverse_preorder(j, p)
            j += 1


def extend_spine(t: SpineTree) -> SpineTree:
    return t.extend()


def truncate_spine(t: SpineTree, m: int) -> OrderedTree:
    """The finite tree of vertices at height at most ``m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    left: list = []
    right: list = []
    for j in range(m):
        step = t.step(j)
        left.append([step.k])
        cut = m - j - 1
        for p in range(1, step.spine_index):
            left.append(step.side(p).truncated(cut).degrees)
        right.append([step.side(p).truncated(cut).degrees for p in range(step.spine_index + 1, step.k + 1)])
    parts = left + [[0]] + [d for level in reversed(right) for d in level]
    return OrderedTree(np.concatenate(parts))


def v_sequence(t: SpineTree, j: int) -> list[Vertex]:
    """Labels of ``v_0, ..., v_j``."""
    return [t.label(node) for node in islice(t.v_chain(), j + 1)]


def w_sequence(t: SpineTree, j: int) -> list[Vertex]:
    """Labels of ``w_1, ..., w_j`` (``w_1`` is the lexicographic maximum)."""
    return [t.label(node) for node in islice(t.w_chain(), j)]


def on_spine(t: SpineTree, u) -> bool:
    u = tuple(u)
    return all(t.step(j).spine_index == a for j, a in enumerate(u))


def _nth(chain: Iterator[Node], k: int) -> Node:
    return next(islice(chain, k, None))


def phi_inf_321(t: SpineTree, k: int) -> int:
    """Value at ``k`` of the 321 map, streaming leaves left of the spine.

    ``s`` of a leaf is its index in the v-chain and its mark is
    ``s - height + 1``.  If ``k`` is a mark the value is the matching ``s``;
    otherwise ``k`` is the ``alpha``-th non-mark and the value is the
    ``alpha``-th positive integer that is not an ``s``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    chain = enumerate(t.v_chain())
    s_vals: list[int] = []
    marks: list[int] = []

    def pull() -> None:
        if len(s_vals) >= LEAF_CAP:
            raise HorizonExceeded(f"more than {LEAF_CAP} leaves streamed")
        for idx, node in chain:
            if not node.on_spine and t.degree(node) == 0:
                s_vals.append(idx)
                marks.append(idx - node.depth + 1)
                return

    while not marks or marks[-1] < k:
        pull()
    if marks[-1] == k:
        return s_vals[-1]
    alpha = k - (len(marks) - 1)
    seen = 0
    ell = 0
    while True:
        ell += 1
        while s_vals[-1] < ell:
            pull()
        while seen < len(s_vals) and s_vals[seen] <= ell:
            seen += 1
        if ell - seen >= alpha:
            return ell


def phi_inf(sigma, t: SpineTree, k: int) -> ExtendedNat:
    """Value at ``k`` of the extension of the sigma-bijection to the infinite tree."""
    sigma = as_pattern(sigma)
    if k < 1:
        raise ValueError("k must be positive")
    if sigma in ((1, 3, 2), (1, 2, 3)):
        return INF
    if sigma == (3, 2, 1):
        return phi_inf_321(t, k)
    if sigma == (2, 3, 1):
        v = _nth(t.v_chain(), k)
        return k + t.fringe_size(v) - v.depth
    if sigma == (2, 1, 3):
        v = _nth(t.v_chain(), k)
        return t.complement_size(v) - k + v.depth
    w = _nth(t.w_chain(), k - 1)
    return k - t.fringe_size(w) + w.depth


def phi_inf_prefix(sigma, t: SpineTree, k: int) -> tuple[ExtendedNat, ...]:
    return tuple(phi_inf(sigma, t, i) for i in range(1, k + 1))


def stability_horizon(sigma, t: SpineTree, k: int) -> int:
    """A height ``m`` such that the value at ``k`` depends only on the tree cut at ``m``.

    Computed by evaluating once while recording the deepest vertex whose
    degree was consulted; the spine is then grown to at least ``m``.
    """
    t._probe = 0
    phi_inf(sigma, t, k)
    m = t._probe
    while t.realized_height < m:
        t.extend()
    return m


def two_level_profile(t: SpineTree) -> tuple[int, ...]:
    """Child degrees of the root, left to right: the shape of the tree cut at height 2."""
    step = t.step(0)
    return tuple(
        t.degree(Node(1)) if p == step.spine_index else t.degree(Node(0, p)) for p in range(1, step.k + 1)
    )


def _encode(x: ExtendedNat):
    return "inf" if x == INF else int(x)


def prefix_record(sigma, t: SpineTree, k: int) -> dict:
    """JSON-ready record of the first ``k`` values; infinity is the string ``"inf"``."""
    record = {
        "seed": t.seed.entropy,
        "sigma": "".join(map(str, as_pattern(sigma))),
        "k": k,
        "values": [_encode(x) for x in phi_inf_prefix(sigma, t, k)],
    }
    if t.seed.spawn_key:
        record["spawn_key"] = list(t.seed.spawn_key)
    return record


def parse_prefix_record(record: dict) -> tuple[ExtendedNat, ...]:
    return tuple(INF if x == "inf" else int(x) for x in record["values"])
