"""The six bijections from plane trees with n+1 vertices onto Av_n(sigma).

Vertex ``v_i`` is the i-th vertex in lexicographic order (root is ``v_0``);
``w_i`` is the i-th lexicographically largest vertex, so ``w_1`` is the
maximum.  All maps return tuples of Python ints.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .pattern_oracle import Permutation, as_pattern, ltr_maxima_indices
from .tree_core import OrderedTree


@dataclass(frozen=True)
class LeafStats:
    """Per-leaf data in lexicographic leaf order.

    ``s[i]`` counts the vertices lexicographically below leaf ``i`` and
    ``p[i]`` is its height.
    """

    s: tuple[int, ...]
    p: tuple[int, ...]

    @property
    def marks(self) -> tuple[int, ...]:
        """The positions ``s_i - p_i + 1`` that become left-to-right maxima."""
        return tuple(a - b + 1 for a, b in zip(self.s, self.p))


def _check_size(t: OrderedTree) -> None:
    if len(t) < 2:
        raise ValueError("tree too small")


def leaf_stats(t: OrderedTree) -> LeafStats:
    _check_size(t)
    idx = np.flatnonzero(t.degrees == 0)
    return LeafStats(tuple(idx.tolist()), tuple(t.depths[idx].tolist()))


def _phi_321_array(t: OrderedTree) -> np.ndarray:
    _check_size(t)
    n = len(t) - 1
    idx = np.flatnonzero(t.degrees == 0)
    s = idx
    b = idx - t.depths[idx] + 1
    perm = np.zeros(n + 1, dtype=np.int64)
    perm[b] = s
    rest_pos = np.setdiff1d(np.arange(1, n + 1), b)
    rest_val = np.setdiff1d(np.arange(1, n + 1), s)
    perm[rest_pos] = rest_val
    return perm[1:]


def phi_321(t: OrderedTree) -> Permutation:
    return tuple(_phi_321_array(t).tolist())


def phi_123(t: OrderedTree) -> Permutation:
    # complement within [n]; n + 1 == |t|
    return tuple((len(t) - _phi_321_array(t)).tolist())


def _phi_231_array(t: OrderedTree) -> np.ndarray:
    _check_size(t)
    i = np.arange(1, len(t))
    return i + t.sizes[1:] - t.depths[1:]


def phi_231(t: OrderedTree) -> Permutation:
    return tuple(_phi_231_array(t).tolist())


def phi_213(t: OrderedTree) -> Permutation:
    # |t \ t_v| - i + |v|, which is the complement of phi_231
    return tuple((len(t) - _phi_231_array(t)).tolist())


def _phi_312_array(t: OrderedTree) -> np.ndarray:
    _check_size(t)
    i = np.arange(1, len(t))
    # w_i = v_{n+1-i}
    sizes = t.sizes[:0:-1]
    depths = t.depths[:0:-1]
    return i - sizes + depths


def phi_312(t: OrderedTree) -> Permutation:
    return tuple(_phi_312_array(t).tolist())


def phi_132(t: OrderedTree) -> Permutation:
    return tuple((len(t) - _phi_312_array(t)).tolist())


PHI: dict[tuple[int, int, int], Callable[[OrderedTree], Permutation]] = {
    (3, 2, 1): phi_321,
    (1, 2, 3): phi_123,
    (2, 3, 1): phi_231,
    (2, 1, 3): phi_213,
    (3, 1, 2): phi_312,
    (1, 3, 2): phi_132,
}


def phi(sigma, t: OrderedTree) -> Permutation:
    """Dispatch on the pattern."""
    return PHI[as_pattern(sigma)](t)


def inverse_phi_321(pi: Sequence[int]) -> OrderedTree:
    """Rebuild the tree from the left-to-right maxima of ``pi``.

    Leaf ``i`` sits at preorder position ``s_i`` and height ``p_i``; the
    vertices strictly between consecutive leaves form a chain of first
    children ending at the next leaf.  This fixes the preorder height
    sequence, hence the tree.  The result is checked by mapping it forward
    again, which also rejects inputs that contain 321.
    """
    pi = tuple(int(x) for x in pi)
    n = len(pi)
    if n == 0 or sorted(pi) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..n with n >= 1")
    depths = [0]
    prev_s, prev_depth = 0, 0
    for m in ltr_maxima_indices(pi):
        s = pi[m - 1]
        p = s - m + 1
        chain = s - prev_s
        start = p - chain + 1
        # after the root the chain starts at height 1; after a leaf it cannot go deeper
        if chain < 1 or start < 1 or start > max(prev_depth, 1):
            raise ValueError("not 321-avoiding")
        depths.extend(range(start, p + 1))
        prev_s, prev_depth = s, p
    if prev_s != n:
        raise ValueError("not 321-avoiding")
    t = OrderedTree.from_depths(depths)
    if phi_321(t) != pi:
        raise ValueError("not 321-avoiding")
    return t
