"""Ulam-Harris vertices and finite rooted ordered (plane) trees.

A vertex is a tuple of positive integers; the root is ``()``.  A finite tree
is stored as its preorder degree sequence (the Lukasiewicz word).  Preorder
and lexicographic order on Ulam-Harris labels coincide, so position ``i`` in
the degree sequence is the vertex ``v_i`` of the lexicographic listing.
Derived arrays (depths, subtree sizes, labels) are computed with numpy on
first use and cached.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction

import numpy as np

Vertex = tuple[int, ...]

ROOT: Vertex = ()

# Enumeration f of the Ulam-Harris tree used by local_distance: breadth-first
# over labels <= METRIC_BASE and heights <= METRIC_MAX_HEIGHT.
METRIC_BASE = 8
METRIC_MAX_HEIGHT = 16


def lex_compare(u: Vertex, v: Vertex) -> int:
    """Return -1, 0 or 1 as ``u`` is lexicographically below, equal to or above ``v``.

    A proper prefix precedes all of its extensions.
    """
    u, v = tuple(u), tuple(v)
    return (u > v) - (u < v)


def validate_tree(vertices: Iterable[Sequence[int]]) -> bool:
    """Check root membership, ancestor closure and left closure."""
    s = {tuple(u) for u in vertices}
    if ROOT not in s:
        return False
    for u in s:
        if any((not isinstance(a, (int, np.integer))) or a < 1 for a in u):
            return False
        if u and u[:-1] not in s:
            return False
        if u and u[-1] > 1 and u[:-1] + (u[-1] - 1,) not in s:
            return False
    return True


class OrderedTree:
    """A finite rooted ordered tree, immutable.

    Build one with :meth:`from_vertices`, :meth:`from_degrees`,
    :meth:`from_depths`, :meth:`from_dyck` or :meth:`from_children`.
    """

    __slots__ = ("_deg", "_cache")

    def __init__(self, degrees: Sequence[int] | np.ndarray):
        deg = np.array(degrees, dtype=np.int64).ravel()
        if deg.size == 0:
            raise ValueError("a tree has at least one vertex")
        if (deg < 0).any():
            raise ValueError("negative degree")
        walk = np.cumsum(deg - 1)
        if walk[-1] != -1 or (deg.size > 1 and walk[:-1].min() < 0):
            raise ValueError("not a preorder degree sequence of a tree")
        deg.flags.writeable = False
        self._deg = deg
        self._cache: dict = {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_degrees(cls, degrees: Sequence[int] | np.ndarray) -> OrderedTree:
        return cls(degrees)

    @classmethod
    def from_vertices(cls, vertices: Iterable[Sequence[int]]) -> OrderedTree:
        s = {tuple(int(a) for a in u) for u in vertices}
        if not validate_tree(s):
            raise ValueError("vertex set is not a rooted ordered tree")
        order = sorted(s)
        nchild: dict[Vertex, int] = {}
        for u in order:
            if u:
                nchild[u[:-1]] = max(nchild.get(u[:-1], 0), u[-1])
        return cls([nchild.get(u, 0) for u in order])

    @classmethod
    def from_depths(cls, depths: Sequence[int] | np.ndarray) -> OrderedTree:
        """Tree whose preorder vertices have the given heights."""
        d = np.asarray(depths, dtype=np.int64).ravel()
        if d.size == 0 or d[0] != 0:
            raise ValueError("depth sequence must start with the root at 0")
        if d.size > 1 and ((d[1:] < 1).any() or (np.diff(d) > 1).any()):
            raise ValueError("invalid preorder depth sequence")
        n = d.size
        keys = d * (n + 1) + np.arange(n)
        order = np.sort(keys)
        # parent of i: last vertex before i one level up
        pos = np.searchsorted(order, (d[1:] - 1) * (n + 1) + np.arange(1, n)) - 1
        parents = order[pos] % (n + 1)
        return cls(np.bincount(parents, minlength=n))

    @classmethod
    def from_dyck(cls, steps: Sequence[int] | np.ndarray) -> OrderedTree:
        """Decode a contour (Dyck) word; ``+1``/``True`` is a step away from the root."""
        st = np.asarray(steps)
        up = st > 0
        h = np.cumsum(np.where(up, 1, -1))
        if h.size and (h.min() < 0 or h[-1] != 0):
            raise ValueError("not a Dyck path")
        return cls.from_depths(np.concatenate(([0], h[up])))

    @classmethod
    def from_children(cls, nested: list) -> OrderedTree:
        """Decode the JSON children-array form, e.g. ``[[], []]`` for a cherry."""
        degrees = []
        stack = [nested]
        while stack:
            node = stack.pop()
            if not isinstance(node, list):
                raise ValueError("children-array entries must be lists")
            degrees.append(len(node))
            stack.extend(reversed(node))
        return cls(degrees)

    # -- derived data -------------------------------------------------------

    @property
    def degrees(self) -> np.ndarray:
        """Preorder degree sequence (read-only)."""
        return self._deg

    def __len__(self) -> int:
        return int(self._deg.size)

    @property
    def depths(self) -> np.ndarray:
        if "depths" not in self._cache:
            tau = np.sort(self._exits())
            idx = np.arange(len(self))
            d = idx - np.searchsorted(tau, idx, side="right")
            d.flags.writeable = False
            self._cache["depths"] = d
        return self._cache["depths"]

    @property
    def sizes(self) -> np.ndarray:
        """Fringe subtree size of every vertex, in preorder."""
        if "sizes" not in self._cache:
            s = self._exits() - np.arange(len(self))
            s.flags.writeable = False
            self._cache["sizes"] = s
        return self._cache["sizes"]

    def _exits(self) -> np.ndarray:
        # Vertex j's subtree occupies preorder slots [j, tau_j), where tau_j is
        # the first time the Lukasiewicz walk drops below its value at j.
        if "exits" not in self._cache:
            n = len(self)
            walk = np.concatenate(([0], np.cumsum(self._deg - 1))) + 1
            keys = walk * (n + 2) + np.arange(n + 1)
            order = np.sort(keys)
            q = (walk[:-1] - 1) * (n + 2) + np.arange(1, n + 1)
            self._cache["exits"] = order[np.searchsorted(order, q)] % (n + 2)
        return self._cache["exits"]

    @property
    def height(self) -> int:
        return int(self.depths.max())

    def vertices(self) -> list[Vertex]:
        """All vertices in lexicographic order."""
        if "labels" not in self._cache:
            labels: list[Vertex] = [ROOT]
            stack: list[list] = []  # [label, children left to emit]
            for d in self._deg.tolist():
                if stack:
                    top = stack[-1]
                    top[2] += 1
                    labels.append(top[0] + (top[2],))
                    if top[2] == top[1]:
                        stack.pop()
                if d:
                    stack.append([labels[-1], d, 0])
            self._cache["labels"] = labels
        return self._cache["labels"]

    def index(self, u: Sequence[int]) -> int | None:
        """Preorder position of ``u``, or ``None`` if ``u`` is not a vertex."""
        if "index" not in self._cache:
            self._cache["index"] = {v: i for i, v in enumerate(self.vertices())}
        return self._cache["index"].get(tuple(u))

    def __contains__(self, u) -> bool:
        return self.index(u) is not None

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.vertices())

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderedTree):
            return NotImplemented
        return np.array_equal(self._deg, other._deg)

    def __hash__(self) -> int:
        return hash(self._deg.tobytes())

    def __repr__(self) -> str:
        if len(self) <= 12:
            return f"OrderedTree({self.to_children()!r})"
        return f"OrderedTree(<{len(self)} vertices>)"

    # -- encodings ----------------------------------------------------------

    def to_children(self) -> list:
        """Nested children-array form used for JSON."""
        root: list = []
        stack: list[list] = []  # [node list, children left]
        for d in self._deg.tolist():
            node = root if not stack else []
            if stack:
                parent = stack[-1]
                parent[0].append(node)
                parent[1] -= 1
                if parent[1] == 0:
                    stack.pop()
            if d:
                stack.append([node, d])
        return root

    def to_dyck(self) -> np.ndarray:
        """Contour word as a boolean array, ``True`` for a step away from the root."""
        d = self.depths
        # before vertex i: descend to its parent, then one step up; finally return home
        counts = np.ones(2 * d.size - 1, dtype=np.int64)
        counts[0:-1:2] = np.append(0, d[1:-1] - d[2:] + 1) if d.size > 1 else []
        counts[-1] = d[-1]
        values = np.zeros(counts.size, dtype=bool)
        values[1::2] = True
        return np.repeat(values, counts)


def _as_tree(t) -> OrderedTree:
    return t if isinstance(t, OrderedTree) else OrderedTree.from_vertices(t)


def degree(t: OrderedTree, u: Sequence[int]) -> int:
    """Number of children of ``u``; ``-1`` when ``u`` is not in ``t``."""
    i = t.index(u)
    return -1 if i is None else int(t.degrees[i])


def fringe(t: OrderedTree, u: Sequence[int]) -> OrderedTree:
    """Descendants of ``u`` re-rooted at ``()``."""
    i = t.index(u)
    if i is None:
        raise ValueError("vertex not in tree")
    return OrderedTree(t.degrees[i : i + t.sizes[i]])


def truncate(t: OrderedTree, m: int) -> OrderedTree:
    """Vertices of height at most ``m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    d = t.depths
    keep = d <= m
    return OrderedTree(np.where(d == m, 0, t.degrees)[keep])


def count_at_height(t: OrderedTree, k: int) -> int:
    return int(np.count_nonzero(t.depths == k))


def vertex_order(t: OrderedTree) -> list[Vertex]:
    return list(t.vertices())


def leaves(t: OrderedTree) -> list[Vertex]:
    labels = t.vertices()
    return [labels[i] for i in np.flatnonzero(t.degrees == 0)]


def attach(t: OrderedTree, leaf: Sequence[int], subtrees: Sequence[OrderedTree]) -> OrderedTree:
    """Hang ``subtrees`` (left to right) below the leaf ``leaf`` of ``t``."""
    if not subtrees:
        raise ValueError("need at least one subtree")
    i = t.index(leaf)
    if i is None or t.degrees[i] != 0:
        raise ValueError("attachment point must be a leaf of the tree")
    deg = t.degrees
    parts = [deg[:i], [len(subtrees)], *(_as_tree(s).degrees for s in subtrees), deg[i + 1 :]]
    return OrderedTree(np.concatenate(parts))


def metric_index(u: Sequence[int]) -> int | None:
    """Position of ``u`` in the breadth-first enumeration used by :func:`local_distance`."""
    h = len(u)
    if h > METRIC_MAX_HEIGHT or any(a > METRIC_BASE for a in u):
        return None
    b = METRIC_BASE
    offset = (b**h - 1) // (b - 1)
    rank = 0
    for a in u:
        rank = rank * b + (a - 1)
    return 1 + offset + rank


def local_distance(t: OrderedTree, s: OrderedTree) -> Fraction:
    """Exact value of the local metric sum over the truncated enumeration.

    Terms vanish wherever both trees lack the vertex, so only ``t | s`` is
    visited.  Vertices outside the enumeration domain are ignored.
    """
    total = Fraction(0)
    for u in set(t.vertices()) | set(s.vertices()):
        if degree(t, u) != degree(s, u):
            i = metric_index(u)
            if i is not None:
                total += Fraction(1, 2**i)
    return total
