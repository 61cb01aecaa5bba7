"""Verification and convergence experiments.

Finite side: uniform plane trees with ``n + 1`` vertices are drawn in
batches as Dyck words and the first ``k`` values of each bijection are read
straight off the contour.  Limit side: independent :class:`SpineTree`
objects evaluated with :func:`phi_inf`.  Both are reduced to a
:class:`PrefixLaw` on the window ``{1..M, LARGE}^k`` and compared in total
variation.

Seeding: sample ``i`` of a limit run uses ``SeedSequence(seed)`` with spawn
key ``(i,)``; chunk ``c`` of a finite run uses spawn key ``(c,)`` and holds
``CHUNK`` trees.  Results therefore depend only on the flags and the seed.
"""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial, reduce
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import bijections
from .gw import DEFAULT_CAP, RNG_ALGORITHM, TreeOverflow, child_seed, enumerate_trees, make_rng, sample_uniform_dyck
from .infinite import HorizonExceeded, SpineTree, phi_inf, two_level_profile
from .pattern_oracle import PATTERNS, as_pattern, catalan, contains, enumerate_avoiders, pattern_name

LARGE = 0  # bucket code for values above the cap, including infinity
CHUNK = 1000
MAX_VERIFY_N = 9


@dataclass
class PrefixLaw:
    """Empirical law of ``(Pi(1), ..., Pi(k))`` bucketed at ``bucket_cap``.

    Keys are k-tuples of codes: ``1..bucket_cap`` or ``LARGE``.
    """

    k: int
    bucket_cap: int
    counts: dict[tuple[int, ...], int] = field(default_factory=dict)
    total: int = 0
    errors: int = 0

    @classmethod
    def from_codes(cls, codes: np.ndarray, bucket_cap: int, errors: int = 0) -> PrefixLaw:
        codes = np.asarray(codes, dtype=np.int64)
        k = codes.shape[1]
        if codes.shape[0] == 0:
            return cls(k, bucket_cap, {}, 0, errors)
        rows, n = np.unique(codes, axis=0, return_counts=True)
        counts = {tuple(r.tolist()): int(c) for r, c in zip(rows, n)}
        return cls(k, bucket_cap, counts, int(codes.shape[0]), errors)

    def merge(self, other: PrefixLaw) -> PrefixLaw:
        if (self.k, self.bucket_cap) != (other.k, other.bucket_cap):
            raise ValueError("laws on different windows")
        counts = Counter(self.counts)
        counts.update(other.counts)
        return PrefixLaw(self.k, self.bucket_cap, dict(counts), self.total + other.total, self.errors + other.errors)

    def probability(self, key: Sequence[int]) -> float:
        return self.counts.get(tuple(key), 0) / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        def enc(key):
            return ["LARGE" if c == LARGE else c for c in key]

        return {
            "k": self.k,
            "bucket_cap": self.bucket_cap,
            "total": self.total,
            "errors": self.errors,
            "counts": [[enc(key), n] for key, n in sorted(self.counts.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> PrefixLaw:
        counts = {tuple(LARGE if c == "LARGE" else int(c) for c in key): int(n) for key, n in d["counts"]}
        return cls(int(d["k"]), int(d["bucket_cap"]), counts, int(d["total"]), int(d.get("errors", 0)))


def bucket_codes(values: np.ndarray, bucket_cap: int) -> np.ndarray:
    """Map values (possibly ``inf``) to ``1..bucket_cap`` or ``LARGE``."""
    values = np.asarray(values, dtype=float)
    return np.where(values > bucket_cap, LARGE, values).astype(np.int64)


# -- finite side ---------------------------------------------------------------


def dyck_prefixes(words: np.ndarray, k: int, patterns: Iterable = PATTERNS) -> dict[tuple, np.ndarray]:
    """First ``k`` values of each bijection for a batch of Dyck words.

    ``words`` has one word of ``+1``/``-1`` steps per row.  Vertex ``v_i``
    is entered by the i-th up-step; its height is the contour height there
    and its fringe size is half the distance to the matching down-step.
    """
    words = np.asarray(words)
    rows, length = words.shape
    n = length // 2
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    up = words > 0
    height = np.cumsum(words, axis=1, dtype=np.int32)
    rank = np.cumsum(up, axis=1, dtype=np.int32)
    col = np.arange(length)
    r = np.arange(rows)

    def vertex(target: int):
        p = np.argmax(up & (rank == target), axis=1)
        h = height[r, p]
        q = np.argmax((height < h[:, None]) & (col > p[:, None]), axis=1)
        return h.astype(np.int64), (q - p + 1) // 2

    out: dict[tuple, np.ndarray] = {}
    patterns = [as_pattern(s) for s in patterns]
    want = set(patterns)
    if want & {(2, 3, 1), (2, 1, 3)}:
        vals = np.empty((rows, k), dtype=np.int64)
        for i in range(1, k + 1):
            h, size = vertex(i)
            vals[:, i - 1] = i + size - h
        out[(2, 3, 1)] = vals
        out[(2, 1, 3)] = n + 1 - vals
    if want & {(3, 1, 2), (1, 3, 2)}:
        vals = np.empty((rows, k), dtype=np.int64)
        for i in range(1, k + 1):
            h, size = vertex(n + 1 - i)
            vals[:, i - 1] = i - size + h
        out[(3, 1, 2)] = vals
        out[(1, 3, 2)] = n + 1 - vals
    if want & {(3, 2, 1), (1, 2, 3)}:
        peak = up[:, :-1] & ~up[:, 1:]
        pr, pc = np.nonzero(peak)
        s = rank[pr, pc].astype(np.int64)
        marks = s - height[pr, pc] + 1
        in_b = np.zeros((rows, n + 1), dtype=bool)
        in_a = np.zeros((rows, n + 1), dtype=bool)
        at_mark = np.zeros((rows, n + 1), dtype=np.int64)
        in_b[pr, marks] = True
        in_a[pr, s] = True
        at_mark[pr, marks] = s
        # non_a[:, l - 1] = number of non-values among 1..l
        non_a = np.cumsum(~in_a[:, 1:], axis=1)
        marks_upto = np.cumsum(in_b[:, 1 : k + 1], axis=1)
        vals = np.empty((rows, k), dtype=np.int64)
        for i in range(1, k + 1):
            alpha = i - marks_upto[:, i - 1]
            beta = np.argmax(non_a >= alpha[:, None], axis=1) + 1
            vals[:, i - 1] = np.where(in_b[:, i], at_mark[:, i], beta)
        out[(3, 2, 1)] = vals
        out[(1, 2, 3)] = n + 1 - vals
    return {s: out[s] for s in patterns}


def dyck_two_level(words: np.ndarray) -> list[tuple[int, ...]]:
    """Child degrees of the root for each Dyck word (the tree cut at height 2)."""
    words = np.asarray(words)
    rows = words.shape[0]
    up = words > 0
    before = np.cumsum(words, axis=1, dtype=np.int32) - words
    at_root = up & (before == 0)
    child = np.cumsum(at_root, axis=1)
    r, c = np.nonzero(up & (before == 1))
    width = int(child[:, -1].max()) + 1
    grand = np.bincount(r * width + child[r, c], minlength=rows * width).reshape(rows, width)
    return [tuple(g[1 : d + 1].tolist()) for g, d in zip(grand, child[:, -1])]


def sample_laws(patterns, n: int, count: int, k: int, bucket_cap: int, seed: int) -> dict[tuple, PrefixLaw]:
    """Bucketed prefix laws of the bijection images of uniform trees with ``n + 1`` vertices.

    The same trees serve every pattern.
    """
    patterns = [as_pattern(s) for s in patterns]
    if n < 1:
        raise ValueError("n must be positive")
    if k > n:
        raise ValueError("k > n")
    root = np.random.SeedSequence(seed)
    codes: dict[tuple, list[np.ndarray]] = {s: [] for s in patterns}
    done = 0
    c = 0
    while done < count:
        m = min(CHUNK, count - done)
        words = sample_uniform_dyck(n, make_rng(child_seed(root, c)), m)
        for s, vals in dyck_prefixes(words, k, patterns).items():
            codes[s].append(bucket_codes(vals, bucket_cap))
        done += m
        c += 1
    return {s: PrefixLaw.from_codes(np.concatenate(codes[s]), bucket_cap) for s in patterns}


def exact_law(sigma, n: int, k: int, bucket_cap: int) -> dict[tuple[int, ...], float]:
    """Exact bucketed prefix law for small ``n`` by enumerating all trees."""
    trees = enumerate_trees(n + 1)
    law: Counter = Counter()
    for t in trees:
        prefix = np.array(bijections.phi(sigma, t)[:k])
        law[tuple(bucket_codes(prefix, bucket_cap).tolist())] += 1
    return {key: c / len(trees) for key, c in law.items()}


# -- limit side ----------------------------------------------------------------


def limit_laws(
    patterns,
    count: int,
    k: int,
    bucket_cap: int,
    seed: int,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> dict[tuple, PrefixLaw]:
    """Bucketed laws of ``(phi_inf(1), ..., phi_inf(k))`` over independent spine trees.

    A sample whose evaluation overflows a side tree or hits the leaf cap is
    dropped and counted in ``errors`` for that pattern.  Tree ``i`` always
    gets the same stream, so the result does not depend on ``workers``.
    """
    patterns = [as_pattern(s) for s in patterns]
    shards = [(i, min(i + CHUNK, count)) for i in range(0, count, CHUNK)]
    job = partial(_limit_shard, patterns, k, bucket_cap, seed, cap)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(job, shards))
    else:
        parts = [job(shard) for shard in shards]
    return {s: reduce(PrefixLaw.merge, (part[s] for part in parts), PrefixLaw(k, bucket_cap)) for s in patterns}


def _limit_shard(patterns, k, bucket_cap, seed, cap, shard) -> dict[tuple, PrefixLaw]:
    root = np.random.SeedSequence(seed)
    rows: dict[tuple, list] = {s: [] for s in patterns}
    errors = dict.fromkeys(patterns, 0)
    for i in range(*shard):
        t = SpineTree(child_seed(root, i), cap=cap)
        for s in patterns:
            try:
                rows[s].append([phi_inf(s, t, j) for j in range(1, k + 1)])
            except (TreeOverflow, HorizonExceeded):
                errors[s] += 1
    out = {}
    for s in patterns:
        codes = bucket_codes(np.array(rows[s], dtype=float).reshape(-1, k), bucket_cap)
        out[s] = PrefixLaw.from_codes(codes, bucket_cap, errors[s])
    return out


def sample_two_level(n: int, count: int, seed: int) -> Counter:
    """Counts of the height-2 cut (as root child degrees) of uniform trees with ``n + 1`` vertices."""
    root = np.random.SeedSequence(seed)
    out: Counter = Counter()
    for c, start in enumerate(range(0, count, CHUNK)):
        words = sample_uniform_dyck(n, make_rng(child_seed(root, c)), min(CHUNK, count - start))
        out.update(dyck_two_level(words))
    return out


def limit_two_level(count: int, seed: int) -> Counter:
    """Counts of the height-2 cut of independent spine trees; tree ``i`` uses spawn key ``(i,)``."""
    root = np.random.SeedSequence(seed)
    return Counter(two_level_profile(SpineTree(child_seed(root, i))) for i in range(count))


# -- comparison ----------------------------------------------------------------


def tv_distance(a: PrefixLaw, b: PrefixLaw) -> float:
    """Half the L1 distance between the two empirical laws."""
    keys = set(a.counts) | set(b.counts)
    return 0.5 * sum(abs(a.probability(key) - b.probability(key)) for key in keys)


def tv_stderr(a: PrefixLaw, b: PrefixLaw, seed: int = 0, replicates: int = 200) -> float:
    """Bootstrap standard error of :func:`tv_distance` (multinomial resampling of both laws)."""
    keys = sorted(set(a.counts) | set(b.counts))
    pa = np.array([a.probability(key) for key in keys])
    pb = np.array([b.probability(key) for key in keys])
    rng = make_rng(seed)
    ra = rng.multinomial(a.total, pa, size=replicates) / a.total
    rb = rng.multinomial(b.total, pb, size=replicates) / b.total
    return float(np.std(0.5 * np.abs(ra - rb).sum(axis=1), ddof=1))


@dataclass
class ConvergenceRow:
    n: int
    tv: float
    tv_stderr: float
    samples: int
    errors: int


def converge(
    sigma,
    n_list: Sequence[int],
    count: int,
    k: int,
    bucket_cap: int,
    seed: int,
    cap: int = DEFAULT_CAP,
    limit: PrefixLaw | None = None,
    workers: int = 1,
) -> list[ConvergenceRow]:
    """TV distance between the finite-n prefix law and the limit law, for each n."""
    sigma = as_pattern(sigma)
    if list(n_list) != sorted(set(n_list)):
        raise ValueError("n_list must be strictly increasing")
    if limit is None:
        limit = limit_laws([sigma], count, k, bucket_cap, seed, cap, workers)[sigma]
    rows = []
    for n in n_list:
        law = sample_laws([sigma], n, count, k, bucket_cap, seed + n)[sigma]
        rows.append(ConvergenceRow(n, tv_distance(law, limit), tv_stderr(law, limit, seed=n), law.total, limit.errors))
    return rows


# -- exhaustive verification ---------------------------------------------------


@dataclass
class Check:
    name: str
    sigma: str
    n: int
    passed: bool


@dataclass
class VerifyReport:
    n_max: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def verify(n_max: int, phi_map: dict[tuple, Callable] | None = None) -> VerifyReport:
    """Exhaustive bijection, avoidance, Catalan and 321 round-trip checks for ``n <= n_max``."""
    if not 1 <= n_max <= MAX_VERIFY_N:
        raise ValueError("exhaustion bound exceeded")
    phi_map = phi_map or bijections.PHI
    checks: list[Check] = []
    for n in range(1, n_max + 1):
        trees = enumerate_trees(n + 1)
        for sigma in PATTERNS:
            name = pattern_name(sigma)
            images = [tuple(phi_map[sigma](t)) for t in trees]
            image_set = set(images)
            avoiders = enumerate_avoiders(n, sigma)
            checks.append(Check("bijectivity", name, n, len(image_set) == len(images) and image_set == avoiders))
            checks.append(Check("avoidance", name, n, not any(contains(p, sigma) for p in image_set)))
            checks.append(Check("catalan", name, n, len(image_set) == catalan(n) == len(avoiders)))
            if sigma == (3, 2, 1):
                ok = True
                for t, p in zip(trees, images):
                    try:
                        ok = bijections.inverse_phi_321(p) == t
                    except ValueError:
                        ok = False
                    if not ok:
                        break
                checks.append(Check("round_trip_321", name, n, ok))
    return VerifyReport(n_max, checks)


def manifest(command: str, flags: dict) -> dict:
    """Provenance block written next to every result."""
    try:
        lib_version = version("artifact")
    except PackageNotFoundError:  # running from a source tree
        lib_version = "unknown"
    return {
        "command": command,
        "flags": flags,
        "rng": RNG_ALGORITHM,
        "chunk": CHUNK,
        "version": lib_version,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
