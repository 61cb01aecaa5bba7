"""Six ways to turn a plane tree into a pattern-avoiding permutation.

Run with ``python demos/01_trees_to_permutations.py``.
"""

# %% A small tree, written as nested child lists
from permtrees import OrderedTree, PATTERNS, contains, enumerate_avoiders, inverse_phi_321, phi
from permtrees.bijections import leaf_stats
from permtrees.gw import enumerate_trees

t = OrderedTree.from_children([[[], []], [], [[[]]]])
print("vertices in lexicographic order:")
for i, u in enumerate(t.vertices()):
    print(f"  v_{i} = {u!s:12} height {len(u)}  subtree size {t.sizes[i]}")

# %% Each map sends the 8-vertex tree to a permutation of 1..7
for sigma in PATTERNS:
    pi = phi(sigma, t)
    name = "".join(map(str, sigma))
    print(f"{name}: {pi}   contains {name}? {contains(pi, sigma)}")

# %% The 321 map is driven by the leaves: (s, p) = (vertices before the leaf, its height)
stats = leaf_stats(t)
print("s =", stats.s, " p =", stats.p, " marks s-p+1 =", stats.marks)
print("the marks are where the left-to-right maxima of", phi(321, t), "sit")

# %% ... and the leaves can be read back off the permutation
assert inverse_phi_321(phi(321, t)) == t

# %% Counting check: every tree with 7 vertices, every pattern
trees = enumerate_trees(7)
for sigma in PATTERNS:
    image = {phi(sigma, s) for s in trees}
    assert image == enumerate_avoiders(6, sigma)
print(f"{len(trees)} trees, each map hits all {len(trees)} avoiders of length 6")
