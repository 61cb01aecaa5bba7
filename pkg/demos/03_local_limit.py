"""Uniform avoiders of growing length look, near the start, like the infinite-tree image.

A scaled-down version of the acceptance experiment: 20 000 samples instead
of 100 000, so the Monte Carlo floor on the distance is higher.
"""

# %%
from permtrees.lab import limit_laws, limit_two_level, sample_laws, sample_two_level, tv_distance, tv_stderr
from permtrees.pattern_oracle import PATTERNS, pattern_name

COUNT = 20_000
N_LIST = (50, 200, 1000)

limit = limit_laws(PATTERNS, COUNT, k=2, bucket_cap=30, seed=1)
finite = {n: sample_laws(PATTERNS, n, COUNT, k=2, bucket_cap=30, seed=10 + n) for n in N_LIST}

# %% Total variation on the window (Pi(1), Pi(2)) with values above 30 lumped together
print("pattern " + "".join(f"{'n=' + str(n):>18}" for n in N_LIST))
for sigma in PATTERNS:
    cells = []
    for n in N_LIST:
        tv = tv_distance(finite[n][sigma], limit[sigma])
        se = tv_stderr(finite[n][sigma], limit[sigma])
        cells.append(f"{tv:.4f} +- {se:.4f}")
    print(f"{pattern_name(sigma):7} " + "".join(f"{c:>18}" for c in cells))

# %% The same thing one level down: the shape of the tree near its root
tree_limit = limit_two_level(COUNT, seed=2)
for shape in [(1,), (2,), (1, 1), (2, 0)]:
    row = [sample_two_level(n, COUNT, seed=20 + n)[shape] / COUNT for n in N_LIST]
    print(f"P(root children degrees = {shape}):", " ".join(f"{p:.4f}" for p in row), f"| limit {tree_limit[shape] / COUNT:.4f}")
