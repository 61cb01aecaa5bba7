"""The size-biased tree: one infinite spine with finite trees hanging off it.

Nothing is drawn until it is asked for, and everything is a function of the
seed, so the same tree comes back whatever order it is explored in.
"""

# %%
from permtrees import PATTERNS, SpineTree, phi_inf, stability_horizon, truncate_spine, v_sequence, w_sequence

t = SpineTree(seed=2024)
for j in range(6):
    step = t.step(j)
    sizes = [step.side(p).size for p in step.side_positions]
    print(f"eta_{j} = {t.spine_vertex(j)!s:18} children {step.k}, spine goes to child {step.spine_index}, side sizes {sizes}")

# %% Smallest vertices (the spine and what hangs to its left) and largest vertices (right of it)
print("v_0..v_8:", v_sequence(t, 8))
print("w_1..w_6:", w_sequence(t, 6))

# %% The maps extend to the infinite tree; a value is infinite when its subtree is the infinite one
horizons = {}
for sigma in PATTERNS:
    name = "".join(map(str, sigma))
    values = [phi_inf(sigma, t, k) for k in range(1, 9)]
    horizons[sigma] = max(stability_horizon(sigma, t, k) for k in range(1, 9))
    print(f"{name}: {values}  (decided below height {horizons[sigma]})")

# %% A finite cut at or above the horizon reproduces every finite value
from permtrees import phi

height = max(horizons.values())
cut = truncate_spine(t, height)
print(f"cut at height {height} has {len(cut)} vertices")
for sigma in PATTERNS:
    exact = [phi_inf(sigma, t, k) for k in range(1, 9)]
    approx = phi(sigma, cut)[:8]
    assert all(a == b for a, b in zip(exact, approx) if a != float("inf"))
print("finite values agree with the cut tree")
# a cut below the horizon is not enough: here the 231 value at k = 7 changes
print("231 at k=7, cut at height 25:", phi(231, truncate_spine(t, 25))[6], "vs", phi_inf(231, t, 7))
