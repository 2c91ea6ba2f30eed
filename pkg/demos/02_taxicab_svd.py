"""Taxicab SVD of a centered matrix, step by step."""
import numpy as np

from aggcoda import decompose, maximize_l1

np.set_printoptions(precision=3, suppress=True)

rng = np.random.default_rng(42)
x = rng.normal(size=(7, 5))
x -= x.mean(0)
x -= x.mean(1, keepdims=True)

# %% the first axis: best sign vector for ||X u||_1
sol = maximize_l1(x, mode="exhaustive")
print("delta_1 =", sol.delta, " u =", sol.u)
print("ascent gives", maximize_l1(x, mode="ascent").delta)

# %% full decomposition, one rank-one layer at a time
dec = decompose(x)
print("rank", dec.rank, "deltas", dec.deltas)
for ax, r in zip(dec.axes, dec.residual_l1_norms):
    print(f"delta={ax.delta:8.4f}  |residual|_1 before={r:8.4f}")

# %% the layers add back up to X
print(np.abs(dec.reconstruct() - x).max())

# %% each axis splits the residual into four blocks of mass delta/4
ax, resid = dec.axes[0], dec.residuals[0]
s, t = ax.v > 0, ax.u > 0
for name, (e, f) in {"S,T": (s, t), "S,T'": (s, ~t), "S',T": (~s, t), "S',T'": (~s, ~t)}.items():
    print(name, resid[np.ix_(e, f)].sum(), ax.delta / 4)
