"""Log interactions of a small table, exact and first order."""
import numpy as np

from aggcoda import (WeightVector, approx_log_interaction, approximation_gap,
                     log_interaction, weight_scheme)

np.set_printoptions(precision=4, suppress=True)

# %% a 3 x 4 table of amounts
t = np.array([[12.0, 30.0, 8.0, 5.0],
              [20.0, 25.0, 15.0, 9.0],
              [6.0, 10.0, 22.0, 14.0]])
print(t / t.sum())

# %% exact log interaction with uniform weights
uni_r, uni_c = WeightVector.uniform(3), WeightVector.uniform(4)
lam = log_interaction(t, uni_r, uni_c)
print(lam.values)
print("row means", lam.values.mean(axis=1))
print("col means", lam.values.mean(axis=0))

# %% rescaling rows and columns leaves it unchanged
scaled = np.array([1.0, 7.0, 0.2])[:, None] * t * np.array([3.0, 1.0, 0.5, 9.0])
print(np.abs(log_interaction(scaled, uni_r, uni_c).values - lam.values).max())

# %% with marginal weights the first-order form is the CA residual matrix
rw, cw = weight_scheme("marginal", t)
p = t / t.sum()
print(approx_log_interaction(t, rw, cw).values)
print(p / np.outer(p.sum(1), p.sum(0)) - 1)


# %% the approximation error is quadratic near independence
def gap(eps, e):
    p = np.outer(rw.weights, cw.weights) * (1 + eps * e)
    return approximation_gap(log_interaction(p, rw, cw), approx_log_interaction(p, rw, cw)).max_abs


e = np.random.default_rng(0).uniform(-1, 1, t.shape)
for eps in (0.04, 0.02, 0.01, 0.005):
    print(f"eps={eps:<6} gap={gap(eps, e):.3e}  ratio={gap(2 * eps, e) / gap(eps, e):.3f}")
