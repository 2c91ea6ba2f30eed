"""Three ways to analyse aggregated data, compared by QSR."""
import numpy as np

from aggcoda import (aggregate, aggregate_of_log_interactions, approx_aggregate_of_log_interactions,
                     factorize, generate_synthetic, log_interaction, principal_map, qsr_table,
                     weight_scheme)

np.set_printoptions(precision=3, suppress=True)

# %% 166 households, 9 budget items, four covariates with 2, 3, 3, 3 levels
x, z = generate_synthetic(seed=7, rows=166, cols=9, blocks="2,3,3,3", effect=0.6)
t = aggregate(x, z)
print(t.values.shape, z.category_counts)

# %% log interactions of the aggregate table itself
rw, cw = weight_scheme("aggregate-marginal", t)
t_lam = log_interaction(t, rw, cw)

# %% aggregates of the elementary log interactions
alpha = aggregate_of_log_interactions(x, z)
print("largest block column sum", max(float(np.abs(alpha.values[sl].sum(0)).max()) for sl in z.block_slices()))

# %% the same, first order, computed from the aggregate table only
approx = approx_aggregate_of_log_interactions(t)
print("max |exact - first order|", np.abs(alpha.values - approx.values).max())

# %% factorize and compare
facts = [factorize(m, 4) for m in (t_lam, alpha, approx)]
table = qsr_table(facts, ["T-TLRA", "A-TLRA", "A-1st order TSVD"])
print(table.to_text())

# %% coordinates of the first principal map of the preferred method
best = table.ranking()[0].name
pm = principal_map(facts[[b.name for b in table.blocks].index(best)], (1, 2))
for lab, xy in zip(pm.rows.labels, pm.rows.coords):
    print(f"{lab:6s} {xy}")
