# Learn CPTs from records and quantify how well they generalize.
#
# Counts per (variable, parent configuration, state) are the sufficient
# statistics; adding the prior weight alpha to every cell and normalizing
# rows gives the posterior-mean tables, and the pseudo-counts stay
# attached so per-cell posteriors remain available.

import numpy as np

import riskbn

truth = riskbn.cvd_fixture()

# Synthesize a health-assessment table by ancestral sampling.
data = riskbn.forward_sample(truth, n=50_000, seed=42)
print(f"sampled {data.n_records} records over {len(data.variables)} variables")
print("first record:", data.record(0))

# Fit posterior-mean CPTs on the true structure.
stats = riskbn.tabulate_counts(data, truth.dag)
post = riskbn.fit_parameters(stats, alpha=1.0)
fitted = post.to_network()

# The sleep-by-age table is the only non-uniform one; compare.
print("\nsleep-by-age, truth vs fitted (column: sleep < 6h):")
ages = truth.variable("v2").states
for i, age in enumerate(ages):
    t = truth.cpts["v7"].probabilities[i, 0]
    f = fitted.cpts["v7"].probabilities[i, 0]
    print(f"  {age:<8} truth {t:.4f}   fitted {f:.4f}")

# Uncertainty about a single cell is a Beta posterior; here, the share
# of short sleepers in the oldest group.
bp = riskbn.beta_from_cell(post, "v7", {"v2": "(64-74]"}, "<6h")
print(f"\nshort-sleep share at 64-74 ~ Beta({bp.a:.0f}, {bp.b:.0f}),"
      f" mean {bp.a / (bp.a + bp.b):.4f}")

# Whole-table uncertainty: draw parameter sets from the posterior.
draws = [riskbn.sample_parameters(post, seed=s) for s in range(200)]
cell = np.array([d.cpts["v7"].probabilities[5, 0] for d in draws])
print(f"posterior draws of that cell: mean {cell.mean():.4f},"
      f" sd {cell.std():.4f}")

# Holdout behaviour: 5-fold cross-validation on a learner-chosen
# structure, reported per record.
learned = riskbn.greedy_thick_thinning(data)
print("\nlearned arcs:", learned.arcs() or "none")
fold_lls = riskbn.cross_validate(data, learned, folds=5, alpha=1.0, seed=0)
per_record = sum(fold_lls) / data.n_records
training = riskbn.holdout_log_likelihood(
    riskbn.fit_parameters(riskbn.tabulate_counts(data, learned)).to_network(),
    data,
) / data.n_records
print(f"holdout log-likelihood per record:  {per_record:.4f}")
print(f"training log-likelihood per record: {training:.4f}")
print(f"generalization gap: {abs(per_record - training):.4f} nats")
