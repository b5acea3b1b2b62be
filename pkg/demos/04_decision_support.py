# Decision-support procedures: influential findings, what-if tables,
# prevalence grids, and Beta-posterior proportion comparisons.
#
# The bundled fixture ships with uniform placeholder tables, so to get
# non-trivial numbers this demo first simulates a synthetic population
# from the same structure and fits the tables on it.

import numpy as np

import riskbn
from riskbn.analysis import (
    BetaPosterior,
    format_influence,
    format_prevalence,
    format_whatif,
)
from riskbn.core import BayesianNetwork, Cpt

# A synthetic "truth" on the expert structure, then 100k assessments.
base = riskbn.cvd_fixture()
rng = np.random.default_rng(5)
cpts = {
    v.id: Cpt(
        v.id,
        base.dag.parents_of(v.id),
        rng.dirichlet(np.full(v.cardinality, 2.0), size=base.cpts[v.id].n_rows),
    )
    for v in base.variables
}
truth = BayesianNetwork(base.variables, base.dag, cpts)
records = riskbn.forward_sample(truth, n=100_000, seed=6)
post = riskbn.fit_parameters(riskbn.tabulate_counts(records, base.dag))
net = post.to_network()
print(f"fitted tables from {records.n_records} simulated assessments\n")

# A patient profile: male, 44-54, obese, inactive, short sleep,
# non-smoker, anxious, no depression, education and status 3.
patient = {
    "v1": "male", "v2": "(44-54]", "v3": "3", "v4": "3",
    "v5": "obese", "v6": "1", "v7": "<6h", "v8": "non-smoker",
    "v9": "yes", "v10": "no",
}
target = {"v11": "yes"}  # hypertension

report = riskbn.influential_findings(net, patient, target)
print("which finding moves the hypertension probability most?\n")
print(format_influence(report))
print(f"\nmost influential: {report.most_influential}")

# What if the modifiable factors were brought back to healthy levels?
improvements = {"v5": "normal", "v6": "2", "v7": "normal", "v9": "no"}
table = riskbn.whatif_improvements(net, patient, target, improvements,
                                   combined=True)
print("\nimproved-state scenarios:\n")
print(format_whatif(table))

# Hypothesized evidence: condition prevalence by socioeconomic status.
grid = riskbn.prevalence_table(
    net, "v4",
    [("v9", "yes"), ("v10", "yes"), ("v13", "yes"), ("v12", "yes"),
     ("v11", "yes")],
)
print("\ncondition prevalence by socioeconomic status:\n")
print(format_prevalence(grid))

# Uncertainty about one learned cell is a Beta posterior: compare the
# short-sleep share across two age groups by seeded Monte Carlo.
oldest = riskbn.beta_from_cell(post, "v7", {"v2": "(64-74]"}, "<6h")
youngest = riskbn.beta_from_cell(post, "v7", {"v2": "[18-24]"}, "<6h")
cmp = riskbn.compare_proportions(oldest, youngest, samples=1_000_000, seed=7)
print(f"\nP(short-sleep share at 64-74 > at 18-24) = {cmp.probability:.4f}"
      f" (se {cmp.standard_error:.1e})")

# Any pair of Beta posteriors works, e.g. ones carried over from a
# production-scale fit.
cmp = riskbn.compare_proportions(BetaPosterior(79, 353),
                                 BetaPosterior(59, 1900),
                                 samples=1_000_000, seed=7)
print(f"Beta(79,353) vs Beta(59,1900): {cmp.probability:.4f}")
