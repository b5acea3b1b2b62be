"""Discrete Bayesian network engine for cardiovascular risk-factor modelling.

Build networks over categorical variables, learn structure and
Dirichlet-posterior parameters from tabular data, answer exact
conditional-probability queries, and run decision-support analyses
(influential findings, what-if tables, prevalence grids, Beta-posterior
comparisons) through a Python API, a CLI, and an HTTP service.
"""

from .analysis import (
    BetaPosterior,
    InfluenceReport,
    InfluenceRow,
    PrevalenceTable,
    ProportionComparison,
    WhatIfRow,
    WhatIfTable,
    beta_from_cell,
    compare_proportions,
    influential_findings,
    prevalence_table,
    whatif_improvements,
)
from .core import (
    BayesianNetwork,
    Cpt,
    Dag,
    VariableSpec,
    joint_probability,
    topological_sort,
)
from .cvd import cvd_fixture
from .errors import RiskBnError
from .inference import (
    Factor,
    QueryResult,
    enumerate_query,
    evidence_probability,
    posterior_marginals,
    query_conditional,
)
from .io import (
    Dataset,
    load_network,
    parse_dataset,
    parse_network,
    save_network,
    serialize_network,
)
from .learning import (
    PosteriorCpts,
    SufficientStats,
    cross_validate,
    fit_parameters,
    forward_sample,
    holdout_log_likelihood,
    sample_parameters,
    tabulate_counts,
)
from .structure import (
    EditScript,
    StructureConstraints,
    apply_edits,
    family_score,
    greedy_thick_thinning,
    total_score,
)

__version__ = "0.1.0"

__all__ = [
    "BayesianNetwork",
    "BetaPosterior",
    "Cpt",
    "Dag",
    "Dataset",
    "EditScript",
    "Factor",
    "InfluenceReport",
    "InfluenceRow",
    "PosteriorCpts",
    "PrevalenceTable",
    "ProportionComparison",
    "QueryResult",
    "RiskBnError",
    "StructureConstraints",
    "SufficientStats",
    "VariableSpec",
    "WhatIfRow",
    "WhatIfTable",
    "apply_edits",
    "beta_from_cell",
    "compare_proportions",
    "cross_validate",
    "cvd_fixture",
    "enumerate_query",
    "evidence_probability",
    "family_score",
    "fit_parameters",
    "forward_sample",
    "greedy_thick_thinning",
    "holdout_log_likelihood",
    "influential_findings",
    "joint_probability",
    "load_network",
    "parse_dataset",
    "parse_network",
    "posterior_marginals",
    "prevalence_table",
    "query_conditional",
    "sample_parameters",
    "save_network",
    "serialize_network",
    "tabulate_counts",
    "topological_sort",
    "total_score",
    "whatif_improvements",
]
