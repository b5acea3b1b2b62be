"""Reference cardiovascular-risk network.

Thirteen discretized health-assessment variables (sex, age, education,
socioeconomic status, BMI, physical activity, sleep duration, smoker
profile, anxiety, depression, hypertension, hypercholesterolemia,
diabetes) wired into the expert-agreed structure.  Only the sleep-by-age
table carries real probabilities; every other CPT is a uniform
placeholder and is flagged as such in the document notes, so that
downstream code never confuses placeholder rows with estimates.
"""

from __future__ import annotations

import numpy as np

from .core import BayesianNetwork, Cpt, Dag, VariableSpec

VARIABLES: tuple[VariableSpec, ...] = (
    VariableSpec("v1", "Sex", ("female", "male")),
    VariableSpec(
        "v2",
        "Age",
        ("[18-24]", "(24-34]", "(34-44]", "(44-54]", "(54-64]", "(64-74]"),
    ),
    VariableSpec("v3", "Education level", ("1", "2", "3")),
    VariableSpec("v4", "Socioeconomic status", ("1", "2", "3")),
    VariableSpec("v5", "Body mass index", ("underw.", "normal", "overw.", "obese")),
    VariableSpec("v6", "Physical activity", ("1", "2")),
    VariableSpec("v7", "Sleep duration", ("<6h", "normal", ">9h")),
    VariableSpec("v8", "Smoker profile", ("non-smoker", "ex-smoker", "smoker")),
    VariableSpec("v9", "Anxiety", ("yes", "no")),
    VariableSpec("v10", "Depression", ("yes", "no")),
    VariableSpec("v11", "Hypertension", ("yes", "no")),
    VariableSpec("v12", "Hypercholesterolemia", ("yes", "no")),
    VariableSpec("v13", "Diabetes", ("yes", "no")),
)

PARENTS: dict[str, tuple[str, ...]] = {
    "v1": (),
    "v2": (),
    "v3": ("v1", "v8"),
    "v4": ("v1", "v2", "v3", "v5", "v6", "v8"),
    "v5": ("v2", "v6", "v8"),
    "v6": ("v1", "v2", "v7", "v8"),
    "v7": ("v2",),
    "v8": ("v1", "v2"),
    "v9": ("v1", "v7", "v10", "v11"),
    "v10": ("v1", "v3"),
    "v11": ("v5", "v6", "v7"),
    "v12": ("v1", "v2", "v3", "v6", "v7", "v8"),
    "v13": ("v1", "v2", "v6"),
}

# P(sleep duration | age group): one row per age group, columns in
# state order (<6h, normal, >9h).
SLEEP_BY_AGE = np.array(
    [
        [0.0467, 0.9498, 0.0035],  # [18-24]
        [0.0694, 0.9293, 0.0013],  # (24-34]
        [0.1016, 0.8977, 0.0007],  # (34-44]
        [0.1350, 0.8643, 0.0007],  # (44-54]
        [0.1730, 0.8261, 0.0009],  # (54-64]
        [0.1964, 0.8033, 0.0003],  # (64-74]
    ]
)

# Variable grouping used by clients to colour the graph view.
GROUPS: dict[str, str] = {
    "v1": "non-modifiable",
    "v2": "non-modifiable",
    "v3": "non-modifiable",
    "v4": "non-modifiable",
    "v5": "modifiable",
    "v6": "modifiable",
    "v7": "modifiable",
    "v8": "modifiable",
    "v9": "modifiable",
    "v10": "modifiable",
    "v11": "condition",
    "v12": "condition",
    "v13": "condition",
}

# Observed population share per state (percent), kept as reference
# metadata alongside the model.
POPULATION_MARGINALS: dict[str, dict[str, float]] = {
    "v1": {"female": 32.10, "male": 67.90},
    "v2": {
        "[18-24]": 0.71,
        "(24-34]": 17.10,
        "(34-44]": 36.81,
        "(44-54]": 30.37,
        "(54-64]": 14.83,
        "(64-74]": 0.18,
    },
    "v3": {"1": 0.21, "2": 76.65, "3": 23.14},
    "v4": {"1": 37.83, "2": 35.15, "3": 27.02},
    "v5": {"underw.": 1.16, "normal": 40.74, "overw.": 40.31, "obese": 17.79},
    "v6": {"1": 75.63, "2": 24.37},
    "v7": {"<6h": 11.66, "normal": 88.25, ">9h": 0.09},
    "v8": {"non-smoker": 50.14, "ex-smoker": 20.49, "smoker": 29.37},
    "v9": {"yes": 2.68, "no": 97.32},
    "v10": {"yes": 0.48, "no": 99.52},
    "v11": {"yes": 15.05, "no": 84.95},
    "v12": {"yes": 30.53, "no": 69.47},
    "v13": {"yes": 2.51, "no": 97.49},
}


def cvd_dag() -> Dag:
    return Dag(nodes=tuple(v.id for v in VARIABLES), parents=PARENTS)


def cvd_fixture(metadata_only: bool = False):
    """The 13-variable cardiovascular-risk network.

    With ``metadata_only`` set, returns ``(variables, dag)`` without any
    probability tables; otherwise returns the full network with the
    sleep-by-age CPT populated and uniform placeholder rows everywhere
    else.
    """
    dag = cvd_dag()
    if metadata_only:
        return VARIABLES, dag

    by_id = {v.id: v for v in VARIABLES}
    cpts: dict[str, Cpt] = {}
    placeholders: list[str] = []
    for var in VARIABLES:
        parent_order = PARENTS[var.id]
        if var.id == "v7":
            probs = SLEEP_BY_AGE
        else:
            n_rows = 1
            for p in parent_order:
                n_rows *= by_id[p].cardinality
            probs = np.full((n_rows, var.cardinality), 1.0 / var.cardinality)
            placeholders.append(var.id)
        cpts[var.id] = Cpt(var.id, parent_order, probs)

    notes = {
        "groups": dict(GROUPS),
        "placeholder_cpts": placeholders,
        "population_marginals": {
            v: dict(m) for v, m in POPULATION_MARGINALS.items()
        },
    }
    return BayesianNetwork(variables=VARIABLES, dag=dag, cpts=cpts, notes=notes)
