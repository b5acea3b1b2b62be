"""Shared test utilities: seeded random networks and brute-force oracles."""

from __future__ import annotations

import itertools

import numpy as np

from riskbn.core import BayesianNetwork, Cpt, Dag, VariableSpec, joint_probability


def random_network(rng: np.random.Generator, max_nodes: int = 8,
                   max_states: int = 4, max_parents: int = 3,
                   concentration: float = 1.0,
                   min_nodes: int = 2) -> BayesianNetwork:
    """A random DAG with Dirichlet-sampled CPT rows (strictly positive)."""
    n = int(rng.integers(min_nodes, max_nodes + 1))
    ids = [f"n{i}" for i in range(n)]
    variables = tuple(
        VariableSpec(
            ids[i],
            ids[i].upper(),
            tuple(f"s{k}" for k in range(int(rng.integers(2, max_states + 1)))),
        )
        for i in range(n)
    )
    order = list(rng.permutation(n))
    parents: dict[str, tuple[str, ...]] = {}
    for pos, i in enumerate(order):
        earlier = [ids[j] for j in order[:pos]]
        k = int(rng.integers(0, min(len(earlier), max_parents) + 1))
        chosen = sorted(rng.choice(len(earlier), size=k, replace=False).tolist())
        parents[ids[i]] = tuple(earlier[c] for c in chosen)
    dag = Dag(tuple(ids), parents)

    by_id = {v.id: v for v in variables}
    cpts = {}
    for v in variables:
        n_rows = 1
        for p in parents[v.id]:
            n_rows *= by_id[p].cardinality
        rows = rng.dirichlet([concentration] * v.cardinality, size=n_rows)
        cpts[v.id] = Cpt(v.id, parents[v.id], rows)
    return BayesianNetwork(variables=variables, dag=dag, cpts=cpts)


def random_evidence_and_target(rng: np.random.Generator, net: BayesianNetwork,
                               allow_sets: bool = True):
    """Random disjoint (evidence, target) pair; evidence may use state sets."""
    ids = list(net.variable_ids)
    rng.shuffle(ids)
    n_evidence = int(rng.integers(0, max(1, len(ids) - 1) + 1))
    n_evidence = min(n_evidence, len(ids) - 1)
    evidence = {}
    for var in ids[:n_evidence]:
        states = net.variable(var).states
        if allow_sets and rng.random() < 0.3:
            k = int(rng.integers(1, len(states) + 1))
            chosen = rng.choice(len(states), size=k, replace=False)
            evidence[var] = [states[c] for c in sorted(chosen.tolist())]
        else:
            evidence[var] = states[int(rng.integers(len(states)))]
    target_var = ids[n_evidence]
    states = net.variable(target_var).states
    target = {target_var: states[int(rng.integers(len(states)))]}
    return evidence, target


def enumerate_conditional(net: BayesianNetwork, evidence: dict, target: dict) -> float:
    """Slow independent oracle: loop over all total assignments."""
    specs = list(net.variables)

    def consistent(assignment, constraints):
        for var, value in constraints.items():
            allowed = {value} if isinstance(value, str) else set(value)
            if assignment[var] not in allowed:
                return False
        return True

    numer = denom = 0.0
    for combo in itertools.product(*(v.states for v in specs)):
        assignment = {v.id: s for v, s in zip(specs, combo)}
        if not consistent(assignment, evidence):
            continue
        p = joint_probability(net, assignment)
        denom += p
        if consistent(assignment, target):
            numer += p
    return numer / denom
