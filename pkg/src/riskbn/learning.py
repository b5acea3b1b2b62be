"""Parameter learning: multinomial counts, Dirichlet posteriors, sampling.

Point estimates are posterior means, (n_k + alpha) / (N + K * alpha);
the pseudo-counts behind them travel with the CPTs so that per-cell
posteriors stay recoverable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import BayesianNetwork, Cpt, Dag, VariableSpec, topological_sort
from .errors import InvalidAlpha, MismatchError, TooFewRecords
from .io import Dataset


def _check_same_variables(data: Dataset, ids: Sequence[str]) -> None:
    if set(data.variable_ids) != set(ids):
        raise MismatchError(
            f"dataset variables {sorted(data.variable_ids)} != "
            f"expected {sorted(ids)}"
        )


def family_counts(data: Dataset, child: str, parents: Sequence[str]) -> np.ndarray:
    """Raw (n_parent_configs, n_child_states) frequency table.

    Parent configurations are ranked with the first parent most
    significant, matching the CPT row convention.
    """
    ids = data.variable_ids
    specs = {v.id: v for v in data.variables}
    k = specs[child].cardinality
    rows = np.zeros(data.n_records, dtype=np.int64)
    n_rows = 1
    for p in parents:
        card = specs[p].cardinality
        rows = rows * card + data.codes[:, ids.index(p)]
        n_rows *= card
    flat = rows * k + data.codes[:, ids.index(child)]
    return (
        np.bincount(flat, minlength=n_rows * k)
        .reshape(n_rows, k)
        .astype(float)
    )


@dataclass(frozen=True)
class SufficientStats:
    """Per-variable raw observation counts for one DAG."""

    variables: tuple[VariableSpec, ...]
    dag: Dag
    counts: Mapping[str, np.ndarray]
    n_records: int


@dataclass(frozen=True)
class PosteriorCpts:
    """Dirichlet posterior pseudo-counts and posterior-mean rows."""

    variables: tuple[VariableSpec, ...]
    dag: Dag
    pseudo_counts: Mapping[str, np.ndarray]
    probabilities: Mapping[str, np.ndarray]
    alpha: float

    def to_network(self, notes: Mapping[str, object] | None = None) -> BayesianNetwork:
        cpts = {
            v.id: Cpt(
                v.id,
                self.dag.parents_of(v.id),
                self.probabilities[v.id],
                self.pseudo_counts[v.id],
            )
            for v in self.variables
        }
        return BayesianNetwork(
            variables=self.variables, dag=self.dag, cpts=cpts, notes=notes or {}
        )


def tabulate_counts(data: Dataset, dag: Dag) -> SufficientStats:
    """Exact frequency counts per (variable, parent configuration, state).

    Partial counts from record partitions merge by elementwise addition,
    so the tally order never matters.
    """
    _check_same_variables(data, dag.nodes)
    specs = {v.id: v for v in data.variables}
    variables = tuple(specs[n] for n in dag.nodes)
    counts = {
        n: family_counts(data, n, dag.parents_of(n)) for n in dag.nodes
    }
    return SufficientStats(
        variables=variables, dag=dag, counts=counts, n_records=data.n_records
    )


def fit_parameters(stats: SufficientStats, alpha: float = 1.0) -> PosteriorCpts:
    """Add ``alpha`` to every cell; probabilities are the normalized rows."""
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0):
        raise InvalidAlpha(f"alpha must be a positive real, got {alpha!r}")
    pseudo = {}
    probs = {}
    for var, raw in stats.counts.items():
        pc = raw + float(alpha)
        pseudo[var] = pc
        probs[var] = pc / pc.sum(axis=1, keepdims=True)
    return PosteriorCpts(
        variables=stats.variables,
        dag=stats.dag,
        pseudo_counts=pseudo,
        probabilities=probs,
        alpha=float(alpha),
    )


def sample_parameters(post: PosteriorCpts, seed: int) -> BayesianNetwork:
    """Draw every CPT row from its Dirichlet posterior; deterministic per seed."""
    rng = np.random.default_rng(seed)
    cpts = {}
    for v in post.variables:
        g = rng.standard_gamma(post.pseudo_counts[v.id])
        sums = g.sum(axis=1, keepdims=True)
        dead = (sums == 0).ravel()  # only reachable via extreme underflow
        if dead.any():
            g[dead] = 1.0
            sums = g.sum(axis=1, keepdims=True)
        cpts[v.id] = Cpt(v.id, post.dag.parents_of(v.id), g / sums)
    return BayesianNetwork(variables=post.variables, dag=post.dag, cpts=cpts)


def forward_sample(net: BayesianNetwork, n: int, seed: int) -> Dataset:
    """Ancestral sampling of ``n`` full records; deterministic per seed."""
    rng = np.random.default_rng(seed)
    ids = net.variable_ids
    col = {v: j for j, v in enumerate(ids)}
    codes = np.zeros((n, len(ids)), dtype=np.int32)
    for var in topological_sort(net.dag):
        cpt = net.cpts[var]
        rows = np.zeros(n, dtype=np.int64)
        for p in cpt.parent_order:
            rows = rows * net.variable(p).cardinality + codes[:, col[p]]
        p = cpt.probabilities[rows]
        u = rng.random(n)
        states = (u[:, None] > np.cumsum(p, axis=1)).sum(axis=1)
        codes[:, col[var]] = np.minimum(states, cpt.n_states - 1)
    return Dataset(net.variables, codes)


def holdout_log_likelihood(net: BayesianNetwork, data: Dataset) -> float:
    """Sum of log joint probability over all records.

    Returns -inf when any record has probability zero (impossible for
    networks fit with alpha > 0, and worth surfacing loudly otherwise).
    """
    _check_same_variables(data, net.variable_ids)
    for v in data.variables:
        if net.variable(v.id).states != v.states:
            raise MismatchError(f"states of {v.id!r} differ between dataset and network")
    if data.n_records == 0:
        return 0.0
    ids = data.variable_ids
    total = 0.0
    for var in net.variable_ids:
        cpt = net.cpts[var]
        rows = np.zeros(data.n_records, dtype=np.int64)
        for p in cpt.parent_order:
            rows = rows * net.variable(p).cardinality + data.codes[:, ids.index(p)]
        p = cpt.probabilities[rows, data.codes[:, ids.index(var)]]
        if np.any(p == 0.0):
            return -math.inf
        total += float(np.log(p).sum())
    return total


def cross_validate(data: Dataset, dag: Dag, folds: int = 5, alpha: float = 1.0,
                   seed: int = 0) -> list[float]:
    """k-fold holdout log-likelihoods: seeded shuffle, contiguous folds,
    train on k-1 folds, score the held fold."""
    if folds < 2:
        raise TooFewRecords(f"need at least 2 folds, got {folds}")
    if data.n_records < folds:
        raise TooFewRecords(
            f"{data.n_records} record(s) cannot be split into {folds} folds"
        )
    rng = np.random.default_rng(seed)
    perm = rng.permutation(data.n_records)
    parts = np.array_split(perm, folds)
    out = []
    for i, held in enumerate(parts):
        train_idx = np.concatenate([p for j, p in enumerate(parts) if j != i])
        post = fit_parameters(tabulate_counts(data.subset(train_idx), dag), alpha)
        out.append(holdout_log_likelihood(post.to_network(), data.subset(held)))
    return out
