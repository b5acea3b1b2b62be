"""Exact queries: conditional probabilities, marginals, evidence probability.

The production path is sum-product variable elimination with a greedy
min-fill ordering.  ``enumerate_query`` answers the same questions by
direct summation over all completions of the unobserved variables; it
is exponential and exists as the ground-truth oracle the elimination
path is checked against.

Evidence values may be single state labels or sets of labels; a set
conditions on the disjunction and is applied by zeroing the excluded
states in the restricted factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .core import BayesianNetwork, Evidence, topological_sort
from .errors import (
    EmptyStateSet,
    OverlapError,
    UnknownState,
    ValidationError,
    ZeroEvidenceError,
)

# Rescale factors whose maximum drops below this, tracking the scale in
# log space, so long chains of small probabilities cannot underflow to 0.
_UNDERFLOW_GUARD = 1e-300


@dataclass(frozen=True, eq=False)
class Factor:
    """Nonnegative table over the joint state space of ``scope``.

    ``values`` has one axis per scope variable, in scope order, so the
    flattened layout matches the CPT row convention (first variable most
    significant).
    """

    scope: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        values = np.asarray(self.values, dtype=float)
        if values.ndim != len(self.scope):
            raise ValidationError("factor shape does not match its scope")
        if np.any(values < 0):
            raise ValidationError("factor values must be nonnegative")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class QueryResult:
    probability: float
    evidence_probability: float
    method: str  # "elimination" | "enumeration"


# ---------------------------------------------------------------------------
# evidence / target handling
# ---------------------------------------------------------------------------

def normalize_evidence(net: BayesianNetwork, evidence: Evidence) -> dict[str, tuple[int, ...]]:
    """Validate evidence and map it to sorted state-index tuples."""
    out: dict[str, tuple[int, ...]] = {}
    for var, value in evidence.items():
        spec = net.variable(var)
        if isinstance(value, str):
            labels: Iterable[str] = (value,)
        else:
            labels = tuple(value)
            if len(labels) == 0:
                raise EmptyStateSet(f"empty state set for {var!r}")
        idx = sorted({spec.state_index(lbl) for lbl in labels})
        out[var] = tuple(idx)
    return out


def _normalize_target(net: BayesianNetwork, target: Mapping[str, str]) -> dict[str, int]:
    out = {}
    for var, label in target.items():
        if not isinstance(label, str):
            raise UnknownState(f"target state for {var!r} must be a single label")
        out[var] = net.variable(var).state_index(label)
    return out


def _check_disjoint(evidence: Mapping[str, object], target: Mapping[str, object]):
    overlap = sorted(set(evidence) & set(target))
    if overlap:
        raise OverlapError(f"variable(s) in both evidence and target: {overlap}")


# ---------------------------------------------------------------------------
# factor algebra
# ---------------------------------------------------------------------------

def _cpt_factor(net: BayesianNetwork, var: str) -> Factor:
    cpt = net.cpts[var]
    scope = cpt.parent_order + (var,)
    shape = tuple(net.cardinalities(scope))
    return Factor(scope, cpt.probabilities.reshape(shape))


def _restrict(f: Factor, evidence_idx: Mapping[str, tuple[int, ...]],
              cards: Mapping[str, int]) -> Factor:
    values = f.values
    for axis, var in enumerate(f.scope):
        if var in evidence_idx:
            mask = np.zeros(cards[var])
            mask[list(evidence_idx[var])] = 1.0
            shape = [1] * values.ndim
            shape[axis] = cards[var]
            values = values * mask.reshape(shape)
    return Factor(f.scope, values)


def _expand(values: np.ndarray, scope: tuple[str, ...],
            target_scope: tuple[str, ...]) -> np.ndarray:
    missing = [v for v in target_scope if v not in scope]
    vals = values.reshape(values.shape + (1,) * len(missing))
    current = list(scope) + missing
    perm = [current.index(v) for v in target_scope]
    return np.transpose(vals, perm)


def _multiply(f: Factor, g: Factor) -> Factor:
    scope = f.scope + tuple(v for v in g.scope if v not in f.scope)
    return Factor(scope, _expand(f.values, f.scope, scope)
                  * _expand(g.values, g.scope, scope))


def _sum_out(f: Factor, var: str) -> Factor:
    axis = f.scope.index(var)
    scope = tuple(v for v in f.scope if v != var)
    return Factor(scope, f.values.sum(axis=axis))


def _min_fill_order(scopes: list[tuple[str, ...]], elim: set[str]) -> list[str]:
    """Greedy min-fill over the interaction graph; lexicographic ties."""
    adj: dict[str, set[str]] = {}
    for scope in scopes:
        for v in scope:
            adj.setdefault(v, set())
        for a in scope:
            for b in scope:
                if a != b:
                    adj[a].add(b)
    for v in elim:
        adj.setdefault(v, set())
    order = []
    remaining = set(elim)
    while remaining:
        best = None
        best_fill = None
        for v in sorted(remaining):
            nbrs = sorted(adj[v])
            fill = sum(
                1
                for i, a in enumerate(nbrs)
                for b in nbrs[i + 1:]
                if b not in adj[a]
            )
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        nbrs = list(adj[best])
        for a in nbrs:
            for b in nbrs:
                if a != b:
                    adj[a].add(b)
            adj[a].discard(best)
        del adj[best]
        remaining.discard(best)
        order.append(best)
    return order


def _elimination_order(net: BayesianNetwork, scopes: list[tuple[str, ...]],
                       elim: set[str], how: str) -> list[str]:
    if how == "min_fill":
        return _min_fill_order(scopes, elim)
    if how == "reverse_topological":
        return [v for v in reversed(topological_sort(net.dag)) if v in elim]
    raise ValueError(f"unknown elimination order {how!r}")


def _eliminate(net: BayesianNetwork, factors: list[Factor], elim: set[str],
               how: str) -> tuple[Factor, float]:
    """Sum out ``elim``; returns the remaining joint factor and the log of
    any scale factored out by the underflow guard."""
    log_scale = 0.0
    order = _elimination_order(net, [f.scope for f in factors], elim, how)
    for var in order:
        bucket = [f for f in factors if var in f.scope]
        factors = [f for f in factors if var not in f.scope]
        new = _sum_out(reduce(_multiply, bucket), var)
        peak = float(new.values.max()) if new.values.size else 0.0
        if 0.0 < peak < _UNDERFLOW_GUARD:
            new = Factor(new.scope, new.values / peak)
            log_scale += math.log(peak)
        factors.append(new)
    joint = reduce(_multiply, factors) if factors else Factor((), np.ones(()))
    # Canonical scope order for reproducible indexing downstream.
    want = tuple(v for v in net.variable_ids if v in joint.scope)
    if want != joint.scope:
        joint = Factor(want, _expand(joint.values, joint.scope, want))
    return joint, log_scale


def _restricted_factors(net: BayesianNetwork,
                        evidence_idx: Mapping[str, tuple[int, ...]]) -> list[Factor]:
    cards = {v.id: v.cardinality for v in net.variables}
    return [
        _restrict(_cpt_factor(net, var), evidence_idx, cards)
        for var in net.variable_ids
    ]


# ---------------------------------------------------------------------------
# public queries
# ---------------------------------------------------------------------------

def query_conditional(net: BayesianNetwork, evidence: Evidence,
                      target: Mapping[str, str],
                      elimination_order: str = "min_fill") -> QueryResult:
    """P(target | evidence) by variable elimination.

    Raises ZeroEvidenceError when P(evidence) = 0 and OverlapError when
    target variables occur in the evidence.
    """
    ev = normalize_evidence(net, evidence)
    tg = _normalize_target(net, target)
    _check_disjoint(ev, tg)
    factors = _restricted_factors(net, ev)
    elim = set(net.variable_ids) - set(tg)
    joint, log_scale = _eliminate(net, factors, elim, elimination_order)
    denom = float(joint.values.sum())
    if denom <= 0.0:
        raise ZeroEvidenceError("evidence has probability zero")
    pos = tuple(tg[v] for v in joint.scope)
    numer = float(joint.values[pos])
    return QueryResult(
        probability=numer / denom,
        evidence_probability=denom * math.exp(log_scale),
        method="elimination",
    )


def evidence_probability(net: BayesianNetwork, evidence: Evidence,
                         elimination_order: str = "min_fill") -> float:
    """P(evidence) by elimination; 0 is a valid return value here."""
    ev = normalize_evidence(net, evidence)
    factors = _restricted_factors(net, ev)
    joint, log_scale = _eliminate(
        net, factors, set(net.variable_ids), elimination_order
    )
    return float(joint.values) * math.exp(log_scale)


def posterior_marginals(net: BayesianNetwork, evidence: Evidence,
                        elimination_order: str = "min_fill") -> dict[str, np.ndarray]:
    """Conditional distribution of every variable given the evidence.

    Variables under single-state evidence come back as point masses;
    set-valued evidence leaves the renormalized within-set distribution.
    """
    ev = normalize_evidence(net, evidence)
    out: dict[str, np.ndarray] = {}
    for var in net.variable_ids:
        factors = _restricted_factors(net, ev)
        elim = set(net.variable_ids) - {var}
        joint, _ = _eliminate(net, factors, elim, elimination_order)
        total = float(joint.values.sum())
        if total <= 0.0:
            raise ZeroEvidenceError("evidence has probability zero")
        out[var] = joint.values / total
    return out


def enumerate_query(net: BayesianNetwork, evidence: Evidence,
                    target: Mapping[str, str]) -> QueryResult:
    """P(target | evidence) by total-probability enumeration.

    Sums the joint over every completion of the unobserved variables;
    exponential in the number of variables.  Ground-truth oracle for
    :func:`query_conditional`.
    """
    ev = normalize_evidence(net, evidence)
    tg = _normalize_target(net, target)
    _check_disjoint(ev, tg)
    ids = net.variable_ids
    col = {v: j for j, v in enumerate(ids)}
    allowed = [
        np.asarray(ev.get(v, tuple(range(net.variable(v).cardinality))))
        for v in ids
    ]
    grids = np.meshgrid(*allowed, indexing="ij")
    states = np.stack([g.ravel() for g in grids], axis=1)

    probs = np.ones(states.shape[0])
    for j, var in enumerate(ids):
        cpt = net.cpts[var]
        rows = np.zeros(states.shape[0], dtype=np.int64)
        for p in cpt.parent_order:
            rows = rows * net.variable(p).cardinality + states[:, col[p]]
        probs *= cpt.probabilities[rows, states[:, j]]

    denom = float(probs.sum())
    if denom <= 0.0:
        raise ZeroEvidenceError("evidence has probability zero")
    mask = np.ones(states.shape[0], dtype=bool)
    for var, s in tg.items():
        mask &= states[:, col[var]] == s
    numer = float(probs[mask].sum())
    return QueryResult(
        probability=numer / denom,
        evidence_probability=denom,
        method="enumeration",
    )
