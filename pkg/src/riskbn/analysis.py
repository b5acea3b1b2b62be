"""Decision-support procedures built on the exact query engine.

* influential findings: drop conditioning events one at a time and rank
  them by how much the target probability moves;
* what-if tables: replace selected evidence with improved states, one
  at a time and optionally all at once;
* prevalence tables: a grid of P(outcome | group state);
* Beta comparison: seeded Monte Carlo estimate of P(theta1 > theta2)
  for two Beta posteriors.

Every row and cell is, by construction, an ordinary conditional query,
so reports decompose exactly into standalone queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import BayesianNetwork, Evidence
from .errors import (
    BadAddress,
    NotInBase,
    OverlapError,
    SameState,
    ValidationError,
    ZeroEvidenceError,
)
from .inference import normalize_evidence, query_conditional
from .learning import PosteriorCpts

# ---------------------------------------------------------------------------
# influential findings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InfluenceRow:
    variable: str
    probability: float | None  # target probability with this finding dropped
    delta: float | None        # base - probability
    error: str | None = None


@dataclass(frozen=True)
class InfluenceReport:
    base_probability: float
    rows: tuple[InfluenceRow, ...]

    @property
    def most_influential(self) -> str | None:
        for row in self.rows:
            if row.error is None:
                return row.variable
        return None

    def to_document(self) -> dict:
        return {
            "base_probability": self.base_probability,
            "rows": [
                {
                    "variable": r.variable,
                    "probability": r.probability,
                    "delta": r.delta,
                    "error": r.error,
                }
                for r in self.rows
            ],
        }


def influential_findings(net: BayesianNetwork, evidence: Evidence,
                         target: Mapping[str, str]) -> InfluenceReport:
    """Recompute the target probability with each conditioning event
    removed; rows come back sorted by |delta| descending, ties by id."""
    if not evidence:
        raise ValidationError("influence analysis needs at least one evidence item")
    base = query_conditional(net, evidence, target).probability
    rows = []
    for var in evidence:
        reduced = {v: s for v, s in evidence.items() if v != var}
        try:
            p = query_conditional(net, reduced, target).probability
            rows.append(InfluenceRow(var, p, base - p))
        except ZeroEvidenceError:
            rows.append(InfluenceRow(var, None, None, error="ZeroEvidenceError"))
    ok = sorted(
        (r for r in rows if r.error is None),
        key=lambda r: (-abs(r.delta), r.variable),
    )
    failed = sorted((r for r in rows if r.error is not None),
                    key=lambda r: r.variable)
    return InfluenceReport(base_probability=base, rows=tuple(ok + failed))


# ---------------------------------------------------------------------------
# what-if improvements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WhatIfRow:
    variable: str
    state: str
    probability: float


@dataclass(frozen=True)
class WhatIfTable:
    base_evidence: dict
    base_probability: float
    rows: tuple[WhatIfRow, ...]
    combined: float | None = None

    def to_document(self) -> dict:
        return {
            "base_evidence": _evidence_document(self.base_evidence),
            "base_probability": self.base_probability,
            "rows": [
                {"variable": r.variable, "state": r.state,
                 "probability": r.probability}
                for r in self.rows
            ],
            "combined": self.combined,
        }


def _evidence_document(evidence: Evidence) -> dict:
    out = {}
    for var, value in evidence.items():
        out[var] = value if isinstance(value, str) else sorted(value)
    return out


def whatif_improvements(net: BayesianNetwork, base: Evidence,
                        target: Mapping[str, str],
                        improvements: Mapping[str, str],
                        combined: bool = False) -> WhatIfTable:
    """One row per single-variable replacement of the base evidence;
    the combined row replaces all of them at once."""
    base_idx = normalize_evidence(net, base)
    for var, state in improvements.items():
        if var not in base_idx:
            raise NotInBase(f"improvement variable {var!r} not in the base case")
        k = net.variable(var).state_index(state)
        if base_idx[var] == (k,):
            raise SameState(f"{var!r} already at state {state!r} in the base case")
    base_result = query_conditional(net, base, target)
    rows = []
    for var, state in improvements.items():
        modified = dict(base)
        modified[var] = state
        p = query_conditional(net, modified, target).probability
        rows.append(WhatIfRow(var, state, p))
    combined_p = None
    if combined:
        modified = dict(base)
        modified.update(improvements)
        combined_p = query_conditional(net, modified, target).probability
    return WhatIfTable(
        base_evidence=dict(base),
        base_probability=base_result.probability,
        rows=tuple(rows),
        combined=combined_p,
    )


# ---------------------------------------------------------------------------
# prevalence tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrevalenceTable:
    group_variable: str
    group_states: tuple[str, ...]
    outcomes: tuple[tuple[str, str], ...]
    cells: np.ndarray  # (n_group_states, n_outcomes)

    def to_document(self) -> dict:
        return {
            "group_variable": self.group_variable,
            "group_states": list(self.group_states),
            "outcomes": [{"variable": v, "state": s} for v, s in self.outcomes],
            "cells": [[float(x) for x in row] for row in self.cells],
        }


def prevalence_table(net: BayesianNetwork, group_var: str,
                     outcome_targets: Sequence[tuple[str, str]]) -> PrevalenceTable:
    """cell (g, t) = P(outcome t | group_var = g)."""
    outcome_vars = {v for v, _ in outcome_targets}
    if group_var in outcome_vars:
        raise OverlapError(f"group variable {group_var!r} is also an outcome")
    states = net.variable(group_var).states
    cells = np.empty((len(states), len(outcome_targets)))
    for i, g in enumerate(states):
        for j, (var, state) in enumerate(outcome_targets):
            cells[i, j] = query_conditional(
                net, {group_var: g}, {var: state}
            ).probability
    return PrevalenceTable(
        group_variable=group_var,
        group_states=states,
        outcomes=tuple(outcome_targets),
        cells=cells,
    )


# ---------------------------------------------------------------------------
# Beta posterior comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaPosterior:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValidationError("Beta parameters must be positive")


@dataclass(frozen=True)
class ProportionComparison:
    probability: float
    standard_error: float
    samples: int


def _beta_samples(seed: int, bp: BetaPosterior, n: int) -> np.ndarray:
    # Stream keyed by the distribution itself (not argument position):
    # swapping the two comparands reuses the exact same draws, making
    # reversed comparisons exact complements, while identical comparands
    # tie on every draw and score 1/2 by the half-tie rule below.
    key = [
        int(seed),
        int(np.float64(bp.a).view(np.uint64)),
        int(np.float64(bp.b).view(np.uint64)),
    ]
    rng = np.random.default_rng(key)
    return rng.beta(bp.a, bp.b, size=n)


def compare_proportions(p1: BetaPosterior, p2: BetaPosterior,
                        samples: int = 1_000_000, seed: int = 0) -> ProportionComparison:
    """Monte Carlo estimate of P(theta1 > theta2) with theta_i ~ Beta.

    Deterministic for a given seed; exact ties count one half, so
    comparing a posterior against itself returns exactly 0.5.
    """
    if samples < 1:
        raise ValidationError("need at least one sample")
    s1 = _beta_samples(seed, p1, samples)
    s2 = _beta_samples(seed, p2, samples)
    wins = float(np.count_nonzero(s1 > s2)) + 0.5 * float(np.count_nonzero(s1 == s2))
    p = wins / samples
    return ProportionComparison(
        probability=p,
        standard_error=math.sqrt(p * (1.0 - p) / samples),
        samples=samples,
    )


def beta_from_cell(post: PosteriorCpts, variable: str,
                   parent_config: Mapping[str, str], state: str) -> BetaPosterior:
    """Marginal Beta of one Dirichlet cell: a = the cell's pseudo-count,
    b = the rest of its row."""
    specs = {v.id: v for v in post.variables}
    if variable not in specs:
        raise BadAddress(f"unknown variable {variable!r}")
    parents = post.dag.parents_of(variable)
    if set(parent_config) != set(parents):
        raise BadAddress(
            f"parent configuration must name exactly {sorted(parents)}"
        )
    row = 0
    for p in parents:
        spec = specs[p]
        if parent_config[p] not in spec.states:
            raise BadAddress(f"unknown state {parent_config[p]!r} for parent {p!r}")
        row = row * spec.cardinality + spec.states.index(parent_config[p])
    spec = specs[variable]
    if state not in spec.states:
        raise BadAddress(f"unknown state {state!r} for {variable!r}")
    k = spec.states.index(state)
    counts = post.pseudo_counts[variable][row]
    a = float(counts[k])
    return BetaPosterior(a=a, b=float(counts.sum() - a))


# ---------------------------------------------------------------------------
# plain-text rendering
# ---------------------------------------------------------------------------

def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(header[j]), *(len(r[j]) for r in rows)) if rows else len(header[j])
        for j in range(len(header))
    ]
    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [line(header), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    return "\n".join(out)


def format_influence(report: InfluenceReport) -> str:
    rows = []
    for r in report.rows:
        if r.error is None:
            rows.append([r.variable, f"{r.probability:.6f}", f"{r.delta:+.6f}"])
        else:
            rows.append([r.variable, r.error, ""])
    body = _table(["dropped", "probability", "delta"], rows)
    return f"base probability: {report.base_probability:.6f}\n{body}"


def format_whatif(table: WhatIfTable) -> str:
    rows = [
        [r.variable, r.state, f"{r.probability:.6f}"] for r in table.rows
    ]
    if table.combined is not None:
        rows.append(["(all)", "", f"{table.combined:.6f}"])
    body = _table(["variable", "improved to", "probability"], rows)
    return f"base probability: {table.base_probability:.6f}\n{body}"


def format_prevalence(table: PrevalenceTable) -> str:
    header = [table.group_variable] + [f"{v}={s}" for v, s in table.outcomes]
    rows = [
        [g] + [f"{table.cells[i, j]:.6f}" for j in range(len(table.outcomes))]
        for i, g in enumerate(table.group_states)
    ]
    return _table(header, rows)
