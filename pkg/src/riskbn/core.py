"""Core domain types: categorical variables, DAG, CPTs, and the network.

Conventions used everywhere (file format, learning, inference):

* a CPT is a 2-D array with one row per parent configuration and one
  column per child state, in the variable's declared state order;
* parent configurations are enumerated in mixed-radix order with the
  FIRST parent in ``parent_order`` as the most significant digit.

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CycleError, UnknownState, UnknownVariable, ValidationError

#: A total map variable id -> state label, covering every network variable.
Assignment = Mapping[str, str]

#: A partial map variable id -> state label, or -> collection of labels
#: (multi-state evidence, interpreted as a disjunction).
Evidence = Mapping[str, "str | Iterable[str]"]

ROW_SUM_ATOL = 1e-9


@dataclass(frozen=True)
class VariableSpec:
    """A named categorical variable with an ordered list of state labels."""

    id: str
    label: str
    states: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) < 2:
            raise ValidationError(f"variable {self.id!r} needs >= 2 states")
        if len(set(self.states)) != len(self.states):
            raise ValidationError(f"variable {self.id!r} has duplicate states")

    @property
    def cardinality(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise UnknownState(
                f"variable {self.id!r} has no state {label!r} "
                f"(states: {', '.join(self.states)})"
            ) from None


def _toposort(nodes: Sequence[str], parents: Mapping[str, Sequence[str]]) -> list[str]:
    """Kahn's algorithm; deterministic (keeps declared node order)."""
    remaining_parents = {n: set(parents.get(n, ())) for n in nodes}
    order: list[str] = []
    ready = [n for n in nodes if not remaining_parents[n]]
    children: dict[str, list[str]] = {n: [] for n in nodes}
    for child, ps in parents.items():
        for p in ps:
            children[p].append(child)
    while ready:
        node = ready.pop(0)
        order.append(node)
        for child in children[node]:
            remaining_parents[child].discard(node)
            if not remaining_parents[child]:
                ready.append(child)
    if len(order) != len(nodes):
        stuck = sorted(n for n in nodes if remaining_parents[n])
        raise CycleError(f"cycle through node(s): {', '.join(stuck)}")
    return order


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph over variable ids, stored as parent lists."""

    nodes: tuple[str, ...]
    parents: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self, "parents", {n: tuple(ps) for n, ps in self.parents.items()}
        )
        declared = set(self.nodes)
        if len(declared) != len(self.nodes):
            raise ValidationError("duplicate node ids")
        for node in self.nodes:
            ps = self.parents.get(node, ())
            if len(set(ps)) != len(ps):
                raise ValidationError(f"duplicate parents at {node!r}")
            for p in ps:
                if p not in declared:
                    raise ValidationError(f"unknown parent id {p!r} at {node!r}")
        extra = set(self.parents) - declared
        if extra:
            raise ValidationError(f"parent map names unknown node(s): {sorted(extra)}")
        _toposort(self.nodes, self.parents)  # raises CycleError

    def parents_of(self, node: str) -> tuple[str, ...]:
        if node not in set(self.nodes):
            raise UnknownVariable(f"unknown node {node!r}")
        return self.parents.get(node, ())

    def arcs(self) -> list[tuple[str, str]]:
        return [(p, n) for n in self.nodes for p in self.parents.get(n, ())]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.nodes == other.nodes and all(
            self.parents.get(n, ()) == other.parents.get(n, ()) for n in self.nodes
        )

    def __hash__(self):
        return hash((self.nodes, tuple(sorted(self.parents.items()))))


def topological_sort(dag: Dag) -> list[str]:
    """Order nodes so every parent precedes its children.

    Raises CycleError naming at least one node on a cycle.  (Dag
    construction already rejects cycles; this is the public entry point
    for orders used by sampling and validation.)
    """
    return _toposort(dag.nodes, dag.parents)


def row_index(cardinalities: Sequence[int], config: Sequence[int]) -> int:
    """Mixed-radix rank of a parent configuration (first digit most significant)."""
    idx = 0
    for card, state in zip(cardinalities, config):
        idx = idx * card + state
    return idx


def config_of_row(cardinalities: Sequence[int], row: int) -> tuple[int, ...]:
    """Inverse of :func:`row_index`."""
    out = []
    for card in reversed(cardinalities):
        out.append(row % card)
        row //= card
    return tuple(reversed(out))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional probability table for one variable given its parents.

    ``probabilities`` holds point estimates (posterior means when
    learned); ``counts`` holds the Dirichlet pseudo-counts behind them,
    or None for tables that were specified directly.
    """

    variable: str
    parent_order: tuple[str, ...]
    probabilities: np.ndarray  # (n_rows, n_states)
    counts: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "parent_order", tuple(self.parent_order))
        object.__setattr__(self, "probabilities", _readonly(self.probabilities))
        if self.counts is not None:
            object.__setattr__(self, "counts", _readonly(self.counts))
        p = self.probabilities
        if p.ndim != 2:
            raise ValidationError(f"CPT for {self.variable!r} must be 2-D")
        if np.any(p < 0):
            raise ValidationError(f"negative probability in CPT {self.variable!r}")
        sums = p.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_ATOL)[0]
        if bad.size:
            raise ValidationError(
                f"CPT {self.variable!r} row {int(bad[0])} sums to {sums[bad[0]]!r}"
            )
        if self.counts is not None:
            c = self.counts
            if c.shape != p.shape:
                raise ValidationError(f"CPT {self.variable!r}: counts shape mismatch")
            if np.any(c <= 0):
                raise ValidationError(
                    f"CPT {self.variable!r}: pseudo-counts must be > 0"
                )
            expected = c / c.sum(axis=1, keepdims=True)
            if np.max(np.abs(expected - p)) > 1e-12:
                raise ValidationError(
                    f"CPT {self.variable!r}: probabilities do not match counts"
                )

    @property
    def n_rows(self) -> int:
        return self.probabilities.shape[0]

    @property
    def n_states(self) -> int:
        return self.probabilities.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cpt):
            return NotImplemented
        if (self.counts is None) != (other.counts is None):
            return False
        return (
            self.variable == other.variable
            and self.parent_order == other.parent_order
            and np.array_equal(self.probabilities, other.probabilities)
            and (self.counts is None or np.array_equal(self.counts, other.counts))
        )


@dataclass(frozen=True)
class BayesianNetwork:
    """Variables + DAG + one CPT per variable; defines the joint distribution."""

    variables: tuple[VariableSpec, ...]
    dag: Dag
    cpts: Mapping[str, Cpt]
    notes: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "cpts", dict(self.cpts))
        object.__setattr__(self, "notes", dict(self.notes))
        by_id = {v.id: v for v in self.variables}
        if len(by_id) != len(self.variables):
            raise ValidationError("duplicate variable ids")
        if set(self.dag.nodes) != set(by_id):
            raise ValidationError("DAG nodes differ from declared variables")
        if set(self.cpts) != set(by_id):
            raise ValidationError("CPT set differs from declared variables")
        for var_id, cpt in self.cpts.items():
            spec = by_id[var_id]
            if cpt.variable != var_id:
                raise ValidationError(f"CPT stored under wrong id {var_id!r}")
            if cpt.parent_order != self.dag.parents_of(var_id):
                raise ValidationError(
                    f"CPT parent order for {var_id!r} differs from DAG parents"
                )
            expected_rows = 1
            for p in cpt.parent_order:
                expected_rows *= by_id[p].cardinality
            if cpt.probabilities.shape != (expected_rows, spec.cardinality):
                raise ValidationError(
                    f"CPT {var_id!r} has shape {cpt.probabilities.shape}, "
                    f"expected {(expected_rows, spec.cardinality)}"
                )
        object.__setattr__(self, "_by_id", by_id)

    def variable(self, var_id: str) -> VariableSpec:
        try:
            return self._by_id[var_id]
        except KeyError:
            raise UnknownVariable(f"unknown variable {var_id!r}") from None

    @property
    def variable_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    def cardinalities(self, ids: Sequence[str]) -> list[int]:
        return [self.variable(v).cardinality for v in ids]

    def cpt_row(self, var_id: str, parent_states: Mapping[str, int]) -> int:
        """Row index for a parent configuration given as state indices."""
        cpt = self.cpts[var_id]
        cards = self.cardinalities(cpt.parent_order)
        config = [parent_states[p] for p in cpt.parent_order]
        return row_index(cards, config)


def encode_assignment(net: BayesianNetwork, a: Assignment) -> dict[str, int]:
    """Validate a total assignment and convert labels to state indices."""
    out: dict[str, int] = {}
    for var, label in a.items():
        out[var] = net.variable(var).state_index(label)
    missing = set(net.variable_ids) - set(out)
    if missing:
        raise ValidationError(f"assignment misses variable(s): {sorted(missing)}")
    return out


def joint_probability(net: BayesianNetwork, a: Assignment) -> float:
    """Joint probability of a total assignment: the product over all
    variables of the matching CPT point-estimate entries."""
    idx = encode_assignment(net, a)
    prob = 1.0
    for var in net.variable_ids:
        cpt = net.cpts[var]
        row = net.cpt_row(var, idx)
        prob *= float(cpt.probabilities[row, idx[var]])
    return prob
