import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskbn.core import (
    BayesianNetwork,
    Cpt,
    Dag,
    VariableSpec,
    joint_probability,
    topological_sort,
)
from riskbn.errors import (
    CycleError,
    UnknownState,
    UnknownVariable,
    ValidationError,
)

from helpers import random_network


def two_node_net(p_a=0.6, p_b_given=((0.5, 0.5), (0.2, 0.8))):
    """A: P(t)=p_a; B|A with rows (A=t, A=f) over states (t, f)."""
    va = VariableSpec("A", "A", ("t", "f"))
    vb = VariableSpec("B", "B", ("t", "f"))
    dag = Dag(("A", "B"), {"A": (), "B": ("A",)})
    cpts = {
        "A": Cpt("A", (), np.array([[p_a, 1 - p_a]])),
        "B": Cpt("B", ("A",), np.array(p_b_given)),
    }
    return BayesianNetwork((va, vb), dag, cpts)


# ---------------------------------------------------------------------------
# topological sort
# ---------------------------------------------------------------------------

def test_toposort_chain():
    dag = Dag(("A", "B", "C"), {"A": (), "B": ("A",), "C": ("B",)})
    assert topological_sort(dag) == ["A", "B", "C"]


def test_toposort_two_cycle():
    with pytest.raises(CycleError):
        Dag(("A", "B"), {"A": ("B",), "B": ("A",)})


def test_toposort_respects_arcs_on_random_dags():
    rng = np.random.default_rng(7)
    for _ in range(50):
        net = random_network(rng)
        order = topological_sort(net.dag)
        assert sorted(order) == sorted(net.dag.nodes)
        pos = {v: i for i, v in enumerate(order)}
        for child in net.dag.nodes:
            for parent in net.dag.parents_of(child):
                assert pos[parent] < pos[child]


# ---------------------------------------------------------------------------
# joint probability
# ---------------------------------------------------------------------------

def test_joint_probability_product():
    net = two_node_net()
    assert joint_probability(net, {"A": "t", "B": "t"}) == pytest.approx(0.30)


def test_joint_probability_zero_entry_annihilates():
    net = two_node_net(p_b_given=((0.0, 1.0), (0.2, 0.8)))
    assert joint_probability(net, {"A": "t", "B": "t"}) == 0.0


def test_joint_probability_uniform_collider():
    # A -> C <- B, every CPT uniform over two states: by direct
    # enumeration all 8 assignments carry probability 1/8.
    va = VariableSpec("A", "A", ("t", "f"))
    vb = VariableSpec("B", "B", ("t", "f"))
    vc = VariableSpec("C", "C", ("t", "f"))
    dag = Dag(("A", "B", "C"), {"A": (), "B": (), "C": ("A", "B")})
    half = np.full((1, 2), 0.5)
    net = BayesianNetwork(
        (va, vb, vc),
        dag,
        {
            "A": Cpt("A", (), half),
            "B": Cpt("B", (), half),
            "C": Cpt("C", ("A", "B"), np.full((4, 2), 0.5)),
        },
    )
    total = 0.0
    for combo in itertools.product("tf", repeat=3):
        p = joint_probability(net, dict(zip("ABC", combo)))
        assert p == pytest.approx(0.125)
        total += p
    assert total == pytest.approx(1.0)


def test_joint_probability_rejects_bad_assignments():
    net = two_node_net()
    with pytest.raises(UnknownVariable):
        joint_probability(net, {"A": "t", "B": "t", "Z": "t"})
    with pytest.raises(UnknownState):
        joint_probability(net, {"A": "t", "B": "maybe"})
    with pytest.raises(ValidationError):
        joint_probability(net, {"A": "t"})  # not total


def test_joint_sums_to_one_over_all_assignments():
    rng = np.random.default_rng(11)
    for _ in range(10):
        net = random_network(rng, max_nodes=5)
        total = sum(
            joint_probability(net, {v.id: s for v, s in zip(net.variables, combo)})
            for combo in itertools.product(*(v.states for v in net.variables))
        )
        assert total == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# invariants of the types themselves
# ---------------------------------------------------------------------------

def test_variable_needs_two_distinct_states():
    with pytest.raises(ValidationError):
        VariableSpec("x", "x", ("only",))
    with pytest.raises(ValidationError):
        VariableSpec("x", "x", ("a", "a"))


def test_dag_rejects_unknown_parent_and_duplicates():
    with pytest.raises(ValidationError):
        Dag(("A",), {"A": ("B",)})
    with pytest.raises(ValidationError):
        Dag(("A", "B"), {"A": (), "B": ("A", "A")})


def test_cpt_row_sums_and_counts():
    with pytest.raises(ValidationError):
        Cpt("x", (), np.array([[0.5, 0.4]]))
    with pytest.raises(ValidationError):
        Cpt("x", (), np.array([[0.5, 0.5]]), counts=np.array([[1.0, 0.0]]))
    with pytest.raises(ValidationError):  # probabilities not counts/rowsum
        Cpt("x", (), np.array([[0.5, 0.5]]), counts=np.array([[1.0, 3.0]]))
    ok = Cpt("x", (), np.array([[0.25, 0.75]]), counts=np.array([[1.0, 3.0]]))
    assert ok.n_rows == 1 and ok.n_states == 2


def test_cpt_row_count_must_match_parent_cards():
    va = VariableSpec("A", "A", ("t", "f"))
    vb = VariableSpec("B", "B", ("x", "y", "z"))
    dag = Dag(("A", "B"), {"A": (), "B": ("A",)})
    with pytest.raises(ValidationError):
        BayesianNetwork(
            (va, vb),
            dag,
            {
                "A": Cpt("A", (), np.array([[0.5, 0.5]])),
                "B": Cpt("B", ("A",), np.full((3, 3), 1 / 3)),  # needs 2 rows
            },
        )


def test_network_types_are_immutable():
    net = two_node_net()
    with pytest.raises(Exception):
        net.variables = ()
    with pytest.raises(ValueError):
        net.cpts["A"].probabilities[0, 0] = 0.9


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_random_dags_always_sortable(seed):
    rng = np.random.default_rng(seed)
    net = random_network(rng, max_nodes=6)
    order = topological_sort(net.dag)
    assert set(order) == set(net.dag.nodes)
