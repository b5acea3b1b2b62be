import numpy as np
import pytest

from riskbn.core import BayesianNetwork, Cpt, Dag, VariableSpec
from riskbn.cvd import cvd_fixture
from riskbn.errors import (
    EmptyStateSet,
    OverlapError,
    UnknownState,
    ZeroEvidenceError,
)
from riskbn.inference import (
    enumerate_query,
    evidence_probability,
    posterior_marginals,
    query_conditional,
)

from helpers import enumerate_conditional, random_evidence_and_target, random_network


def two_node_net():
    va = VariableSpec("A", "A", ("t", "f"))
    vb = VariableSpec("B", "B", ("t", "f"))
    dag = Dag(("A", "B"), {"A": (), "B": ("A",)})
    return BayesianNetwork(
        (va, vb),
        dag,
        {
            "A": Cpt("A", (), np.array([[0.6, 0.4]])),
            "B": Cpt("B", ("A",), np.array([[0.5, 0.5], [0.2, 0.8]])),
        },
    )


def monotone_chain():
    """G -> S with S probabilities strictly increasing in G's state."""
    vg = VariableSpec("G", "G", ("g0", "g1", "g2"))
    vs = VariableSpec("S", "S", ("yes", "no"))
    dag = Dag(("G", "S"), {"G": (), "S": ("G",)})
    return BayesianNetwork(
        (vg, vs),
        dag,
        {
            "G": Cpt("G", (), np.array([[0.5, 0.3, 0.2]])),
            "S": Cpt("S", ("G",), np.array([[0.1, 0.9], [0.4, 0.6], [0.8, 0.2]])),
        },
    )


# ---------------------------------------------------------------------------
# enumeration (the oracle itself, against hand-computed sums)
# ---------------------------------------------------------------------------

def test_enumerate_two_node_posterior():
    # P(A=t | B=t) = 0.6*0.5 / (0.6*0.5 + 0.4*0.2) = 0.30/0.38 = 15/19
    res = enumerate_query(two_node_net(), {"B": "t"}, {"A": "t"})
    assert res.probability == pytest.approx(15 / 19, abs=1e-12)
    assert res.evidence_probability == pytest.approx(0.38, abs=1e-12)
    assert res.method == "enumeration"


def test_enumerate_prior_marginal():
    res = enumerate_query(two_node_net(), {}, {"A": "t"})
    assert res.probability == pytest.approx(0.6, abs=1e-12)
    assert res.evidence_probability == pytest.approx(1.0, abs=1e-12)


def test_enumerate_zero_evidence():
    net = two_node_net()
    zero = BayesianNetwork(
        net.variables,
        net.dag,
        {
            "A": Cpt("A", (), np.array([[1.0, 0.0]])),
            "B": net.cpts["B"],
        },
    )
    with pytest.raises(ZeroEvidenceError):
        enumerate_query(zero, {"A": "f"}, {"B": "t"})


# ---------------------------------------------------------------------------
# variable elimination vs the oracle
# ---------------------------------------------------------------------------

def test_elimination_matches_enumeration_on_examples():
    net = two_node_net()
    for evidence, target in [({"B": "t"}, {"A": "t"}), ({}, {"A": "t"})]:
        ve = query_conditional(net, evidence, target)
        en = enumerate_query(net, evidence, target)
        assert ve.probability == pytest.approx(en.probability, abs=1e-10)
        assert ve.evidence_probability == pytest.approx(
            en.evidence_probability, abs=1e-10
        )
        assert ve.method == "elimination"


def test_elimination_matches_enumeration_randomized():
    rng = np.random.default_rng(42)
    for _ in range(40):
        net = random_network(rng, max_nodes=6)
        evidence, target = random_evidence_and_target(rng, net)
        ve = query_conditional(net, evidence, target)
        en = enumerate_query(net, evidence, target)
        assert abs(ve.probability - en.probability) <= 1e-10
        assert abs(ve.evidence_probability - en.evidence_probability) <= 1e-10


def test_elimination_matches_slow_loop_oracle():
    rng = np.random.default_rng(99)
    for _ in range(5):
        net = random_network(rng, max_nodes=4, max_states=3)
        evidence, target = random_evidence_and_target(rng, net)
        ve = query_conditional(net, evidence, target)
        assert ve.probability == pytest.approx(
            enumerate_conditional(net, evidence, target), abs=1e-10
        )


def test_chain_rule_identity():
    rng = np.random.default_rng(17)
    for _ in range(20):
        net = random_network(rng, max_nodes=6)
        evidence, target = random_evidence_and_target(rng, net)
        res = query_conditional(net, evidence, target)
        p_e = evidence_probability(net, evidence)
        joint_direct = enumerate_query(net, {}, {**{
            v: s for v, s in target.items()
        }})
        # P(target & evidence) two ways
        both = dict(evidence)
        both.update(target)
        assert res.probability * p_e == pytest.approx(
            evidence_probability(net, both), abs=1e-10
        )
        assert joint_direct.method == "enumeration"


def test_elimination_order_independence():
    rng = np.random.default_rng(3)
    for _ in range(20):
        net = random_network(rng, max_nodes=7)
        evidence, target = random_evidence_and_target(rng, net)
        a = query_conditional(net, evidence, target, elimination_order="min_fill")
        b = query_conditional(
            net, evidence, target, elimination_order="reverse_topological"
        )
        assert abs(a.probability - b.probability) <= 1e-10
        assert abs(a.evidence_probability - b.evidence_probability) <= 1e-10


# ---------------------------------------------------------------------------
# evidence probability
# ---------------------------------------------------------------------------

def test_evidence_probability_examples():
    net = two_node_net()
    assert evidence_probability(net, {}) == pytest.approx(1.0)
    assert evidence_probability(net, {"A": "t"}) == pytest.approx(0.6)


def test_contradictory_deterministic_evidence_is_zero():
    net = two_node_net()
    det = BayesianNetwork(
        net.variables,
        net.dag,
        {
            "A": net.cpts["A"],
            "B": Cpt("B", ("A",), np.array([[1.0, 0.0], [1.0, 0.0]])),
        },
    )
    assert evidence_probability(det, {"B": "f"}) == 0.0


# ---------------------------------------------------------------------------
# marginals
# ---------------------------------------------------------------------------

def test_marginals_match_per_variable_queries():
    rng = np.random.default_rng(8)
    for _ in range(10):
        net = random_network(rng, max_nodes=5)
        evidence, _ = random_evidence_and_target(rng, net)
        marg = posterior_marginals(net, evidence)
        for var in net.variable_ids:
            dist = marg[var]
            assert dist.sum() == pytest.approx(1.0, abs=1e-9)
            if var in evidence and isinstance(evidence[var], str):
                k = net.variable(var).state_index(evidence[var])
                assert dist[k] == pytest.approx(1.0, abs=1e-9)
                continue
            if var in evidence:
                continue  # set-valued evidence: renormalized within the set
            for k, state in enumerate(net.variable(var).states):
                direct = query_conditional(net, evidence, {var: state})
                assert abs(dist[k] - direct.probability) <= 1e-10


def test_fixture_sleep_marginal_under_age_evidence():
    net = cvd_fixture()
    marg = posterior_marginals(net, {"v2": "(64-74]"})
    assert marg["v7"] == pytest.approx([0.1964, 0.8033, 0.0003], abs=1e-9)
    assert marg["v2"][net.variable("v2").states.index("(64-74]")] == 1.0


def test_fixture_sleep_prior_is_age_mixture():
    # With no evidence, the sleep marginal is the age-uniform mixture of
    # the six CPT rows (the age placeholder is uniform): hand-mixed here.
    net = cvd_fixture()
    expected = net.cpts["v7"].probabilities.mean(axis=0)
    marg = posterior_marginals(net, {})
    assert marg["v7"] == pytest.approx(expected, abs=1e-12)


def test_d_separated_evidence_does_not_move_target():
    # chain A -> B -> C: given B, evidence on A cannot move C
    va = VariableSpec("A", "A", ("t", "f"))
    vb = VariableSpec("B", "B", ("t", "f"))
    vc = VariableSpec("C", "C", ("t", "f"))
    dag = Dag(("A", "B", "C"), {"A": (), "B": ("A",), "C": ("B",)})
    net = BayesianNetwork(
        (va, vb, vc),
        dag,
        {
            "A": Cpt("A", (), np.array([[0.3, 0.7]])),
            "B": Cpt("B", ("A",), np.array([[0.9, 0.1], [0.2, 0.8]])),
            "C": Cpt("C", ("B",), np.array([[0.6, 0.4], [0.1, 0.9]])),
        },
    )
    with_a = query_conditional(net, {"B": "t", "A": "t"}, {"C": "t"})
    without = query_conditional(net, {"B": "t"}, {"C": "t"})
    assert abs(with_a.probability - without.probability) <= 1e-10


def test_zero_evidence_marginals_raise():
    net = two_node_net()
    det = BayesianNetwork(
        net.variables,
        net.dag,
        {
            "A": Cpt("A", (), np.array([[1.0, 0.0]])),
            "B": net.cpts["B"],
        },
    )
    with pytest.raises(ZeroEvidenceError):
        posterior_marginals(det, {"A": "f"})


# ---------------------------------------------------------------------------
# multi-state evidence
# ---------------------------------------------------------------------------

def test_full_state_set_equals_no_evidence():
    net = monotone_chain()
    full = query_conditional(net, {"G": ["g0", "g1", "g2"]}, {"S": "yes"})
    none = query_conditional(net, {}, {"S": "yes"})
    assert full.probability == pytest.approx(none.probability, abs=1e-12)


def test_singleton_set_equals_plain_evidence():
    net = monotone_chain()
    a = query_conditional(net, {"G": ["g1"]}, {"S": "yes"})
    b = query_conditional(net, {"G": "g1"}, {"S": "yes"})
    assert a.probability == pytest.approx(b.probability, abs=1e-15)
    assert a.evidence_probability == pytest.approx(b.evidence_probability, abs=1e-15)


def test_state_set_answer_lies_between_singletons():
    net = monotone_chain()
    lo = query_conditional(net, {"G": "g1"}, {"S": "yes"}).probability
    hi = query_conditional(net, {"G": "g2"}, {"S": "yes"}).probability
    both = query_conditional(net, {"G": ["g1", "g2"]}, {"S": "yes"}).probability
    assert min(lo, hi) <= both <= max(lo, hi)
    # and the set query agrees with the enumeration oracle
    en = enumerate_query(net, {"G": ["g1", "g2"]}, {"S": "yes"})
    assert both == pytest.approx(en.probability, abs=1e-12)
    assert both == pytest.approx(
        enumerate_conditional(net, {"G": ["g1", "g2"]}, {"S": "yes"}), abs=1e-12
    )


def test_empty_state_set_rejected():
    with pytest.raises(EmptyStateSet):
        query_conditional(monotone_chain(), {"G": []}, {"S": "yes"})


# ---------------------------------------------------------------------------
# errors and guard rails
# ---------------------------------------------------------------------------

def test_overlap_error():
    with pytest.raises(OverlapError):
        query_conditional(two_node_net(), {"A": "t"}, {"A": "f"})
    with pytest.raises(OverlapError):
        enumerate_query(two_node_net(), {"A": "t"}, {"A": "f"})


def test_unknown_state_label_raises():
    with pytest.raises(UnknownState):
        query_conditional(two_node_net(), {"A": "tt"}, {"B": "t"})


def test_long_tiny_chain_keeps_conditionals_finite():
    # 45 binary variables, each strongly tied to the previous one, with
    # "down" states carrying 1e-8 mass: the joint of the all-down path is
    # ~1e-352, far below the smallest positive double, yet conditionals
    # must stay well-defined via the rescaling guard.
    n = 45
    ids = [f"x{i}" for i in range(n)]
    variables = tuple(VariableSpec(i, i, ("up", "down")) for i in ids)
    parents = {ids[0]: ()}
    cpts = {ids[0]: Cpt(ids[0], (), np.array([[1e-8, 1.0 - 1e-8]]))}
    for k in range(1, n):
        parents[ids[k]] = (ids[k - 1],)
        cpts[ids[k]] = Cpt(
            ids[k], (ids[k - 1],),
            np.array([[1.0 - 1e-8, 1e-8], [1e-8, 1.0 - 1e-8]]),
        )
    net = BayesianNetwork(variables, Dag(tuple(ids), parents), cpts)
    evidence = {i: "down" for i in ids[:-1]}
    res = query_conditional(net, evidence, {ids[-1]: "down"})
    assert np.isfinite(res.probability)
    assert res.probability == pytest.approx(1.0 - 1e-8, rel=1e-9)
