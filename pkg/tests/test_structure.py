import itertools
import math

import numpy as np
import pytest

from riskbn.core import BayesianNetwork, Cpt, Dag, VariableSpec
from riskbn.cvd import cvd_fixture
from riskbn.errors import (
    ConstraintError,
    CycleError,
    InvalidFamily,
    NoOpError,
    UnknownVariable,
)
from riskbn.io import Dataset, parse_dataset
from riskbn.learning import forward_sample
from riskbn.structure import (
    Edit,
    EditScript,
    StructureConstraints,
    apply_edits,
    family_score,
    greedy_thick_thinning,
    total_score,
)

AB_VARS = (
    VariableSpec("A", "A", ("t", "f")),
    VariableSpec("B", "B", ("t", "f")),
)


def chain_net(strength=0.9):
    """A -> B -> C, binary, child copies its parent with given probability."""
    ids = ("A", "B", "C")
    variables = tuple(VariableSpec(i, i, ("t", "f")) for i in ids)
    dag = Dag(ids, {"A": (), "B": ("A",), "C": ("B",)})
    copy_cpt = np.array([[strength, 1 - strength], [1 - strength, strength]])
    cpts = {
        "A": Cpt("A", (), np.array([[0.5, 0.5]])),
        "B": Cpt("B", ("A",), copy_cpt),
        "C": Cpt("C", ("B",), copy_cpt),
    }
    return BayesianNetwork(variables, dag, cpts)


def all_three_node_dags(ids=("A", "B", "C")):
    arcs = [(f, t) for f in ids for t in ids if f != t]
    dags = []
    for r in range(len(arcs) + 1):
        for subset in itertools.combinations(arcs, r):
            parents = {i: tuple(f for f, t in subset if t == i) for i in ids}
            try:
                dags.append(Dag(ids, parents))
            except CycleError:
                continue
    return dags


# ---------------------------------------------------------------------------
# family score
# ---------------------------------------------------------------------------

def test_family_score_two_record_closed_form():
    # binary child, no parents, one 't' and one 'f', alpha=1:
    # marginal likelihood = B(2,2)/B(1,1) = (1!1!/3!) = 1/6, checked here
    # against the two-term chain-rule product (1/2) * (1/3).
    data = parse_dataset("A,B\nt,t\nf,t\n", AB_VARS)
    score = family_score(data, "A", (), alpha=1.0)
    by_sequential_update = math.log(1 / 2) + math.log(1 / 3)
    assert score == pytest.approx(math.log(1 / 6), abs=1e-12)
    assert score == pytest.approx(by_sequential_update, abs=1e-12)


def test_family_score_empty_dataset_is_zero():
    data = Dataset(AB_VARS, np.empty((0, 2), dtype=np.int32))
    assert family_score(data, "A", ()) == 0.0
    assert family_score(data, "B", ("A",)) == 0.0


def test_family_score_record_order_invariant():
    rng = np.random.default_rng(0)
    net = chain_net()
    data = forward_sample(net, 500, seed=1)
    shuffled = Dataset(data.variables, data.codes[rng.permutation(500)])
    for child, parents in [("A", ()), ("B", ("A",)), ("C", ("A", "B"))]:
        assert family_score(data, child, parents) == pytest.approx(
            family_score(shuffled, child, parents), abs=1e-9
        )


def test_family_score_invalid_families():
    data = parse_dataset("A,B\nt,t\n", AB_VARS)
    with pytest.raises(InvalidFamily):
        family_score(data, "A", ("A",))
    with pytest.raises(InvalidFamily):
        family_score(data, "Z", ())
    with pytest.raises(InvalidFamily):
        family_score(data, "A", ("B", "B"))


def test_score_decomposability():
    # total score change from adding one arc equals the change in the
    # affected child's family score alone
    net = chain_net()
    data = forward_sample(net, 2000, seed=7)
    base = Dag(("A", "B", "C"), {"A": (), "B": (), "C": ()})
    with_arc = Dag(("A", "B", "C"), {"A": (), "B": ("A",), "C": ()})
    delta_total = total_score(data, with_arc) - total_score(data, base)
    delta_family = family_score(data, "B", ("A",)) - family_score(data, "B", ())
    assert delta_total == pytest.approx(delta_family, abs=1e-9)


# ---------------------------------------------------------------------------
# greedy thick thinning
# ---------------------------------------------------------------------------

def test_independent_variables_give_empty_graph():
    rng = np.random.default_rng(13)
    codes = rng.integers(0, 2, size=(10_000, 2)).astype(np.int32)
    data = Dataset(AB_VARS, codes)
    dag = greedy_thick_thinning(data)
    assert dag.arcs() == []
    # both orientations of the single candidate arc score below the empty graph
    empty = family_score(data, "A", ()) + family_score(data, "B", ())
    a_to_b = family_score(data, "A", ()) + family_score(data, "B", ("A",))
    b_to_a = family_score(data, "A", ("B",)) + family_score(data, "B", ())
    assert a_to_b < empty and b_to_a < empty


def test_chain_recovery_is_globally_score_maximal():
    data = forward_sample(chain_net(0.9), 50_000, seed=11)
    dag = greedy_thick_thinning(data)
    skeleton = {frozenset(arc) for arc in dag.arcs()}
    assert skeleton == {frozenset({"A", "B"}), frozenset({"B", "C"})}
    best = max(total_score(data, d) for d in all_three_node_dags())
    assert total_score(data, dag) >= best - 1e-9


def test_there_are_25_three_node_dags():
    assert len(all_three_node_dags()) == 25


def test_required_arc_is_kept():
    rng = np.random.default_rng(14)
    codes = rng.integers(0, 2, size=(5_000, 2)).astype(np.int32)
    data = Dataset(AB_VARS, codes)
    constraints = StructureConstraints(required=frozenset({("A", "B")}))
    dag = greedy_thick_thinning(data, constraints)
    assert ("A", "B") in dag.arcs()


def test_forbidden_arc_is_absent():
    data = forward_sample(chain_net(0.9), 20_000, seed=15)
    constraints = StructureConstraints(forbidden=frozenset({("A", "B"), ("B", "A")}))
    dag = greedy_thick_thinning(data, constraints)
    arcs = set(dag.arcs())
    assert ("A", "B") not in arcs and ("B", "A") not in arcs


def test_max_parents_cap():
    net = cvd_fixture()
    data = forward_sample(net, 2_000, seed=16)
    constraints = StructureConstraints(max_parents=1)
    dag = greedy_thick_thinning(data, constraints)
    assert all(len(dag.parents_of(v)) <= 1 for v in dag.nodes)


def test_inconsistent_constraints_rejected():
    with pytest.raises(ConstraintError):
        StructureConstraints(
            required=frozenset({("A", "B")}), forbidden=frozenset({("A", "B")})
        )
    with pytest.raises(ConstraintError):
        StructureConstraints(required=frozenset({("A", "B"), ("B", "A")}))


def test_unknown_constraint_node_rejected():
    data = parse_dataset("A,B\nt,t\n", AB_VARS)
    with pytest.raises(ConstraintError):
        greedy_thick_thinning(
            data, StructureConstraints(required=frozenset({("A", "Z")}))
        )


def test_search_is_deterministic():
    data = forward_sample(chain_net(0.8), 5_000, seed=20)
    assert greedy_thick_thinning(data) == greedy_thick_thinning(data)


def test_search_output_always_acyclic():
    rng = np.random.default_rng(21)
    for _ in range(5):
        from helpers import random_network

        net = random_network(rng, max_nodes=5, max_states=3)
        data = forward_sample(net, 1_000, seed=int(rng.integers(1 << 30)))
        dag = greedy_thick_thinning(data)
        assert set(dag.nodes) == set(net.variable_ids)  # Dag ctor checked acyclicity


# ---------------------------------------------------------------------------
# edit scripts
# ---------------------------------------------------------------------------

def test_empty_script_is_identity():
    dag = chain_net().dag
    assert apply_edits(dag, EditScript()) == dag


def test_add_closing_cycle_raises():
    dag = Dag(("A", "B"), {"A": (), "B": ("A",)})
    with pytest.raises(CycleError):
        apply_edits(dag, EditScript((Edit("add", "B", "A"),)))


def test_noop_edits_raise():
    dag = Dag(("A", "B"), {"A": (), "B": ("A",)})
    with pytest.raises(NoOpError):
        apply_edits(dag, EditScript((Edit("add", "A", "B"),)))
    with pytest.raises(NoOpError):
        apply_edits(dag, EditScript((Edit("remove", "B", "A"),)))
    with pytest.raises(UnknownVariable):
        apply_edits(dag, EditScript((Edit("add", "A", "Z"),)))


def test_edits_rebuild_reference_parent_sets():
    # start from a plausible learned skeleton that got two arcs wrong,
    # then apply the expert corrections; the result must equal the
    # reference structure exactly (parent order included)
    target = cvd_fixture().dag
    parents = {n: list(target.parents_of(n)) for n in target.nodes}
    parents["v11"].remove("v6")        # missing arc v6 -> v11
    parents["v13"] = ["v1", "v2"]      # missing arc v6 -> v13
    parents["v10"] = ["v1", "v3", "v5"]  # spurious arc v5 -> v10
    start = Dag(target.nodes, {n: tuple(ps) for n, ps in parents.items()})
    script = EditScript(
        (
            Edit("remove", "v5", "v10", "no direct effect"),
            Edit("add", "v6", "v11", "activity level drives hypertension"),
            Edit("add", "v6", "v13", "activity level drives diabetes"),
        )
    )
    rebuilt = apply_edits(start, script)
    assert {n: set(rebuilt.parents_of(n)) for n in rebuilt.nodes} == {
        n: set(target.parents_of(n)) for n in target.nodes
    }
    # adds append, so the corrected arc sits last in its parent list
    assert rebuilt.parents_of("v11") == ("v5", "v7", "v6")


def test_edit_script_text_round_trip():
    text = "# expert pass 1\nadd v1 v8\nremove v2 v5  # judged spurious\n"
    script = EditScript.parse(text)
    assert len(script.edits) == 2
    assert script.edits[0] == Edit("add", "v1", "v8")
    assert script.edits[1] == Edit("remove", "v2", "v5", "judged spurious")
    again = EditScript.parse(script.serialize())
    assert again == script


def test_bad_edit_lines_rejected():
    with pytest.raises(NoOpError):
        EditScript.parse("frobnicate v1 v2\n")
    with pytest.raises(NoOpError):
        EditScript.parse("add v1\n")
