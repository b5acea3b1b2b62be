"""Command-line interface.

Exit codes: 0 on success, 2 on usage errors (argparse), 1 on domain
errors, whose class name is printed on stderr.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis, inference, io, learning, structure
from .core import BayesianNetwork
from .cvd import cvd_fixture
from .errors import RiskBnError


def _load_net(ref: str) -> BayesianNetwork:
    if ref == "fixture":
        return cvd_fixture()
    return io.load_network(ref)


def _parse_item(text: str) -> tuple[str, str | list[str]]:
    var, sep, value = text.partition("=")
    if not sep or not var or not value:
        raise argparse.ArgumentTypeError(f"expected var=state, got {text!r}")
    if "|" in value:
        return var, value.split("|")
    return var, value


def _evidence_dict(items) -> dict:
    return dict(_parse_item(t) for t in items or [])


def _target_dict(items) -> dict[str, str]:
    out = {}
    for t in items or []:
        var, value = _parse_item(t)
        if not isinstance(value, str):
            raise argparse.ArgumentTypeError(f"target must be a single state: {t!r}")
        out[var] = value
    return out


def _parse_arcs_file(path: str) -> set[tuple[str, str]]:
    arcs = set()
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.partition("#")[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise argparse.ArgumentTypeError(f"bad arc line: {raw.strip()!r}")
            arcs.add((tokens[0], tokens[1]))
    return arcs


def _beta_pair(text: str) -> analysis.BetaPosterior:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected A,B got {text!r}")
    return analysis.BetaPosterior(float(parts[0]), float(parts[1]))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_fit(args) -> int:
    skeleton = _load_net(args.structure)
    with open(args.data, "r", encoding="utf-8") as fh:
        data = io.parse_dataset(fh.read(), skeleton.variables)
    stats = learning.tabulate_counts(data, skeleton.dag)
    post = learning.fit_parameters(stats, args.alpha)
    net = post.to_network(notes={"fitted": {"alpha": args.alpha,
                                            "records": data.n_records}})
    io.save_network(net, args.out)
    print(f"fitted {len(net.variables)} variables from {data.n_records} records "
          f"-> {args.out}")
    return 0


def _cmd_learn_structure(args) -> int:
    with open(args.data, "r", encoding="utf-8") as fh:
        text = fh.read()
    variables = io.variables_from_csv(text)
    data = io.parse_dataset(text, variables)
    constraints = structure.StructureConstraints(
        required=frozenset(_parse_arcs_file(args.required) if args.required else ()),
        forbidden=frozenset(_parse_arcs_file(args.forbidden) if args.forbidden else ()),
    )
    dag = structure.greedy_thick_thinning(data, constraints, args.alpha)
    net = _uniform_network(variables, dag)
    io.save_network(net, args.out)
    for f, t in dag.arcs():
        print(f"{f} -> {t}")
    return 0


def _uniform_network(variables, dag) -> BayesianNetwork:
    """Structure-only document: uniform placeholder rows for every CPT."""
    from .core import Cpt
    by_id = {v.id: v for v in variables}
    cpts = {}
    for v in variables:
        n_rows = 1
        for p in dag.parents_of(v.id):
            n_rows *= by_id[p].cardinality
        cpts[v.id] = Cpt(
            v.id, dag.parents_of(v.id),
            np.full((n_rows, v.cardinality), 1.0 / v.cardinality),
        )
    return BayesianNetwork(
        variables=tuple(variables), dag=dag, cpts=cpts,
        notes={"placeholder_cpts": [v.id for v in variables]},
    )


def _cmd_edit(args) -> int:
    net = _load_net(args.structure)
    with open(args.script, "r", encoding="utf-8") as fh:
        script = structure.EditScript.parse(fh.read())
    dag = structure.apply_edits(net.dag, script)
    io.save_network(_uniform_network(net.variables, dag), args.out)
    print(f"applied {len(script.edits)} edit(s) -> {args.out}")
    return 0


def _cmd_query(args) -> int:
    net = _load_net(args.net)
    evidence = _evidence_dict(args.evidence)
    target = _target_dict(args.target)
    if args.method == "enum":
        result = inference.enumerate_query(net, evidence, target)
    else:
        result = inference.query_conditional(net, evidence, target)
    print(f"{result.probability:.10g}")
    return 0


def _cmd_marginals(args) -> int:
    net = _load_net(args.net)
    marginals = inference.posterior_marginals(net, _evidence_dict(args.evidence))
    for var, dist in marginals.items():
        for state, p in zip(net.variable(var).states, dist):
            print(f"{var} {state} {p:.10g}")
    return 0


def _cmd_influence(args) -> int:
    net = _load_net(args.net)
    report = analysis.influential_findings(
        net, _evidence_dict(args.evidence), _target_dict(args.target)
    )
    print(analysis.format_influence(report))
    return 0


def _cmd_whatif(args) -> int:
    net = _load_net(args.net)
    improvements = {}
    for item in args.improve:
        var, value = _parse_item(item)
        if not isinstance(value, str):
            raise argparse.ArgumentTypeError(f"improvement must be one state: {item!r}")
        improvements[var] = value
    table = analysis.whatif_improvements(
        net, _evidence_dict(args.base), _target_dict(args.target),
        improvements, combined=args.combined,
    )
    print(analysis.format_whatif(table))
    return 0


def _cmd_prevalence(args) -> int:
    net = _load_net(args.net)
    outcomes = []
    for item in args.outcome:
        var, value = _parse_item(item)
        if not isinstance(value, str):
            raise argparse.ArgumentTypeError(f"outcome must be one state: {item!r}")
        outcomes.append((var, value))
    table = analysis.prevalence_table(net, args.group, outcomes)
    print(analysis.format_prevalence(table))
    return 0


def _cmd_sample(args) -> int:
    net = _load_net(args.net)
    data = learning.forward_sample(net, args.count, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(data.to_csv())
    print(f"wrote {data.n_records} records -> {args.out}")
    return 0


def _cmd_crossval(args) -> int:
    skeleton = _load_net(args.structure)
    with open(args.data, "r", encoding="utf-8") as fh:
        data = io.parse_dataset(fh.read(), skeleton.variables)
    lls = learning.cross_validate(
        data, skeleton.dag, folds=args.folds, alpha=args.alpha, seed=args.seed
    )
    sizes = [len(part) for part in
             np.array_split(np.arange(data.n_records), args.folds)]
    for i, (ll, n) in enumerate(zip(lls, sizes)):
        print(f"fold {i}: log-likelihood {ll:.6f} over {n} records "
              f"({ll / n:.6f} per record)")
    per_record = sum(lls) / data.n_records
    print(f"mean per-record holdout log-likelihood: {per_record:.6f}")
    return 0


def _cmd_compare_beta(args) -> int:
    result = analysis.compare_proportions(
        args.a, args.b, samples=args.count, seed=args.seed
    )
    print(f"{result.probability:.6f} se={result.standard_error:.3g}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(_load_net(args.net), static_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_evidence_flag(p, flag="--evidence", required=False):
    p.add_argument(flag, action="extend", nargs="+", default=[],
                   required=required, metavar="VAR=STATE[|STATE...]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskbn",
        description="Discrete Bayesian network engine: learning, exact queries, "
                    "and decision-support analyses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="learn CPTs from data for a given structure")
    p.add_argument("--data", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("learn-structure", help="greedy thick-thinning search")
    p.add_argument("--data", required=True)
    p.add_argument("--required", default=None)
    p.add_argument("--forbidden", default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_learn_structure)

    p = sub.add_parser("edit", help="apply an edit script to a structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_edit)

    p = sub.add_parser("query", help="conditional probability of a target")
    p.add_argument("--net", required=True)
    _add_evidence_flag(p)
    p.add_argument("--target", action="extend", nargs="+", required=True,
                   metavar="VAR=STATE")
    p.add_argument("--method", choices=("ve", "enum"), default="ve")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("marginals", help="posterior marginal of every variable")
    p.add_argument("--net", required=True)
    _add_evidence_flag(p)
    p.set_defaults(func=_cmd_marginals)

    p = sub.add_parser("influence", help="impact of dropping each finding")
    p.add_argument("--net", required=True)
    _add_evidence_flag(p, required=True)
    p.add_argument("--target", action="extend", nargs="+", required=True,
                   metavar="VAR=STATE")
    p.set_defaults(func=_cmd_influence)

    p = sub.add_parser("whatif", help="improved-state scenarios for a base case")
    p.add_argument("--net", required=True)
    _add_evidence_flag(p, flag="--base", required=True)
    p.add_argument("--target", action="extend", nargs="+", required=True,
                   metavar="VAR=STATE")
    p.add_argument("--improve", action="extend", nargs="+", required=True,
                   metavar="VAR=STATE")
    p.add_argument("--combined", action="store_true")
    p.set_defaults(func=_cmd_whatif)

    p = sub.add_parser("prevalence", help="P(outcome | group state) grid")
    p.add_argument("--net", required=True)
    p.add_argument("--group", required=True, metavar="VAR")
    p.add_argument("--outcome", action="extend", nargs="+", required=True,
                   metavar="VAR=STATE")
    p.set_defaults(func=_cmd_prevalence)

    p = sub.add_parser("sample", help="forward-sample synthetic records")
    p.add_argument("--net", required=True)
    p.add_argument("-n", dest="count", type=int, required=True, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("crossval", help="k-fold holdout log-likelihood")
    p.add_argument("--data", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--folds", type=int, default=5, metavar="K")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_crossval)

    p = sub.add_parser("compare-beta",
                       help="P(theta1 > theta2) for two Beta posteriors")
    p.add_argument("--a", type=_beta_pair, required=True, metavar="A1,B1")
    p.add_argument("--b", type=_beta_pair, required=True, metavar="A2,B2")
    p.add_argument("-n", dest="count", type=int, default=1_000_000, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_compare_beta)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--net", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None,
                   help="optional directory of static files to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RiskBnError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"IOError: {e}", file=sys.stderr)
        return 1


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
