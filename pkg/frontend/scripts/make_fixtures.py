"""Record real engine answers for the UI tests.

Runs the same requests through the CLI and the HTTP app and freezes
both answers, so the UI tests can stub fetch with genuine responses and
check that what the browser displays equals what the CLI prints.
"""

import contextlib
import io
import json
from pathlib import Path

from fastapi.testclient import TestClient

from riskbn.cli import main
from riskbn.cvd import cvd_fixture
from riskbn.server import create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

SCENARIOS = [
    {
        "name": "short sleep in the oldest age group",
        "evidence": {"v2": "(64-74]"},
        "target": {"variable": "v7", "state": "<6h"},
    },
    {
        "name": "hypertension for an obese inactive short-sleeper",
        "evidence": {"v5": "obese", "v6": "1", "v7": "<6h"},
        "target": {"variable": "v11", "state": "yes"},
    },
    {
        "name": "hypertension with a BMI state set",
        "evidence": {"v5": ["overw.", "obese"], "v6": "1"},
        "target": {"variable": "v11", "state": "yes"},
    },
]


def cli_evidence_args(evidence):
    out = []
    for var, value in evidence.items():
        if isinstance(value, str):
            out.append(f"{var}={value}")
        else:
            out.append(f"{var}={'|'.join(value)}")
    return out


def run_cli_query(evidence, target):
    buf = io.StringIO()
    argv = ["query", "--net", "fixture"]
    if evidence:
        argv += ["--evidence", *cli_evidence_args(evidence)]
    argv += ["--target", f"{target['variable']}={target['state']}"]
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    assert code == 0, argv
    return buf.getvalue().strip()


def main_():
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(cvd_fixture()))

    network = client.get("/api/network").json()
    (OUT / "network.json").write_text(json.dumps(network, indent=2) + "\n")

    marginals_prior = client.post("/api/marginals", json={"evidence": {}}).json()
    (OUT / "marginals_prior.json").write_text(
        json.dumps(marginals_prior, indent=2) + "\n"
    )
    marginals_oldest = client.post(
        "/api/marginals", json={"evidence": {"v2": "(64-74]"}}
    ).json()
    (OUT / "marginals_age_oldest.json").write_text(
        json.dumps(marginals_oldest, indent=2) + "\n"
    )

    scenarios = []
    for sc in SCENARIOS:
        target_map = {sc["target"]["variable"]: sc["target"]["state"]}
        http = client.post(
            "/api/query", json={"evidence": sc["evidence"], "target": target_map}
        )
        assert http.status_code == 200
        scenarios.append(
            {
                "name": sc["name"],
                "evidence": sc["evidence"],
                "target": sc["target"],
                "http_response": http.json(),
                "cli_output": run_cli_query(sc["evidence"], sc["target"]),
            }
        )
    (OUT / "scenarios.json").write_text(json.dumps(scenarios, indent=2) + "\n")

    base = {"v5": "obese", "v6": "1", "v7": "<6h"}
    target = {"v11": "yes"}
    whatif = client.post(
        "/api/whatif",
        json={"base": base, "target": target,
              "improvements": {"v5": "normal", "v6": "2"}, "combined": True},
    )
    influence = client.post(
        "/api/influence", json={"evidence": base, "target": target}
    )
    assert whatif.status_code == influence.status_code == 200
    (OUT / "whatif.json").write_text(json.dumps({
        "base": base,
        "target": target,
        "improvements": {"v5": "normal", "v6": "2"},
        "whatif_response": whatif.json(),
        "influence_response": influence.json(),
    }, indent=2) + "\n")

    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main_()
