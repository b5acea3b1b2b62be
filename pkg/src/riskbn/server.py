"""HTTP query service.

Stateless: evidence travels in every request, so clearing evidence is a
client-side act and concurrent requests are trivially safe on the
immutable network.  Domain errors map to 400 (422 for zero-probability
evidence) with the error class name and message in the body.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import analysis, inference
from .core import BayesianNetwork
from .errors import RiskBnError, SchemaError, ZeroEvidenceError
from .io import network_to_document


def _as_evidence(obj) -> dict:
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise SchemaError("evidence must be an object of var -> state(s)")
    out = {}
    for var, value in obj.items():
        if isinstance(value, str):
            out[var] = value
        elif isinstance(value, list) and all(isinstance(s, str) for s in value):
            out[var] = value
        else:
            raise SchemaError(f"evidence for {var!r} must be a state or state list")
    return out


def _as_target(obj) -> dict[str, str]:
    if not isinstance(obj, dict) or not obj:
        raise SchemaError("target must be a non-empty object of var -> state")
    for var, value in obj.items():
        if not isinstance(value, str):
            raise SchemaError(f"target state for {var!r} must be a single label")
    return dict(obj)


async def _json_body(request: Request) -> dict:
    try:
        payload = await request.json()
    except Exception:
        raise SchemaError("request body must be JSON") from None
    if not isinstance(payload, dict):
        raise SchemaError("request body must be a JSON object")
    return payload


def create_app(net: BayesianNetwork, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="riskbn", docs_url=None, redoc_url=None)
    description = network_to_document(net)
    del description["cpts"]

    @app.exception_handler(RiskBnError)
    async def _domain_error(request: Request, exc: RiskBnError):
        status = 422 if isinstance(exc, ZeroEvidenceError) else 400
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/api/health")
    async def health():
        return {"status": "ok"}

    @app.get("/api/network")
    async def network():
        return description

    @app.post("/api/query")
    async def query(request: Request):
        payload = await _json_body(request)
        evidence = _as_evidence(payload.get("evidence"))
        target = _as_target(payload.get("target"))
        method = payload.get("method", "ve")
        if method not in ("ve", "enum"):
            raise SchemaError(f"method must be 've' or 'enum', got {method!r}")
        if method == "enum":
            result = inference.enumerate_query(net, evidence, target)
        else:
            result = inference.query_conditional(net, evidence, target)
        return {
            "probability": result.probability,
            "evidence_probability": result.evidence_probability,
            "method": result.method,
        }

    @app.post("/api/marginals")
    async def marginals(request: Request):
        payload = await _json_body(request)
        evidence = _as_evidence(payload.get("evidence"))
        dists = inference.posterior_marginals(net, evidence)
        return {
            "marginals": {
                var: {
                    "states": list(net.variable(var).states),
                    "probabilities": [float(p) for p in dist],
                }
                for var, dist in dists.items()
            }
        }

    @app.post("/api/influence")
    async def influence(request: Request):
        payload = await _json_body(request)
        report = analysis.influential_findings(
            net,
            _as_evidence(payload.get("evidence")),
            _as_target(payload.get("target")),
        )
        return report.to_document()

    @app.post("/api/whatif")
    async def whatif(request: Request):
        payload = await _json_body(request)
        improvements = payload.get("improvements")
        if not isinstance(improvements, dict) or not all(
            isinstance(s, str) for s in improvements.values()
        ):
            raise SchemaError("improvements must be an object of var -> state")
        table = analysis.whatif_improvements(
            net,
            _as_evidence(payload.get("base")),
            _as_target(payload.get("target")),
            improvements,
            combined=bool(payload.get("combined", False)),
        )
        return table.to_document()

    @app.post("/api/prevalence")
    async def prevalence(request: Request):
        payload = await _json_body(request)
        group = payload.get("group")
        if not isinstance(group, str):
            raise SchemaError("group must be a variable id")
        raw = payload.get("outcomes")
        if not isinstance(raw, list) or not raw:
            raise SchemaError("outcomes must be a non-empty array")
        outcomes = []
        for entry in raw:
            if (not isinstance(entry, dict) or "variable" not in entry
                    or "state" not in entry):
                raise SchemaError("each outcome needs 'variable' and 'state'")
            outcomes.append((str(entry["variable"]), str(entry["state"])))
        table = analysis.prevalence_table(net, group, outcomes)
        return table.to_document()

    @app.post("/api/compare-beta")
    async def compare_beta(request: Request):
        payload = await _json_body(request)
        pair = {}
        for key in ("a", "b"):
            value = payload.get(key)
            if (not isinstance(value, list) or len(value) != 2
                    or not all(isinstance(x, (int, float)) for x in value)):
                raise SchemaError(f"{key!r} must be a [a, b] number pair")
            pair[key] = analysis.BetaPosterior(float(value[0]), float(value[1]))
        samples = payload.get("samples", 1_000_000)
        seed = payload.get("seed", 0)
        if not isinstance(samples, int) or not isinstance(seed, int):
            raise SchemaError("'samples' and 'seed' must be integers")
        result = analysis.compare_proportions(
            pair["a"], pair["b"], samples=samples, seed=seed
        )
        return {
            "probability": result.probability,
            "standard_error": result.standard_error,
            "samples": result.samples,
        }

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(net_path: str, port: int = 8000, host: str = "127.0.0.1",
          static_dir: str | None = None) -> None:
    """Load a network document and serve it until interrupted."""
    import uvicorn

    from .io import load_network

    uvicorn.run(create_app(load_network(net_path), static_dir=static_dir),
                host=host, port=port, log_level="warning")
