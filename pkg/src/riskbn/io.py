"""Network documents and dataset ingestion.

The network document is JSON with a fixed schema::

    {
      "version": 1,
      "variables": [{"id": ..., "label": ..., "states": [...]}, ...],
      "parents":   {id: [parent ids], ...},
      "cpts":      {id: {"parent_order": [...], "rows": [[...]],
                         "counts": [[...]]?}, ...},
      "notes":     {...}
    }

Serialization is canonical: fixed top-level key order, object keys
sorted, 2-space indentation, floats printed with Python's shortest
round-trip representation.  ``serialize(parse(serialize(net)))`` is
byte-identical to ``serialize(net)``.

Datasets are plain CSV: a header row of variable ids followed by rows
of state labels.  Cells are whitespace-trimmed and matched
case-sensitively; empty cells are rejected (incomplete records are
removed, not imputed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import BayesianNetwork, Cpt, Dag, VariableSpec
from .errors import (
    HeaderError,
    MissingValueError,
    SchemaError,
    UnknownStateError,
    ValidationError,
    VersionError,
)

FORMAT_VERSION = 1

PARSE_ROW_SUM_ATOL = 1e-6


# ---------------------------------------------------------------------------
# canonical JSON emitter
# ---------------------------------------------------------------------------

def _fmt_scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if not np.isfinite(v):
            raise SchemaError(f"non-finite number {v!r} cannot be serialized")
        return repr(v)
    if x is None:
        return "null"
    raise SchemaError(f"cannot serialize value of type {type(x).__name__}")


def _emit(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_emit(v, indent + 1)}"
            for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = list(value)
        if not seq:
            return "[]"
        if all(not isinstance(v, (Mapping, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_fmt_scalar(v) for v in seq) + "]"
        items = [f"{inner}{_emit(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _fmt_scalar(value)


def network_to_document(net: BayesianNetwork) -> dict:
    """The JSON-compatible document for a network (plain dict)."""
    doc: dict = {
        "version": FORMAT_VERSION,
        "variables": [
            {"id": v.id, "label": v.label, "states": list(v.states)}
            for v in net.variables
        ],
        "parents": {v: list(net.dag.parents_of(v)) for v in net.variable_ids},
        "cpts": {},
        "notes": net.notes,
    }
    for var in net.variable_ids:
        cpt = net.cpts[var]
        block: dict = {
            "parent_order": list(cpt.parent_order),
            "rows": [[float(x) for x in row] for row in cpt.probabilities],
        }
        if cpt.counts is not None:
            block["counts"] = [[float(x) for x in row] for row in cpt.counts]
        doc["cpts"][var] = block
    return doc


def serialize_network(net: BayesianNetwork) -> str:
    """Canonical text form of a network; deterministic byte-for-byte."""
    doc = network_to_document(net)
    inner = "  "
    parts = []
    for key in ("version", "variables", "parents", "cpts", "notes"):
        parts.append(f'{inner}"{key}": {_emit(doc[key], 1)}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _require(cond: bool, msg: str):
    if not cond:
        raise SchemaError(msg)


def document_to_network(doc: dict) -> BayesianNetwork:
    _require(isinstance(doc, dict), "document must be a JSON object")
    if "version" not in doc:
        raise SchemaError("missing 'version'")
    if doc["version"] != FORMAT_VERSION:
        raise VersionError(f"unsupported format version {doc['version']!r}")
    for key in ("variables", "parents", "cpts"):
        _require(key in doc, f"missing {key!r}")
    _require(isinstance(doc["variables"], list), "'variables' must be an array")
    _require(isinstance(doc["parents"], dict), "'parents' must be an object")
    _require(isinstance(doc["cpts"], dict), "'cpts' must be an object")
    notes = doc.get("notes", {})
    _require(isinstance(notes, dict), "'notes' must be an object")

    variables = []
    for entry in doc["variables"]:
        _require(isinstance(entry, dict), "variable entries must be objects")
        for key in ("id", "label", "states"):
            _require(key in entry, f"variable entry missing {key!r}")
        variables.append(
            VariableSpec(
                str(entry["id"]), str(entry["label"]),
                tuple(str(s) for s in entry["states"]),
            )
        )
    ids = [v.id for v in variables]
    declared = set(ids)

    parents = {}
    for var, plist in doc["parents"].items():
        _require(isinstance(plist, list), f"parents of {var!r} must be an array")
        if var not in declared:
            raise ValidationError(f"parents map names unknown variable {var!r}")
        for p in plist:
            if p not in declared:
                raise ValidationError(f"unknown parent id {p!r} at {var!r}")
        parents[var] = tuple(str(p) for p in plist)
    missing = declared - set(parents)
    if missing:
        raise ValidationError(f"no parent list for: {sorted(missing)}")
    dag = Dag(nodes=tuple(ids), parents=parents)  # CycleError -> caller

    by_id = {v.id: v for v in variables}
    cpts = {}
    for var in ids:
        block = doc["cpts"].get(var)
        if block is None:
            raise ValidationError(f"no CPT block for {var!r}")
        _require(isinstance(block, dict), f"CPT block for {var!r} must be an object")
        _require("parent_order" in block and "rows" in block,
                 f"CPT block for {var!r} needs 'parent_order' and 'rows'")
        rows = np.asarray(block["rows"], dtype=float)
        if rows.ndim != 2:
            raise ValidationError(f"CPT rows for {var!r} must be a 2-D array")
        sums = rows.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > PARSE_ROW_SUM_ATOL)[0]
        if bad.size:
            raise ValidationError(
                f"CPT {var!r} row {int(bad[0])} sums to {sums[bad[0]]!r}"
            )
        counts = None
        if "counts" in block:
            counts = np.asarray(block["counts"], dtype=float)
        cpts[var] = Cpt(
            var, tuple(str(p) for p in block["parent_order"]), rows, counts
        )
        if cpts[var].parent_order != dag.parents_of(var):
            raise ValidationError(
                f"CPT parent order for {var!r} differs from parents map"
            )
    return BayesianNetwork(
        variables=tuple(variables), dag=dag, cpts=cpts, notes=notes
    )


def parse_network(text: str) -> BayesianNetwork:
    """Parse and fully re-validate a network document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e}") from None
    return document_to_network(doc)


def load_network(path) -> BayesianNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read())


def save_network(net: BayesianNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_network(net))


# ---------------------------------------------------------------------------
# datasets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dataset:
    """Fully observed categorical records, stored as state indices.

    ``codes[i, j]`` is the state index of record ``i`` for the j-th
    column; ``variables`` gives the column order.
    """

    variables: tuple[VariableSpec, ...]
    codes: np.ndarray  # (n_records, n_variables) int

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        codes = np.ascontiguousarray(self.codes, dtype=np.int32)
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @property
    def variable_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    @property
    def n_records(self) -> int:
        return int(self.codes.shape[0])

    def __len__(self) -> int:
        return self.n_records

    def column(self, var_id: str) -> np.ndarray:
        return self.codes[:, self.variable_ids.index(var_id)]

    def record(self, i: int) -> dict[str, str]:
        return {
            v.id: v.states[self.codes[i, j]] for j, v in enumerate(self.variables)
        }

    def subset(self, indices) -> "Dataset":
        return Dataset(self.variables, self.codes[np.asarray(indices)])

    def to_csv(self) -> str:
        lines = [",".join(self.variable_ids)]
        for i in range(self.n_records):
            lines.append(
                ",".join(
                    v.states[self.codes[i, j]]
                    for j, v in enumerate(self.variables)
                )
            )
        return "\n".join(lines) + "\n"


def parse_dataset(text: str, variables: Sequence[VariableSpec]) -> Dataset:
    """Parse CSV against declared variables.

    The header must name every declared variable exactly once (any
    order).  Rows are indexed from 0 in error messages.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise HeaderError("empty input, no header row")
    header = [c.strip() for c in lines[0].split(",")]
    by_id = {v.id: v for v in variables}
    if len(set(header)) != len(header):
        raise HeaderError("duplicate column in header")
    if set(header) != set(by_id):
        raise HeaderError(
            f"header {header} does not name the declared variables "
            f"{sorted(by_id)}"
        )
    columns = tuple(by_id[h] for h in header)
    index = [{s: k for k, s in enumerate(v.states)} for v in columns]

    n_cols = len(header)
    codes = np.empty((len(lines) - 1, n_cols), dtype=np.int32)
    for i, line in enumerate(lines[1:]):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) > n_cols:
            raise SchemaError(f"row {i}: {len(cells)} cells for {n_cols} columns")
        for j in range(n_cols):
            cell = cells[j] if j < len(cells) else ""
            if cell == "":
                raise MissingValueError(i, header[j])
            try:
                codes[i, j] = index[j][cell]
            except KeyError:
                raise UnknownStateError(i, header[j], cell) from None
    return Dataset(columns, codes)


def variables_from_csv(text: str) -> list[VariableSpec]:
    """Infer variable specs from a CSV alone; states are the sorted
    distinct values seen per column.  Used when no declaration exists."""
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise HeaderError("empty input, no header row")
    header = [c.strip() for c in lines[0].split(",")]
    if len(set(header)) != len(header):
        raise HeaderError("duplicate column in header")
    seen: list[set[str]] = [set() for _ in header]
    for i, line in enumerate(lines[1:]):
        cells = [c.strip() for c in line.split(",")]
        for j in range(len(header)):
            cell = cells[j] if j < len(cells) else ""
            if cell == "":
                raise MissingValueError(i, header[j])
            seen[j].add(cell)
    return [
        VariableSpec(h, h, tuple(sorted(states)))
        for h, states in zip(header, seen)
    ]
