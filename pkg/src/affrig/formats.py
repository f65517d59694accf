"""JSON document formats for structures, frameworks, scan sets, and reports.

All documents are versioned JSON objects with a ``type`` tag. Floating-point
values round-trip exactly: serialization uses Python's shortest-repr float
formatting, which preserves every bit of an IEEE double. Schemas are closed —
unknown fields are rejected, with the offending JSON path in the error.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile

import numpy as np

from .errors import AffrigError
from .hypergraph import Graph, Hypergraph
from .registration import Scan, ScanSet

FORMAT_VERSION = 1

STRUCTURE_TYPES = ("graph", "hypergraph")

_SCHEMAS = {
    "graph": {"version", "type", "vertex_count", "edges"},
    "hypergraph": {"version", "type", "vertex_count", "hyperedges"},
    "framework": {"version", "type", "dim", "coordinates"},
    "scanset": {"version", "type", "dim", "trust", "scans"},
    "report": {
        "version",
        "type",
        "command",
        "parameters",
        "verdict",
        "corank",
        "one_sided",
        "certificate",
        "residuals",
        "error",
        "gauge",
        "counts",
        "timings",
        "timestamp",
    },
}
_SCAN_KEYS = {"hyperedge", "coordinates"}


class FormatError(AffrigError):
    """A document failed to parse or validate."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = ""
        if path is not None:
            where = f" at {path}"
        elif line is not None:
            where = f" at line {line} column {column}"
        super().__init__(f"bad document{where}: {message}")


def parse_document(text: str) -> dict:
    """Parse JSON text into a validated document object."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as error:
        raise FormatError(error.msg, line=error.lineno, column=error.colno) from None
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object", path="$")
    kind = doc.get("type")
    if kind not in _SCHEMAS:
        raise FormatError(f"unknown document type {kind!r}", path="$.type")
    unknown = sorted(set(doc) - _SCHEMAS[kind])
    if unknown:
        raise FormatError(f"unexpected field {unknown[0]!r}", path=f"$.{unknown[0]}")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise FormatError(
            f"unsupported version {version!r} (expected {FORMAT_VERSION})",
            path="$.version",
        )
    if kind == "scanset":
        scans = doc.get("scans")
        if not isinstance(scans, list):
            raise FormatError("scans must be a list", path="$.scans")
        for index, scan in enumerate(scans):
            if not isinstance(scan, dict):
                raise FormatError("scan must be an object", path=f"$.scans[{index}]")
            extra = sorted(set(scan) - _SCAN_KEYS)
            if extra:
                raise FormatError(
                    f"unexpected field {extra[0]!r}",
                    path=f"$.scans[{index}].{extra[0]}",
                )
            missing = sorted(_SCAN_KEYS - set(scan))
            if missing:
                raise FormatError(
                    f"missing field {missing[0]!r}", path=f"$.scans[{index}]"
                )
    return doc


def serialize(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def load_document(path: str) -> dict:
    return parse_document(read_text(path))


def write_document(doc: dict, path: str) -> None:
    """Serialize to ``path`` ("-" for stdout) via write-to-temp and rename."""
    text = serialize(doc)
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    descriptor, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except BaseException:
        os.unlink(temp_path)
        raise


def _int_field(doc: dict, field: str):
    value = doc.get(field)
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{field} must be an integer", path=f"$.{field}")
    return value


def _point_list(rows, path: str, dim: int) -> np.ndarray:
    points = []
    for index, row in enumerate(rows):
        if (
            not isinstance(row, list)
            or len(row) != dim
            or not all(isinstance(x, (int, float)) for x in row)
        ):
            raise FormatError(
                f"expected a point with {dim} coordinates", path=f"{path}[{index}]"
            )
        points.append([float(x) for x in row])
    return np.array(points) if points else np.zeros((0, dim))


def structure_from_document(doc: dict) -> Graph | Hypergraph:
    kind = doc["type"]
    if kind == "graph":
        edges = doc.get("edges")
        if not isinstance(edges, list):
            raise FormatError("edges must be a list", path="$.edges")
        for index, edge in enumerate(edges):
            if not isinstance(edge, list) or len(edge) != 2:
                raise FormatError(
                    "edge must be a pair of vertices", path=f"$.edges[{index}]"
                )
        return Graph.from_edges(_int_field(doc, "vertex_count"), map(tuple, edges))
    if kind == "hypergraph":
        hyperedges = doc.get("hyperedges")
        if not isinstance(hyperedges, list):
            raise FormatError("hyperedges must be a list", path="$.hyperedges")
        for index, h in enumerate(hyperedges):
            if not isinstance(h, list):
                raise FormatError(
                    "hyperedge must be a vertex list", path=f"$.hyperedges[{index}]"
                )
        return Hypergraph.from_hyperedges(_int_field(doc, "vertex_count"), hyperedges)
    raise FormatError(f"expected a structure document, got {kind!r}", path="$.type")


def coordinates_from_document(doc: dict) -> np.ndarray:
    if doc["type"] != "framework":
        raise FormatError(
            f"expected a framework document, got {doc['type']!r}", path="$.type"
        )
    dim = _int_field(doc, "dim")
    if dim < 1:
        raise FormatError("dim must be positive", path="$.dim")
    rows = doc.get("coordinates")
    if not isinstance(rows, list):
        raise FormatError("coordinates must be a list", path="$.coordinates")
    return _point_list(rows, "$.coordinates", dim)


def scan_set_from_document(doc: dict) -> ScanSet:
    """Build a scan set; vertex_count is inferred from the largest label."""
    if doc["type"] != "scanset":
        raise FormatError(
            f"expected a scanset document, got {doc['type']!r}", path="$.type"
        )
    dim = _int_field(doc, "dim")
    if dim < 1:
        raise FormatError("dim must be positive", path="$.dim")
    trust = doc.get("trust")
    if trust not in ("affine", "euclidean"):
        raise FormatError(f"unknown trust class {trust!r}", path="$.trust")
    scans = []
    top = -1
    for index, entry in enumerate(doc["scans"]):
        members = entry["hyperedge"]
        path = f"$.scans[{index}]"
        if not isinstance(members, list) or not all(
            isinstance(u, int) and not isinstance(u, bool) and u >= 0 for u in members
        ):
            raise FormatError(
                "hyperedge must be a list of vertex labels", path=f"{path}.hyperedge"
            )
        coords = entry["coordinates"]
        if not isinstance(coords, list):
            raise FormatError(
                "coordinates must be a list", path=f"{path}.coordinates"
            )
        points = _point_list(coords, f"{path}.coordinates", dim)
        if points.shape[0] != len(members):
            raise FormatError(
                f"{len(members)} members but {points.shape[0]} points", path=path
            )
        top = max(top, max(members, default=-1))
        scans.append(Scan(tuple(members), points))
    return ScanSet(top + 1, tuple(scans), trust)


def document_from_structure(structure: Graph | Hypergraph) -> dict:
    if isinstance(structure, Graph):
        return {
            "version": FORMAT_VERSION,
            "type": "graph",
            "vertex_count": structure.vertex_count,
            "edges": [list(edge) for edge in structure.sorted_edges()],
        }
    return {
        "version": FORMAT_VERSION,
        "type": "hypergraph",
        "vertex_count": structure.vertex_count,
        "hyperedges": [list(h) for h in structure.sorted_hyperedges()],
    }


def document_from_coordinates(coordinates: np.ndarray) -> dict:
    coordinates = np.asarray(coordinates, dtype=float)
    return {
        "version": FORMAT_VERSION,
        "type": "framework",
        "dim": int(coordinates.shape[1]),
        "coordinates": [[float(x) for x in row] for row in coordinates],
    }


def document_from_scan_set(scan_set: ScanSet) -> dict:
    return {
        "version": FORMAT_VERSION,
        "type": "scanset",
        "dim": scan_set.dim,
        "trust": scan_set.trust,
        "scans": [
            {
                "hyperedge": list(scan.members),
                "coordinates": [[float(x) for x in row] for row in scan.coordinates],
            }
            for scan in scan_set.scans
        ],
    }


def report_document(command: str, **fields) -> dict:
    doc = {"version": FORMAT_VERSION, "type": "report", "command": command}
    doc.update(fields)
    unknown = sorted(set(doc) - _SCHEMAS["report"])
    if unknown:
        raise FormatError(f"unexpected field {unknown[0]!r}", path=f"$.{unknown[0]}")
    return doc
