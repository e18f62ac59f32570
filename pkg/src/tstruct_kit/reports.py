"""Deterministic JSON reports for command runs.

Reports are plain dictionaries rendered with sorted keys, so two runs
with the same configuration and inputs produce byte-identical output.
Timings are deterministic work counters (memberships tested, tower
stages, subsets scanned), never wall-clock readings, to keep that
guarantee.  Matrices are serialized row-major as strings of canonical
field representatives.
"""

import json
from fractions import Fraction
from importlib import metadata
from typing import Dict, List, Optional

import numpy as np

from .complexes import ChainMap, Complex
from .field import Field
from .modules import Module, ModuleMap
from .perfect import PerfectComplex, PerfectMap

try:
    TOOL_VERSION = metadata.version("tstruct-kit")
except metadata.PackageNotFoundError:
    TOOL_VERSION = "0.1.0"

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

_SEVERITY = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}
_EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
USAGE_EXIT = 3


def combine_verdicts(verdicts: List[str]) -> str:
    """Overall verdict: FAIL beats INCONCLUSIVE beats PASS."""
    worst = PASS
    for v in verdicts:
        if _SEVERITY[v] > _SEVERITY[worst]:
            worst = v
    return worst


def field_label(field: Field) -> str:
    """Canonical field name: 'Q' or 'p=<prime>'."""
    if field.characteristic == 0:
        return "Q"
    return "p=%d" % field.characteristic


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    return repr(value)


def matrix_rows(field: Field, mat: np.ndarray) -> List[str]:
    """Row-major serialization: one string of entries per row."""
    return [" ".join(field.entry_str(x) for x in row) for row in mat]


def module_json(m: Module) -> Dict:
    """Dimensions and arrow action matrices of a module."""
    out = {"dims": list(m.dims)}
    action = {}
    for i, arrow in enumerate(m.algebra.quiver.arrows):
        action[arrow.name] = matrix_rows(m.algebra.field, m.action[i])
    out["action"] = action
    return out


def module_map_json(fm: ModuleMap) -> Dict:
    """Per-vertex blocks of a module map."""
    q = fm.source.algebra.quiver
    f = fm.source.algebra.field
    return {"blocks": {q.vertices[v]: matrix_rows(f, fm.blocks[v]) for v in range(q.num_vertices)}}


def complex_json(cx: Complex) -> Dict:
    """Entries and differential blocks of a module complex."""
    out = {"entries": {}, "diffs": {}}
    for i in cx.support():
        out["entries"][str(i)] = module_json(cx.entries[i])
    for i, d in cx.diffs.items():
        out["diffs"][str(i)] = module_map_json(d)
    return out


def chain_map_json(fm: ChainMap) -> Dict:
    """Degreewise components of a chain map."""
    return {"components": {str(i): module_map_json(c) for i, c in fm.comps.items()}}


def _amat_json(alg, mat) -> List[List[str]]:
    f = alg.field
    return [[" ".join(f.entry_str(v) for v in cell[0]) for cell in row] for row in mat]


def perfect_json(x: PerfectComplex) -> Dict:
    """Entries and differentials of a perfect complex.

    Differential cells are coordinate rows over the algebra's path
    basis, listed in the report's algebra echo.
    """
    out = {"entries": {}, "diffs": {}}
    for i in x.support():
        out["entries"][str(i)] = list(x.entries[i])
    for i, d in x.diffs.items():
        out["diffs"][str(i)] = _amat_json(x.algebra, d)
    return out


def perfect_map_json(fm: PerfectMap) -> Dict:
    """Degreewise coordinate matrices of a perfect chain map."""
    return {"components": {str(i): _amat_json(fm.source.algebra, m) for i, m in fm.mats.items()}}


def algebra_json(alg) -> Dict:
    """Quiver, relations count and path basis of an algebra."""
    q = alg.quiver
    return {
        "vertices": list(q.vertices),
        "arrows": [[a.name, a.source, a.target] for a in q.arrows],
        "relations": len(alg.relations),
        "dimension": alg.dim,
        "basis": [q.path_name(p) for p in alg.basis],
    }


def truncation_json(result) -> Dict:
    """Triangle, certificates and tower transcript of a truncation."""

    def obj(x):
        if x is None:
            return None
        if isinstance(x, PerfectComplex):
            return perfect_json(x)
        return complex_json(x)

    def arr(fm):
        if fm is None:
            return None
        if isinstance(fm, PerfectMap):
            return perfect_map_json(fm)
        return chain_map_json(fm)

    out = {
        "status": repr(result.status),
        "x": obj(result.x),
        "x_map": arr(result.x_map),
        "y": obj(result.y),
        "y_map": arr(result.y_map),
        "connecting": arr(result.connecting),
        "certificates": _jsonable(result.certificates),
    }
    if result.tower is not None:
        out["tower"] = _jsonable(result.tower)
    if result.model is not None:
        out["model"] = perfect_json(result.model)
    return out


class Report:
    """Accumulating command report with a canonical JSON rendering.

    Args:
        command: Subcommand name.
        config: Echo of the run configuration (already JSON-safe).
    """

    def __init__(self, command: str, config: Dict):
        self.command = command
        self.config = dict(config)
        self.checks: List[Dict] = []

    def add(self, check_id: str, verdict: str, evidence: Dict, work: Optional[Dict] = None) -> Dict:
        """Append one check record and return it."""
        if verdict not in _SEVERITY:
            raise ValueError("unknown verdict %r" % verdict)
        record = {
            "id": check_id,
            "verdict": verdict,
            "evidence": _jsonable(evidence),
            "timings": _jsonable(work or {}),
        }
        self.checks.append(record)
        return record

    def overall(self) -> str:
        return combine_verdicts([c["verdict"] for c in self.checks])

    def exit_code(self) -> int:
        return _EXIT[self.overall()]

    def to_dict(self) -> Dict:
        return {
            "tool": "tstruct-kit",
            "version": TOOL_VERSION,
            "command": self.command,
            "config": _jsonable(self.config),
            "checks": self.checks,
            "verdict": self.overall(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_json())
