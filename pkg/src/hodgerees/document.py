"""JSON documents describing a mixed Hodge structure.

A document looks like::

    {
      "field": "gaussian_rational",
      "dim": 2,
      "weight_filtration": [
        {"weight": 0, "basis": [["1", "0"]]},
        {"weight": 2, "basis": [["1", "0"], ["0", "1"]]}
      ],
      "hodge_filtration": [
        {"level": 1, "basis": [["i", "1"]]}
      ]
    }

Exact entries are strings such as ``"1/3"`` or ``"1/2-3/4 i"``.  With
``"field": "complex_f64"`` entries are ``[re, im]`` pairs and an optional
``"tolerance"`` sets the rank tolerance.  Weight steps not listed take the
value of the nearest listed weight below (zero below all of them, the whole
space above all of them).  Hodge steps work the same way in the decreasing
direction: full below the lowest listed level, zero above the highest.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .linalg import EXACT, Backend, GaussianRational, Subspace, floating
from .mhs import MixedHodgeStructure

FIELDS = ("gaussian_rational", "complex_f64")


class ParseError(ValueError):
    """Malformed document; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _scalar(value: Any, exact: bool, path: str):
    if exact:
        if isinstance(value, bool) or not isinstance(value, (str, int)):
            raise ParseError(path, "exact entries must be strings like \"1/2+3 i\"")
        try:
            return GaussianRational.coerce(value)
        except ValueError as exc:
            raise ParseError(path, str(exc)) from None
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise ParseError(path, "float entries must be [re, im] pairs")
    z = complex(value[0], value[1])
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError(path, "entry is not finite")
    return z


def _is_real(x, backend: Backend) -> bool:
    if backend.exact:
        return x.is_real()
    return abs(x.imag) <= backend.tol * max(1.0, abs(x))


def _steps(doc: dict, key: str, index_key: str, n: int, backend: Backend,
           real: bool) -> dict[int, Subspace]:
    raw = doc.get(key)
    if not isinstance(raw, list):
        raise ParseError(key, "expected a list of steps")
    out = {}
    for k, step in enumerate(raw):
        here = f"{key}[{k}]"
        if not isinstance(step, dict):
            raise ParseError(here, "expected an object")
        level = step.get(index_key)
        if isinstance(level, bool) or not isinstance(level, int):
            raise ParseError(f"{here}.{index_key}", "expected an integer")
        if level in out:
            raise ParseError(f"{here}.{index_key}", f"duplicate {index_key} {level}")
        rows = step.get("basis")
        if not isinstance(rows, list):
            raise ParseError(f"{here}.basis", "expected a list of rows")
        vectors = []
        for i, row in enumerate(rows):
            rpath = f"{here}.basis[{i}]"
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(rpath, f"expected a row of length {n}")
            vec = [_scalar(x, backend.exact, f"{rpath}[{j}]") for j, x in enumerate(row)]
            if real and not all(_is_real(x, backend) for x in vec):
                raise ParseError(rpath, "weight filtration not real")
            vectors.append(vec)
        out[level] = Subspace.span(vectors, n, backend)
    return out


def mhs_from_document(doc: Any) -> MixedHodgeStructure:
    """Build (but do not validate) the structure described by ``doc``."""
    if not isinstance(doc, dict):
        raise ParseError("", "document must be a JSON object")
    field = doc.get("field")
    if field not in FIELDS:
        raise ParseError("field", f"expected one of {', '.join(FIELDS)}")
    n = doc.get("dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError("dim", "expected a nonnegative integer")
    if field == "gaussian_rational":
        if "tolerance" in doc:
            raise ParseError("tolerance", "only meaningful for complex_f64")
        backend = EXACT
    else:
        tol = doc.get("tolerance")
        if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0):
            raise ParseError("tolerance", "expected a positive number")
        backend = floating(tol)
    weight = _steps(doc, "weight_filtration", "weight", n, backend, real=True)
    hodge = _steps(doc, "hodge_filtration", "level", n, backend, real=False)
    try:
        return MixedHodgeStructure(n, weight, hodge, backend)
    except ValueError as exc:
        raise ParseError("", str(exc)) from None


def parse_mhs(text: str) -> MixedHodgeStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", exc.msg) from None
    return mhs_from_document(doc)


def parse_mhs_file(path: str | Path) -> MixedHodgeStructure:
    """Read, build and validate; invalid structures raise :class:`InvalidStructure`."""
    h = parse_mhs(Path(path).read_text())
    h.require_valid()
    return h


def _dump_scalar(x, exact: bool):
    if exact:
        return str(x).replace(" ", "")
    return [x.real, x.imag]


def mhs_to_document(h: MixedHodgeStructure) -> dict:
    exact = h.backend.exact
    doc: dict = {"field": "gaussian_rational" if exact else "complex_f64", "dim": h.ambient_dim}
    if not exact:
        doc["tolerance"] = h.backend.tol

    def rows(s: Subspace):
        return [[_dump_scalar(x, exact) for x in r] for r in s.basis.entries]

    # only the levels where the dimension jumps; the rest are implied
    weights = []
    for m in h.weights():
        s = h.weight_step(m)
        if s.dim > h.weight_step(m - 1).dim:
            weights.append({"weight": m, "basis": rows(s)})
    hodge = []
    for p in h.F.levels():
        s = h.F[p]
        if p in (h.F.lowest, h.F.highest) or s.dim < h.F[p - 1].dim:
            hodge.append({"level": p, "basis": rows(s)})
    doc["weight_filtration"] = weights
    doc["hodge_filtration"] = hodge
    return doc


def dump_mhs(h: MixedHodgeStructure) -> str:
    """Indented JSON with one basis row per line."""
    doc = mhs_to_document(h)
    lines = ["{"]
    for key in ("field", "dim", "tolerance"):
        if key in doc:
            lines.append(f"  {json.dumps(key)}: {json.dumps(doc[key])},")
    for key, index_key in (("weight_filtration", "weight"), ("hodge_filtration", "level")):
        lines.append(f"  {json.dumps(key)}: [")
        steps = doc[key]
        for k, step in enumerate(steps):
            rows = ",\n".join("      " + json.dumps(r) for r in step["basis"])
            body = f"\n{rows}\n    ]" if rows else "]"
            comma = "," if k + 1 < len(steps) else ""
            lines.append(f'    {{"{index_key}": {step[index_key]}, "basis": [{body}}}{comma}')
        lines.append("  ]," if key == "weight_filtration" else "  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "FIELDS",
    "ParseError",
    "mhs_from_document",
    "parse_mhs",
    "parse_mhs_file",
    "mhs_to_document",
    "dump_mhs",
]
