"""Field file serialization (JSON) and grid export (CSV).

A field file is a JSON object with `signature` [p, q], `kappa` (one value
per coordinate), `split`, and a nonempty `blades` map keyed by blade label.
Analytic files map labels to expression strings (see field_expr) and may
carry a `spread` hint; sampled files instead carry a `grid` object
{L, panels, order} and map labels to nested value arrays of the grid's
shape.  Floats are emitted via Python's shortest-repr (<= 17 significant
digits), so save/load round-trips every value bit-exactly.

CSV is the plotting boundary: one row per node, coordinates first, then
one column per blade (declared blades for analytic fields, blades with any
nonzero sample otherwise).
"""

from __future__ import annotations

import json

import numpy as np

from .cdt_engine import AnalyticField, SampledField, _coords
from .clifford_core import BladeSyntaxError, Signature, blade_label, parse_blade
from .dunkl_rank1 import MultiplicitySplit
from .field_expr import compile_expr
from .quadrature import build_grid

__all__ = ["SchemaError", "load_field", "save_field", "save_grid_csv"]


class SchemaError(ValueError):
    """Field file violates the schema; `path` names the offending entry."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _require(doc: dict, key: str, kind, path: str):
    if key not in doc:
        raise SchemaError(f"{path}{key}", "missing")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{path}{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _parse_header(doc: dict):
    sig_pair = _require(doc, "signature", list, "")
    if len(sig_pair) != 2 or not all(isinstance(v, int) and v >= 0 for v in sig_pair):
        raise SchemaError("signature", "expected [p, q] with nonnegative integers")
    sig = Signature(*sig_pair)
    kappa = _require(doc, "kappa", list, "")
    if len(kappa) != sig.d or not all(isinstance(v, (int, float)) for v in kappa):
        raise SchemaError("kappa", f"expected {sig.d} numbers")
    split = _require(doc, "split", int, "")
    if not 0 <= split <= sig.d:
        raise SchemaError("split", f"expected 0..{sig.d}")
    try:
        ms = MultiplicitySplit(kappa=tuple(float(k) for k in kappa), split=split)
    except ValueError as e:
        raise SchemaError("kappa", str(e)) from e
    return sig, ms


def _parse_labels(blades: dict, sig: Signature):
    if not blades:
        raise SchemaError("blades", "at least one blade is required")
    masks = {}
    for label in blades:
        try:
            masks[label] = parse_blade(label, sig.d)
        except BladeSyntaxError as e:
            raise SchemaError(f"blades.{label}", str(e)) from e
    return masks


def load_field(path):
    """AnalyticField or SampledField, decided by the presence of `grid`."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    sig, ms = _parse_header(doc)
    blades = _require(doc, "blades", dict, "")
    masks = _parse_labels(blades, sig)

    if "grid" not in doc:
        bodies = {}
        for label, text in blades.items():
            if not isinstance(text, str):
                raise SchemaError(f"blades.{label}", "analytic blades must be expression strings")
            try:
                bodies[masks[label]] = compile_expr(text, sig.d)
            except ValueError as e:
                raise SchemaError(f"blades.{label}", str(e)) from e
        spread = doc.get("spread", 1.0)
        if not isinstance(spread, (int, float)) or not spread > 0:
            raise SchemaError("spread", "expected a positive number")
        return AnalyticField(sig, ms, bodies, spread=float(spread))

    grid_doc = _require(doc, "grid", dict, "")
    Ls = _require(grid_doc, "L", list, "grid.")
    if len(Ls) != sig.d or not all(isinstance(v, (int, float)) and v > 0 for v in Ls):
        raise SchemaError("grid.L", f"expected {sig.d} positive numbers")
    panels = _require(grid_doc, "panels", int, "grid.")
    order = _require(grid_doc, "order", int, "grid.")
    try:
        grid = build_grid(ms, [float(L) for L in Ls], panels=panels, order=order)
    except ValueError as e:
        raise SchemaError("grid", str(e)) from e
    values = np.zeros((*grid.shape, sig.n_blades))
    for label, samples in blades.items():
        if isinstance(samples, str):
            raise SchemaError(f"blades.{label}", "sampled files cannot mix in expression strings")
        arr = np.asarray(samples, dtype=float)
        if arr.shape != grid.shape:
            raise SchemaError(f"blades.{label}", f"expected shape {grid.shape}, got {arr.shape}")
        values[..., masks[label]] = arr
    return SampledField(sig, ms, grid, values)


def save_field(field, path):
    if not isinstance(field, (AnalyticField, SampledField)):
        raise TypeError(f"not a field: {field!r}")
    doc = {
        "signature": [field.sig.p, field.sig.q],
        "kappa": list(field.ms.kappa),
        "split": field.ms.split,
    }
    if isinstance(field, AnalyticField):
        blades = {}
        for mask, body in sorted(field.blades.items()):
            text = getattr(body, "expr_text", None)
            if text is None:
                raise ValueError(
                    f"blade {blade_label(mask)} has an opaque callable; "
                    "only expression-backed analytic fields serialize"
                )
            blades[blade_label(mask)] = text
        doc["spread"] = field.spread
        doc["blades"] = blades
    else:
        axes = field.grid.axes
        if any(ax.panels != axes[0].panels or ax.order != axes[0].order for ax in axes):
            raise ValueError("sampled grids must share panels/order across axes")
        doc["grid"] = {
            "L": [ax.L for ax in axes],
            "panels": axes[0].panels,
            "order": axes[0].order,
        }
        nonzero = [m for m in range(field.sig.n_blades) if np.any(field.values[..., m])]
        if not nonzero:
            nonzero = [0]
        doc["blades"] = {blade_label(m): field.values[..., m].tolist() for m in nonzero}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def save_grid_csv(field, path, grid=None):
    """One row per node: coordinates, then one column per blade."""
    if isinstance(field, AnalyticField):
        if grid is None:
            raise ValueError("analytic fields need an explicit grid for CSV export")
        values = field.sample(grid)
        blades = sorted(field.blades)
    elif isinstance(field, SampledField):
        if grid is not None and grid is not field.grid:
            raise ValueError("sampled fields export on their own grid")
        grid = field.grid
        values = field.values
        blades = [m for m in range(field.sig.n_blades) if np.any(values[..., m])] or [0]
    else:
        raise TypeError(f"not a field: {field!r}")
    coords = [c.ravel() for c in _coords(grid)]
    columns = [values[..., m].ravel() for m in blades]
    header = [f"x{j + 1}" for j in range(len(coords))] + [blade_label(m) for m in blades]
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*coords, *columns):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
