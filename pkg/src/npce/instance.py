"""Instance container and the JSON instance file format.

Matrices are stored row-major as flat arrays.  Floats are written with
Python's shortest round-trip representation, so ``load(save(x))``
reproduces every double exactly.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .economy import Economy, validate_economy
from .operators import AffineOperator, OperatorTriple
from .vi import Point


@dataclass(eq=False)
class Instance:
    eco: Economy
    ops: OperatorTriple
    planted: Optional[Point] = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.eco.n

    @property
    def m(self):
        return self.eco.m


class InstanceFormatError(ValueError):
    pass


def _flat(M):
    return [float(v) for v in np.asarray(M, dtype=float).ravel()]


def _op_dict(op):
    return {"matrix": _flat(op.matrix), "offset": _flat(op.offset)}


def instance_to_dict(inst: Instance) -> dict:
    doc = {
        "n": inst.n,
        "m": inst.m,
        "A": _flat(inst.eco.A),
        "B": _flat(inst.eco.B),
        "p": _op_dict(inst.ops.p),
        "c": _op_dict(inst.ops.c),
        "r": _op_dict(inst.ops.r),
    }
    if inst.planted is not None:
        doc["planted"] = inst.planted.as_dict()
    if inst.meta:
        doc["meta"] = inst.meta
    return doc


def _matrix(doc, key, rows, cols):
    vals = doc[key]
    if len(vals) != rows * cols:
        raise InstanceFormatError(f"{key!r} needs {rows * cols} entries, got {len(vals)}")
    return np.array(vals, dtype=float).reshape(rows, cols)


def _operator(doc, key, dim):
    sub = doc[key]
    offset = np.array(sub["offset"], dtype=float)
    if offset.shape != (dim,):
        raise InstanceFormatError(f"{key!r} offset needs {dim} entries")
    return AffineOperator(_matrix(sub, "matrix", dim, dim), offset)


def point_from_dict(doc) -> Point:
    try:
        return Point(doc["x"], doc["lambda"], doc["v"])
    except KeyError as exc:
        raise InstanceFormatError(f"point is missing key {exc}") from None


def instance_from_dict(doc: dict) -> Instance:
    try:
        n, m = int(doc["n"]), int(doc["m"])
        eco = validate_economy(_matrix(doc, "A", n, n), _matrix(doc, "B", m, n))
        ops = OperatorTriple(_operator(doc, "p", n), _operator(doc, "c", n),
                             _operator(doc, "r", m))
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"malformed instance: {exc!r}") from None
    planted = point_from_dict(doc["planted"]) if "planted" in doc else None
    return Instance(eco, ops, planted, dict(doc.get("meta", {})))


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")


def load_instance(path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from None
    return instance_from_dict(doc)
