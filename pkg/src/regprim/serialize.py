"""JSON documents for piecewise data, primitives, BV functions, multipliers and distributions.

Every document carries the piecewise fields (rationals as "p/q" strings).
Optional header keys select the wrapped type:

* ``space`` "Br" or "Bc" with ``order`` -> Distribution (``continuous`` is
  informational and re-checked); without ``order`` -> RegulatedPrimitive
* ``space`` "BV" or "NBV" with ``order`` -> Multiplier whose g is the
  stored function; without ``order`` -> BVFunction
* no header -> PiecewiseFn
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .distribution import Distribution
from .piecewise import PiecewiseFn
from .spaces import BVFunction, Continuity, Multiplier, RegulatedPrimitive, validate_Br


def to_document(obj) -> dict:
    if isinstance(obj, PiecewiseFn):
        return obj.to_dict()
    if isinstance(obj, RegulatedPrimitive):
        return {"space": obj.continuity.value, **obj.fn.to_dict()}
    if isinstance(obj, Distribution):
        return {
            "space": obj.primitive.continuity.value,
            "order": obj.order,
            "continuous": obj.is_continuous,
            **obj.F.to_dict(),
        }
    if isinstance(obj, BVFunction):
        doc = {"space": "BV" if obj.normalization is None else "NBV"}
        if obj.normalization is not None:
            doc["lambda"] = str(obj.normalization)
        return {**doc, **obj.fn.to_dict()}
    if isinstance(obj, Multiplier):
        return {"order": obj.order, **to_document(obj.g)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc: dict):
    fn = PiecewiseFn.from_dict(doc)
    space = doc.get("space")
    if space is None:
        return fn
    if space in ("Br", "Bc"):
        prim = validate_Br(fn)
        if space == "Bc" and prim.continuity is not Continuity.CONTINUOUS:
            raise ValueError("document claims a continuous primitive but it has jumps")
        if "order" in doc:
            dist = Distribution(int(doc["order"]), prim)
            if "continuous" in doc and bool(doc["continuous"]) != dist.is_continuous:
                raise ValueError("continuous flag disagrees with the primitive")
            return dist
        return prim
    if space in ("BV", "NBV"):
        lam = doc.get("lambda")
        g = BVFunction(fn, None if lam is None else Fraction(lam))
        if "order" in doc:
            return Multiplier(int(doc["order"]), g)
        return g
    raise ValueError(f"unknown space {space!r}")


def dumps(obj) -> str:
    return json.dumps(to_document(obj), sort_keys=True)


def loads(text: str):
    return from_document(json.loads(text))


def load(path) -> object:
    return loads(Path(path).read_text())


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")
