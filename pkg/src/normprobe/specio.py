"""JSON encoding of :class:`NormSpec` and the bundled spec files.

Format::

    {"dim": 2, "field": "real",
     "kind": {"type": "lp", "p": 1}}

Kinds: ``lp`` (``p``, a number or ``"inf"``), ``weighted_lp`` (``p``,
``weights``), ``quadratic`` (``gram``, row-major; complex entries as
``[re, im]``) and ``combination`` (``mode``: ``"sum"``/``"max"``,
``terms``: list of ``{"coefficient": c, "norm": {...}}``).  A nested norm
may omit ``dim`` and ``field``; they are inherited from the parent.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .norms import (Combination, Lp, NormSpec, Quadratic, ScalarField, SpecError,
                    Term, WeightedLp)

__all__ = ["spec_from_dict", "spec_to_dict", "load_spec", "dump_spec",
           "bundled_spec_names", "bundled_spec", "bundled_spec_path"]


def _p_from_json(v, where):
    if v is None:
        raise SpecError(f"{where}.p is required")
    if isinstance(v, str):
        if v.lower() in ("inf", "infinity"):
            return math.inf
        raise SpecError(f"{where}.p must be a number or \"inf\", got {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"{where}.p must be a number or \"inf\", got {v!r}")
    if v < 1:
        raise SpecError("p must be ≥ 1")
    return float(v)


def _p_to_json(p):
    return "inf" if math.isinf(p) else p


def _matrix(rows, where):
    if not isinstance(rows, list) or not rows:
        raise SpecError(f"{where} must be a nonempty nested array")
    out = []
    complex_ = False
    for r in rows:
        if not isinstance(r, list):
            raise SpecError(f"{where} must be a nested array (row-major)")
        row = []
        for v in r:
            if isinstance(v, list):
                if len(v) != 2:
                    raise SpecError(f"{where}: complex entries must be [re, im]")
                row.append(complex(float(v[0]), float(v[1])))
                complex_ = True
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                row.append(float(v))
            else:
                raise SpecError(f"{where}: non-numeric entry {v!r}")
        out.append(row)
    try:
        return np.array(out, dtype=np.complex128 if complex_ else np.float64)
    except ValueError:
        raise SpecError(f"{where} rows have unequal lengths") from None


def spec_from_dict(d, parent=None, where="spec") -> NormSpec:
    if not isinstance(d, dict):
        raise SpecError(f"{where} must be a JSON object")
    dim = d.get("dim", parent.dim if parent else None)
    field = d.get("field", parent.field.value if parent else None)
    if dim is None:
        raise SpecError(f"{where}.dim is required")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SpecError(f"{where}.dim must be a positive integer, got {dim!r}")
    if field is None:
        field = "real"
    field = ScalarField.parse(field)
    kind = d.get("kind")
    if not isinstance(kind, dict):
        raise SpecError(f"{where}.kind must be an object")
    ktype = kind.get("type")
    kw = f"{where}.kind"
    if ktype == "lp":
        k = Lp(_p_from_json(kind.get("p"), kw))
    elif ktype == "weighted_lp":
        w = kind.get("weights")
        if not isinstance(w, list) or len(w) != dim:
            raise SpecError(f"{kw}.weights must be a list of {dim} numbers")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0 for v in w):
            raise SpecError(f"{kw}.weights must all be > 0")
        k = WeightedLp(_p_from_json(kind.get("p"), kw), np.array(w, dtype=float))
    elif ktype == "quadratic":
        g = _matrix(kind.get("gram"), f"{kw}.gram")
        if g.shape != (dim, dim):
            raise SpecError(f"{kw}.gram must be {dim}x{dim}, got {g.shape[0]}x{g.shape[1]}")
        try:
            k = Quadratic(g)
        except SpecError as e:
            raise SpecError(f"{kw}.gram: {e}") from None
    elif ktype == "combination":
        terms = kind.get("terms")
        if not isinstance(terms, list) or not terms:
            raise SpecError(f"{kw}.terms must be a nonempty list")
        proto = NormSpec(dim, field, Lp(2))
        parsed = []
        for i, t in enumerate(terms):
            tw = f"{kw}.terms[{i}]"
            if not isinstance(t, dict) or "norm" not in t:
                raise SpecError(f"{tw} must be an object with 'coefficient' and 'norm'")
            c = t.get("coefficient", 1.0)
            if isinstance(c, bool) or not isinstance(c, (int, float)) or c <= 0:
                raise SpecError(f"{tw}.coefficient must be > 0")
            parsed.append(Term(c, spec_from_dict(t["norm"], proto, f"{tw}.norm")))
        k = Combination(tuple(parsed), kind.get("mode", "sum"))
    else:
        raise SpecError(f"{kw}.type must be one of lp, weighted_lp, quadratic, combination;"
                        f" got {ktype!r}")
    return NormSpec(dim, field, k)


def spec_to_dict(spec: NormSpec) -> dict:
    k = spec.kind
    if isinstance(k, Lp):
        kind = {"type": "lp", "p": _p_to_json(k.p)}
    elif isinstance(k, WeightedLp):
        kind = {"type": "weighted_lp", "p": _p_to_json(k.p), "weights": k.weights.tolist()}
    elif isinstance(k, Quadratic):
        g = k.gram
        if np.iscomplexobj(g):
            rows = [[[v.real, v.imag] for v in r] for r in g.tolist()]
        else:
            rows = g.tolist()
        kind = {"type": "quadratic", "gram": rows}
    else:
        kind = {"type": "combination", "mode": k.mode,
                "terms": [{"coefficient": t.coefficient, "norm": spec_to_dict(t.norm)}
                          for t in k.terms]}
    return {"dim": spec.dim, "field": spec.field.value, "kind": kind}


def load_spec(path) -> NormSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SpecError(f"cannot read spec file {path}: {e.strerror or e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}: invalid JSON ({e})") from None
    return spec_from_dict(data)


def dump_spec(spec: NormSpec, path):
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")


def _spec_dir():
    return resources.files("normprobe") / "specs"


def bundled_spec_names():
    return sorted(p.name[:-5] for p in _spec_dir().iterdir() if p.name.endswith(".json"))


def bundled_spec_path(name: str) -> Path:
    p = _spec_dir() / f"{name}.json"
    if not p.is_file():
        raise SpecError(f"no bundled spec named {name!r}")
    return Path(str(p))


def bundled_spec(name: str) -> NormSpec:
    return load_spec(bundled_spec_path(name))
