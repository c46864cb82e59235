"""Defect reports, witnesses and their JSON encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = ["Witness", "DefectReport", "encode_vector", "decode_vector",
           "encode_scalar", "decode_scalar", "merge_reports"]


def encode_scalar(z):
    """Real scalars encode as numbers, complex ones as ``[re, im]``."""
    if np.iscomplexobj(z):
        z = complex(z)
        return [z.real, z.imag]
    return float(z)


def decode_scalar(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex scalar must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return float(v)


def encode_vector(x):
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return [[float(c.real), float(c.imag)] for c in x]
    return [float(c) for c in x]


def decode_vector(v) -> np.ndarray:
    if v and isinstance(v[0], (list, tuple)):
        return np.array([complex(float(a), float(b)) for a, b in v])
    return np.array([float(c) for c in v], dtype=np.float64)


@dataclass
class Witness:
    """A concrete point at which a defect was measured.

    ``formula`` names the defect (e.g. ``"homogeneity"``) so the value can
    be recomputed independently, see :func:`normprobe.diagnostics.recompute`.
    """

    formula: str
    x: np.ndarray
    y: Optional[np.ndarray]
    defect: float
    lam: Optional[complex] = None
    x2: Optional[np.ndarray] = None
    raw_defect: Optional[float] = None

    def to_dict(self):
        d = {"formula": self.formula, "x": encode_vector(self.x), "defect": self.defect}
        if self.y is not None:
            d["y"] = encode_vector(self.y)
        if self.lam is not None:
            d["lambda"] = encode_scalar(self.lam)
        if self.x2 is not None:
            d["x2"] = encode_vector(self.x2)
        if self.raw_defect is not None:
            d["raw_defect"] = self.raw_defect
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            formula=d["formula"],
            x=decode_vector(d["x"]),
            y=decode_vector(d["y"]) if "y" in d else None,
            defect=float(d["defect"]),
            lam=decode_scalar(d["lambda"]) if "lambda" in d else None,
            x2=decode_vector(d["x2"]) if "x2" in d else None,
            raw_defect=d.get("raw_defect"),
        )


@dataclass
class DefectReport:
    """Supremum of one defect over ``n_samples`` seeded evaluations.

    ``sup_defect`` is the normalized value used for thresholding and
    ``raw_sup`` the unnormalized one.  ``details`` holds probe-specific
    extras (sub-suprema, subset counts, ...).
    """

    probe_name: str
    sup_defect: float
    n_samples: int
    tolerance: float
    seed: int
    witness: Optional[Witness] = None
    raw_sup: Optional[float] = None
    details: dict = field(default_factory=dict)

    @property
    def exceeds(self) -> bool:
        return self.sup_defect > self.tolerance

    def to_dict(self):
        d = {
            "probe_name": self.probe_name,
            "sup_defect": self.sup_defect,
            "n_samples": self.n_samples,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }
        if self.raw_sup is not None:
            d["raw_sup"] = self.raw_sup
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        if self.details:
            d["details"] = self.details
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            probe_name=d["probe_name"],
            sup_defect=float(d["sup_defect"]),
            n_samples=int(d["n_samples"]),
            tolerance=float(d["tolerance"]),
            seed=int(d["seed"]),
            witness=Witness.from_dict(d["witness"]) if "witness" in d else None,
            raw_sup=d.get("raw_sup"),
            details=d.get("details", {}),
        )


def merge_reports(reports, probe_name=None) -> DefectReport:
    """Combine reports of the same probe (e.g. over several ``y``)."""
    reports = list(reports)
    best = reports[0]
    for r in reports[1:]:
        if r.sup_defect > best.sup_defect:
            best = r
    raws = [r.raw_sup for r in reports if r.raw_sup is not None]
    details = dict(best.details)
    for key in set().union(*(r.details for r in reports)):
        vals = [r.details[key] for r in reports
                if isinstance(r.details.get(key), (int, float))]
        if not vals:
            continue
        # counts add up, "min_*" keeps the minimum; witness-bound entries stay with best
        if key.startswith("n_"):
            details[key] = sum(vals)
        elif key.startswith("min_"):
            details[key] = min(vals)
        elif key not in ("p_value", "x_norm"):
            details[key] = max(vals)
    details["n_contexts"] = len(reports)
    return DefectReport(
        probe_name=probe_name or best.probe_name,
        sup_defect=best.sup_defect,
        n_samples=sum(r.n_samples for r in reports),
        tolerance=best.tolerance,
        seed=best.seed,
        witness=best.witness,
        raw_sup=max(raws) if raws else None,
        details=details,
    )
