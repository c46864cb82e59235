"""Defect scans and the inner-product classifier.

For a norm coming from an inner product, ``p_y`` coincides with the norm
for every unit ``y``, is absolutely homogeneous, and the norm satisfies the
parallelogram law.  For any other norm all three fail somewhere.  The
scans below measure each failure and return a recomputable witness.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .axioms import norm_homogeneity_defect, triangle_defect
from .norms import NormSpec, _unchecked_norms, as_batch, as_vector, basis_vector
from .pfunc import (PContext, RayProfile, _p_values, default_schedule,
                    ray_profile, sandwich_violation)
from .reports import DefectReport, Witness, merge_reports
from .sampling import (SampleConfig, block_rng, draw_directions, draw_scalars,
                       draw_vectors, sample_unit_sphere, sup_scan)

__all__ = [
    "homogeneity_defect",
    "homogeneity_defect_at",
    "identity_defect",
    "identity_defect_at",
    "parallelogram_defect",
    "parallelogram_scan",
    "degenerate_zero_probe",
    "ScalingSummary",
    "scaling_tension_probe",
    "Outcome",
    "Verdict",
    "CoherenceError",
    "classify",
    "recompute",
    "unit_ys",
]

DEFAULT_THRESHOLD = 1e-6
DEFAULT_Y_DRAWS = 8
ZERO_TOL = 1e-8


class CoherenceError(RuntimeError):
    """Parallelogram and p_y-based defects disagree qualitatively."""


# -- pointwise defect formulas (batched) ------------------------------------

def _homogeneity(ctx, X, lam):
    p_lx = _p_values(ctx, lam[:, None] * X)
    scaled = np.abs(lam) * _p_values(ctx, X)
    raw = np.abs(p_lx - scaled)
    return raw / np.maximum(1.0, scaled), raw


def _identity(ctx, X):
    nx = _unchecked_norms(ctx.spec, X)
    raw = np.abs(_p_values(ctx, X) - nx)
    return raw / np.maximum(1.0, nx), raw


def _parallelogram(spec, X, Y):
    a = _unchecked_norms(spec, X + Y)
    b = _unchecked_norms(spec, X - Y)
    nx = _unchecked_norms(spec, X)
    ny = _unchecked_norms(spec, Y)
    two_sides = 2.0 * nx * nx + 2.0 * ny * ny
    raw = np.abs(a * a + b * b - two_sides)
    return raw / np.maximum(1.0, two_sides), raw


def homogeneity_defect_at(ctx: PContext, x, lam, normalized: bool = False) -> float:
    """``|p_y(lam x) - |lam| p_y(x)|``, optionally over ``max(1, |lam| p_y(x))``."""
    X = as_batch(ctx.spec, as_vector(ctx.spec, x))
    d, raw = _homogeneity(ctx, X, np.atleast_1d(np.asarray(lam, dtype=ctx.spec.dtype)))
    return float(d[0] if normalized else raw[0])


def identity_defect_at(ctx: PContext, x, normalized: bool = False) -> float:
    """``|p_y(x) - ||x|||``, optionally over ``max(1, ||x||)``."""
    d, raw = _identity(ctx, as_batch(ctx.spec, as_vector(ctx.spec, x)))
    return float(d[0] if normalized else raw[0])


def parallelogram_defect(spec: NormSpec, x, y, normalized: bool = False) -> float:
    """``| ||x+y||^2 + ||x-y||^2 - 2||x||^2 - 2||y||^2 |``.

    With ``normalized=True`` the value is divided by
    ``max(1, 2||x||^2 + 2||y||^2)``.
    """
    X = as_batch(spec, as_vector(spec, x))
    Y = as_batch(spec, as_vector(spec, y))
    d, raw = _parallelogram(spec, X, Y)
    return float(d[0] if normalized else raw[0])


# -- scans -------------------------------------------------------------------

def _report(name, res, cfg, tol, witness):
    return DefectReport(name, res.sup, cfg.n_samples, tol, cfg.seed,
                        witness=witness if res.sup > 0 else None,
                        raw_sup=res.raw_sup)


def homogeneity_defect(ctx: PContext, cfg: SampleConfig, tolerance: float = DEFAULT_THRESHOLD,
                       workers: int = 1, stream: str = "homogeneity") -> DefectReport:
    """sup of ``|p_y(lam x) - |lam| p_y(x)| / max(1, |lam| p_y(x))``."""
    cfg.check(ctx.spec)

    def evaluate(b, start, stop):
        rng = block_rng(cfg.seed, stream, b)
        X = draw_vectors(ctx.spec, cfg, rng, stop - start)
        lam = draw_scalars(cfg, rng, stop - start)
        d, raw = _homogeneity(ctx, X, lam)
        return {"defect": d, "raw": raw, "sample": {"x": X, "lam": lam, "raw": raw}}

    res = sup_scan(cfg.n_samples, evaluate, workers)
    w = Witness("homogeneity", res.sample["x"], ctx.y, res.sup, lam=res.sample["lam"],
                raw_defect=float(res.sample["raw"]))
    return _report("homogeneity", res, cfg, tolerance, w)


def identity_defect(ctx: PContext, cfg: SampleConfig, tolerance: float = DEFAULT_THRESHOLD,
                    workers: int = 1, stream: str = "identity") -> DefectReport:
    """sup of ``|p_y(x) - ||x||| / max(1, ||x||)``; ``raw_sup`` is the plain difference."""
    cfg.check(ctx.spec)

    def evaluate(b, start, stop):
        rng = block_rng(cfg.seed, stream, b)
        X = draw_vectors(ctx.spec, cfg, rng, stop - start)
        d, raw = _identity(ctx, X)
        return {"defect": d, "raw": raw, "sample": {"x": X, "raw": raw}}

    res = sup_scan(cfg.n_samples, evaluate, workers)
    w = Witness("identity", res.sample["x"], ctx.y, res.sup,
                raw_defect=float(res.sample["raw"]))
    return _report("identity", res, cfg, tolerance, w)


def parallelogram_scan(spec: NormSpec, cfg: SampleConfig, tolerance: float = DEFAULT_THRESHOLD,
                       workers: int = 1, stream: str = "parallelogram") -> DefectReport:
    """Batch parallelogram defect over random pairs ``(x, y)``.

    Both vectors follow ``cfg.radius_law``.  The canonical pairs
    ``(e_i, e_j)`` are not included; the sampled pairs already give a
    defect of order one for any non-Euclidean norm.
    """
    cfg.check(spec)

    def evaluate(b, start, stop):
        rng = block_rng(cfg.seed, stream, b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        Y = draw_vectors(spec, cfg, rng, stop - start)
        d, raw = _parallelogram(spec, X, Y)
        return {"defect": d, "raw": raw, "sample": {"x": X, "y": Y, "raw": raw}}

    res = sup_scan(cfg.n_samples, evaluate, workers)
    w = Witness("parallelogram", res.sample["x"], res.sample["y"], res.sup,
                raw_defect=float(res.sample["raw"]))
    return _report("parallelogram", res, cfg, tolerance, w)


def degenerate_zero_probe(ctx: PContext, cfg: SampleConfig, *, shell=(0.1, 2.0),
                          zero_tol: float = ZERO_TOL, n_refine: int = 32,
                          iterations: int = 40, shrink: float = 0.5) -> DefectReport:
    """Search for ``x != 0`` with ``p_y(x) == 0``.

    ``cfg.n_samples`` points are drawn with norms uniform in ``shell``; the
    ``n_refine`` with the smallest ``p_y(x) / ||x||`` are then improved by
    coordinate descent on that ratio (step shrinking by ``shrink`` after
    every sweep, points kept inside the shell).

    If some point has ``p_y(x) <= zero_tol`` the report's ``sup_defect`` is
    the norm of the best such point (largest norm wins) and it carries a
    ``degenerate_zero`` witness.  Otherwise ``sup_defect`` is 0 and
    ``details["min_ratio"]`` is the smallest ratio seen.
    """
    spec = ctx.spec
    cfg.check(spec)
    lo, hi = shell
    rng = block_rng(cfg.seed, "degenerate_zero", 0)
    X = draw_directions(spec, rng, cfg.n_samples) * rng.uniform(lo, hi, cfg.n_samples)[:, None]

    def ratio(Z):
        nz = _unchecked_norms(spec, Z)
        return _p_values(ctx, Z) / nz, nz

    r, _ = ratio(X)
    keep = np.argsort(r, kind="stable")[:n_refine]
    Z = X[keep].copy()
    rz, nz = ratio(Z)
    min_ratio = float(r.min())
    step = 0.25 * nz
    # real and imaginary parts are separate coordinates over C
    moves = [np.eye(spec.dim, dtype=spec.dtype)[i] for i in range(spec.dim)]
    if np.iscomplexobj(Z):
        moves += [1j * m for m in moves]
    for _ in range(iterations):
        for m in moves:
            for sign in (1.0, -1.0):
                cand = Z + sign * step[:, None] * m
                rc, nc = ratio(cand)
                ok = (rc < rz) & (nc >= lo) & (nc <= hi)
                Z[ok], rz[ok], nz[ok] = cand[ok], rc[ok], nc[ok]
        step = step * shrink
    min_ratio = min(min_ratio, float(rz.min()))

    allp = np.concatenate([_p_values(ctx, X), _p_values(ctx, Z)])
    alln = np.concatenate([_unchecked_norms(spec, X), nz])
    allx = np.concatenate([X, Z])
    hits = np.flatnonzero((allp <= zero_tol) & (alln >= lo))
    details = {"min_ratio": min_ratio, "n_refined": int(len(Z)), "zero_tol": zero_tol,
               "shell": [lo, hi]}
    if hits.size:
        k = hits[np.argmax(alln[hits])]
        details.update(p_value=float(allp[k]), x_norm=float(alln[k]))
        return DefectReport(
            "degenerate_zero", float(alln[k]), cfg.n_samples, zero_tol, cfg.seed,
            witness=Witness("degenerate_zero", allx[k], ctx.y, float(alln[k])),
            raw_sup=float(alln[k]), details=details,
        )
    return DefectReport("degenerate_zero", 0.0, cfg.n_samples, zero_tol, cfg.seed,
                        raw_sup=0.0, details=details)


@dataclass
class ScalingSummary:
    """Behaviour of ``d(t) = p_y(t x) - t`` along a unit ray.

    ``bounded`` is the sandwich statement ``|d(t)| <= 1``; ``vanishing_slope``
    says ``|d(t)| / t`` at the largest ``t`` is below ``slope_tol``.  A
    bounded ``d`` that does not vanish is the signature of a non-homogeneous
    ``p_y``: a homogeneous one would have ``d(t) / t`` constant.
    """

    profile: RayProfile
    sup_abs_defect: float
    final_defect: float
    final_slope: float
    bounded: bool
    vanishing_slope: bool
    trend: str

    def to_dict(self):
        return {
            "sup_abs_defect": self.sup_abs_defect,
            "final_defect": self.final_defect,
            "final_slope": self.final_slope,
            "bounded": self.bounded,
            "vanishing_slope": self.vanishing_slope,
            "trend": self.trend,
        }


def scaling_tension_probe(ctx: PContext, direction, ts=None, bound_tol: float = 1e-9,
                          slope_tol: float = 1e-3) -> ScalingSummary:
    if ts is None:
        ts = default_schedule()
    prof = ray_profile(ctx, direction, ts)
    d = np.abs(prof.defect)
    sup = float(d.max())
    if sup > 1.0 + bound_tol:
        raise CoherenceError(f"|p_y(t x) - t| = {sup!r} exceeds 1 on a ray")
    if np.all(d <= 1e-9):
        trend = "zero"
    elif len(d) > 1 and np.all(np.diff(d) >= -1e-12):
        trend = "increasing"
    elif len(d) > 1 and np.all(np.diff(d) <= 1e-12):
        trend = "decreasing"
    else:
        trend = "mixed"
    slope = float(d[-1] / prof.t[-1])
    return ScalingSummary(prof, sup, float(prof.defect[-1]), slope, True,
                          slope <= slope_tol, trend)


# -- classification ----------------------------------------------------------

class Outcome(str, enum.Enum):
    INNER_PRODUCT_CONSISTENT = "InnerProductConsistent"
    NOT_INNER_PRODUCT = "NotInnerProduct"


@dataclass
class Verdict:
    """Classifier result.

    ``NOT_INNER_PRODUCT`` is a certificate: ``witness`` can be recomputed.
    ``INNER_PRODUCT_CONSISTENT`` only says no sampled defect exceeded the
    threshold.
    """

    outcome: Outcome
    evidence: list
    threshold: float
    n_y: int = 0
    details: dict = field(default_factory=dict)

    @property
    def witness(self):
        worst = max(self.evidence, key=lambda r: r.sup_defect)
        return worst.witness if worst.sup_defect > self.threshold else None

    @property
    def worst(self) -> DefectReport:
        return max(self.evidence, key=lambda r: r.sup_defect)

    def to_dict(self):
        d = {
            "outcome": self.outcome.value,
            "threshold": self.threshold,
            "evidence": [r.to_dict() for r in self.evidence],
        }
        if self.outcome is Outcome.NOT_INNER_PRODUCT:
            d["witness_probe"] = self.worst.probe_name
        return d


def unit_ys(spec: NormSpec, cfg: SampleConfig, n_draws: int = DEFAULT_Y_DRAWS,
            include_basis: bool = True) -> list:
    """Random unit vectors followed by the normalized basis vectors."""
    ys = [sample_unit_sphere(spec, cfg, index=k) for k in range(n_draws)]
    if include_basis:
        ys += [PContext(spec, basis_vector(spec, i)).y for i in range(spec.dim)]
    return ys


def classify(spec: NormSpec, cfg: SampleConfig, threshold: float = DEFAULT_THRESHOLD,
             n_y: int = DEFAULT_Y_DRAWS, workers: int = 1) -> Verdict:
    """Decide whether ``spec`` behaves like an inner-product norm.

    Runs the homogeneity and identity scans of ``p_y`` for every ``y`` from
    :func:`unit_ys` and a parallelogram scan of the norm itself.
    """
    cfg.check(spec)
    hom, ident = [], []
    for k, y in enumerate(unit_ys(spec, cfg, n_y)):
        ctx = PContext(spec, y)
        hom.append(homogeneity_defect(ctx, cfg, threshold, workers, f"homogeneity/{k}"))
        ident.append(identity_defect(ctx, cfg, threshold, workers, f"identity/{k}"))
    evidence = [
        merge_reports(hom),
        merge_reports(ident),
        parallelogram_scan(spec, cfg, threshold, workers),
    ]
    h, i, par = evidence
    if par.sup_defect > 100 * threshold and max(h.sup_defect, i.sup_defect) < threshold:
        raise CoherenceError(
            f"parallelogram defect {par.sup_defect:.3e} but p_y defects below {threshold:g}"
        )
    bad = any(r.sup_defect > threshold for r in evidence)
    outcome = Outcome.NOT_INNER_PRODUCT if bad else Outcome.INNER_PRODUCT_CONSISTENT
    return Verdict(outcome, evidence, threshold, n_y=len(hom))


# -- witness recomputation ---------------------------------------------------

def recompute(spec: NormSpec, w: Witness) -> float:
    """Re-evaluate the defect stored in ``w`` from its vectors alone."""
    f = w.formula
    if f == "homogeneity":
        return homogeneity_defect_at(PContext(spec, w.y), w.x, w.lam, normalized=True)
    if f == "identity":
        return identity_defect_at(PContext(spec, w.y), w.x, normalized=True)
    if f == "parallelogram":
        return parallelogram_defect(spec, w.x, w.y, normalized=True)
    if f == "sandwich":
        return sandwich_violation(PContext(spec, w.y), w.x)
    if f == "degenerate_zero":
        ctx = PContext(spec, w.y)
        p = float(_p_values(ctx, as_batch(spec, w.x))[0])
        return float(_unchecked_norms(spec, as_batch(spec, w.x))[0]) if p <= ZERO_TOL else 0.0
    if f == "triangle":
        return triangle_defect(spec, w.x, w.y)
    if f == "norm_homogeneity":
        return norm_homogeneity_defect(spec, w.x, w.lam)
    if f.startswith("form_"):
        from .polarization import form_defect_at
        return form_defect_at(spec, w)
    if f == "residual":
        from .polarization import residual_at
        return residual_at(spec, w.x)
    raise ValueError(f"unknown witness formula {f!r}")
