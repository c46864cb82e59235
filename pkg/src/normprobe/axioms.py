"""Sanity scan that an implemented norm kernel obeys the norm axioms."""

from __future__ import annotations

import numpy as np

from .norms import NormSpec, _unchecked_norms
from .reports import DefectReport, Witness
from .sampling import (SampleConfig, block_rng, draw_scalars, draw_vectors,
                       sup_scan)

__all__ = ["axiom_scan", "triangle_defect", "norm_homogeneity_defect"]


def _triangle(spec, X, Y):
    nxy = _unchecked_norms(spec, X + Y)
    nx, ny = _unchecked_norms(spec, X), _unchecked_norms(spec, Y)
    raw = np.maximum(0.0, nxy - nx - ny)
    return raw / np.maximum(1.0, nx + ny), raw


def _homogeneity(spec, X, lam):
    nlx = _unchecked_norms(spec, lam[:, None] * X)
    scaled = np.abs(lam) * _unchecked_norms(spec, X)
    raw = np.abs(nlx - scaled)
    return raw / np.maximum(1.0, scaled), raw


def triangle_defect(spec: NormSpec, x, y) -> float:
    """``max(0, ||x+y|| - ||x|| - ||y||) / max(1, ||x|| + ||y||)``."""
    X, Y = np.atleast_2d(x).astype(spec.dtype), np.atleast_2d(y).astype(spec.dtype)
    return float(_triangle(spec, X, Y)[0][0])


def norm_homogeneity_defect(spec: NormSpec, x, lam) -> float:
    """``| ||lam x|| - |lam| ||x|| | / max(1, |lam| ||x||)``."""
    X = np.atleast_2d(x).astype(spec.dtype)
    return float(_homogeneity(spec, X, np.atleast_1d(lam))[0][0])


def axiom_scan(spec: NormSpec, cfg: SampleConfig, tolerance: float = 1e-9,
               workers: int = 1) -> list:
    """Triangle and absolute-homogeneity defects of ``spec`` over samples.

    Returns two reports, ``norm_triangle`` and ``norm_homogeneity``.
    Both suprema are relative-above-1, i.e. divided by ``max(1, scale)``.
    """
    cfg.check(spec)

    def tri(b, start, stop):
        rng = block_rng(cfg.seed, "axioms/triangle", b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        Y = draw_vectors(spec, cfg, rng, stop - start)
        d, raw = _triangle(spec, X, Y)
        return {"defect": d, "raw": raw, "sample": {"x": X, "y": Y}}

    def hom(b, start, stop):
        rng = block_rng(cfg.seed, "axioms/homogeneity", b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        lam = draw_scalars(cfg, rng, stop - start)
        d, raw = _homogeneity(spec, X, lam)
        return {"defect": d, "raw": raw, "sample": {"x": X, "lam": lam}}

    t = sup_scan(cfg.n_samples, tri, workers)
    h = sup_scan(cfg.n_samples, hom, workers)
    return [
        DefectReport("norm_triangle", t.sup, cfg.n_samples, tolerance, cfg.seed,
                     witness=Witness("triangle", t.sample["x"], t.sample["y"], t.sup)
                     if t.sup > 0 else None,
                     raw_sup=t.raw_sup),
        DefectReport("norm_homogeneity", h.sup, cfg.n_samples, tolerance, cfg.seed,
                     witness=Witness("norm_homogeneity", h.sample["x"], None, h.sup,
                                     lam=h.sample["lam"])
                     if h.sup > 0 else None,
                     raw_sup=h.raw_sup),
    ]
