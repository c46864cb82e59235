"""Polarization: rebuild a candidate inner product from a norm.

Real field::

    form(x, y) = (||x+y||^2 - ||x-y||^2) / 4

Complex field (linear in ``x``, conjugate-linear in ``y``)::

    form(x, y) = 1/4 * sum_{k=0..3} i^k ||x + i^k y||^2

``form(x, x) == ||x||^2`` holds for every norm, so positivity proves
nothing.  Additivity, homogeneity and conjugate symmetry of the form, and
the residual between the norm and the quadratic norm of the reconstructed
Gram matrix, are what discriminate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .norms import (NormSpec, ScalarField, _accumulate, _unchecked_norms, as_batch, as_vector,
                    basis_vector)
from .reports import DefectReport, Witness, encode_vector
from .sampling import SampleConfig, block_rng, draw_scalars, draw_vectors, sup_scan

__all__ = [
    "polar_form",
    "polar_forms",
    "form_axiom_scan",
    "form_positivity_scan",
    "form_defect_at",
    "GramRecon",
    "gram_matrix",
    "gram_reconstruct",
    "quadratic_norms",
    "residual_at",
]

_PHASES = (1.0, 1j, -1.0, -1j)


def _forms(spec: NormSpec, X, Y):
    if spec.field is ScalarField.REAL:
        a = _unchecked_norms(spec, X + Y)
        b = _unchecked_norms(spec, X - Y)
        return 0.25 * (a * a - b * b)
    total = np.zeros(len(X), dtype=np.complex128)
    for w in _PHASES:
        n = _unchecked_norms(spec, X + w * Y)
        total = total + w * (n * n)
    return 0.25 * total


def polar_forms(spec: NormSpec, X, Y) -> np.ndarray:
    return _forms(spec, as_batch(spec, X), as_batch(spec, Y))


def polar_form(spec: NormSpec, x, y):
    """The polarization form of ``spec`` at ``(x, y)``."""
    v = _forms(spec, as_batch(spec, as_vector(spec, x)), as_batch(spec, as_vector(spec, y)))[0]
    return complex(v) if spec.field is ScalarField.COMPLEX else float(v)


# -- axiom defects -----------------------------------------------------------

def _additivity(spec, X, X2, Y):
    raw = np.abs(_forms(spec, X + X2, Y) - _forms(spec, X, Y) - _forms(spec, X2, Y))
    scale = (_unchecked_norms(spec, X) + _unchecked_norms(spec, X2)
             + _unchecked_norms(spec, Y)) ** 2
    return raw / np.maximum(1.0, scale), raw


def _homogeneity(spec, X, lam, Y):
    raw = np.abs(_forms(spec, lam[:, None] * X, Y) - lam * _forms(spec, X, Y))
    scale = (np.abs(lam) * _unchecked_norms(spec, X) + _unchecked_norms(spec, Y)) ** 2
    return raw / np.maximum(1.0, scale), raw


def _symmetry(spec, X, Y):
    raw = np.abs(_forms(spec, X, Y) - np.conj(_forms(spec, Y, X)))
    scale = (_unchecked_norms(spec, X) + _unchecked_norms(spec, Y)) ** 2
    return raw / np.maximum(1.0, scale), raw


def _positivity(spec, X):
    nx = _unchecked_norms(spec, X)
    raw = np.abs(_forms(spec, X, X) - nx * nx)
    return raw / np.maximum(1.0, nx * nx), raw


def form_defect_at(spec: NormSpec, w: Witness) -> float:
    """Normalized form-axiom defect recomputed from a witness."""
    one = lambda v: as_batch(spec, as_vector(spec, v))  # noqa: E731
    if w.formula == "form_additivity":
        d, _ = _additivity(spec, one(w.x), one(w.x2), one(w.y))
    elif w.formula == "form_homogeneity":
        lam = np.atleast_1d(np.asarray(w.lam, dtype=spec.dtype))
        d, _ = _homogeneity(spec, one(w.x), lam, one(w.y))
    elif w.formula == "form_symmetry":
        d, _ = _symmetry(spec, one(w.x), one(w.y))
    elif w.formula == "form_positivity":
        d, _ = _positivity(spec, one(w.x))
    else:
        raise ValueError(f"not a form witness: {w.formula!r}")
    return float(d[0])


def form_axiom_scan(spec: NormSpec, cfg: SampleConfig, tolerance: float = 1e-6,
                    workers: int = 1) -> list:
    """Additivity, homogeneity and symmetry defects of the polarization form.

    Returns three reports: ``form_additivity`` for
    ``|form(x+x', y) - form(x, y) - form(x', y)|``, ``form_homogeneity``
    for ``|form(lam x, y) - lam form(x, y)|`` and ``form_symmetry`` for
    ``|form(x, y) - conj(form(y, x))|``.  Each is divided by
    ``max(1, scale)``, ``scale`` being the squared sum of the norms that
    enter the polarization (the size of its rounding error).
    """
    cfg.check(spec)
    n = cfg.n_samples

    def additivity(b, start, stop):
        rng = block_rng(cfg.seed, "form/additivity", b)
        X, X2, Y = (draw_vectors(spec, cfg, rng, stop - start) for _ in range(3))
        d, raw = _additivity(spec, X, X2, Y)
        return {"defect": d, "raw": raw, "sample": {"x": X, "x2": X2, "y": Y, "raw": raw}}

    def homogeneity(b, start, stop):
        rng = block_rng(cfg.seed, "form/homogeneity", b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        Y = draw_vectors(spec, cfg, rng, stop - start)
        lam = draw_scalars(cfg, rng, stop - start)
        d, raw = _homogeneity(spec, X, lam, Y)
        return {"defect": d, "raw": raw, "sample": {"x": X, "y": Y, "lam": lam, "raw": raw}}

    def symmetry(b, start, stop):
        rng = block_rng(cfg.seed, "form/symmetry", b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        Y = draw_vectors(spec, cfg, rng, stop - start)
        d, raw = _symmetry(spec, X, Y)
        return {"defect": d, "raw": raw, "sample": {"x": X, "y": Y, "raw": raw}}

    reports = []
    for name, fn in (("form_additivity", additivity), ("form_homogeneity", homogeneity),
                     ("form_symmetry", symmetry)):
        res = sup_scan(n, fn, workers)
        s = res.sample
        w = Witness(name, s["x"], s["y"], res.sup, lam=s.get("lam"), x2=s.get("x2"),
                    raw_defect=float(s["raw"]))
        reports.append(DefectReport(name, res.sup, n, tolerance, cfg.seed,
                                    witness=w if res.sup > 0 else None,
                                    raw_sup=res.raw_sup))
    return reports


def form_positivity_scan(spec: NormSpec, cfg: SampleConfig, tolerance: float = 1e-10,
                         workers: int = 1) -> DefectReport:
    """Self-check ``form(x, x) == ||x||^2``; true for any norm."""
    cfg.check(spec)

    def evaluate(b, start, stop):
        rng = block_rng(cfg.seed, "form/positivity", b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        d, raw = _positivity(spec, X)
        return {"defect": d, "raw": raw, "sample": {"x": X}}

    res = sup_scan(cfg.n_samples, evaluate, workers)
    w = Witness("form_positivity", res.sample["x"], None, res.sup)
    return DefectReport("form_positivity", res.sup, cfg.n_samples, tolerance, cfg.seed,
                        witness=w if res.sup > 0 else None, raw_sup=res.raw_sup)


# -- Gram reconstruction -----------------------------------------------------

def gram_matrix(spec: NormSpec) -> np.ndarray:
    """``G[i, j] = form(e_i, e_j)``."""
    E = np.stack([basis_vector(spec, i) for i in range(spec.dim)])
    n = spec.dim
    X = np.repeat(E, n, axis=0)
    Y = np.tile(E, (n, 1))
    return _forms(spec, X, Y).reshape(n, n)


def _quadratic_norms(gram, X):
    # sum_ab x_a G_ab conj(x_b), real part; clamped since a non-Gram matrix can go negative
    GX = _accumulate(np.conj(X), gram)
    q = (X * GX).sum(axis=-1).real
    return np.sqrt(np.maximum(q, 0.0))


def quadratic_norms(gram, X) -> np.ndarray:
    return _quadratic_norms(np.asarray(gram), np.atleast_2d(X))


def residual_at(spec: NormSpec, x, gram=None) -> float:
    """``| ||x|| - sqrt(max(0, q(x))) |`` for the reconstructed quadratic ``q``."""
    if gram is None:
        gram = gram_matrix(spec)
    X = as_batch(spec, as_vector(spec, x))
    return float(np.abs(_unchecked_norms(spec, X) - _quadratic_norms(gram, X))[0])


@dataclass
class GramRecon:
    gram: np.ndarray
    residual_sup: float
    spd_margin: float
    n_samples: int
    seed: int
    witness: Optional[Witness] = None

    @property
    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.gram - self.gram.conj().T)))

    def to_dict(self):
        g = self.gram
        rows = [encode_vector(r) for r in g]
        d = {
            "gram": rows,
            "residual_sup": self.residual_sup,
            "spd_margin": self.spd_margin,
            "symmetry_defect": self.symmetry_defect,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        return d


def gram_reconstruct(spec: NormSpec, cfg: Optional[SampleConfig] = None,
                     workers: int = 1) -> GramRecon:
    """Polarize on the basis, then compare the norm with the quadratic norm.

    A matching Gram matrix alone does not certify an inner-product norm
    (l1 in the plane polarizes to the identity); ``residual_sup`` is the
    part that does.
    """
    if cfg is None:
        cfg = SampleConfig.for_spec(spec)
    cfg.check(spec)
    gram = gram_matrix(spec)
    if spec.field is ScalarField.REAL:
        gram = gram.real

    def evaluate(b, start, stop):
        rng = block_rng(cfg.seed, "gram/residual", b)
        X = draw_vectors(spec, cfg, rng, stop - start)
        raw = np.abs(_unchecked_norms(spec, X) - _quadratic_norms(gram, X))
        return {"defect": raw, "raw": raw, "sample": {"x": X}}

    res = sup_scan(cfg.n_samples, evaluate, workers)
    sym = 0.5 * (gram + gram.conj().T)
    margin = float(np.linalg.eigvalsh(sym)[0])
    w = Witness("residual", res.sample["x"], None, res.sup) if res.sup > 0 else None
    return GramRecon(gram, res.sup, margin, cfg.n_samples, cfg.seed, w)
