"""The mid-point defect function

    p_y(x) = sqrt( (||x + y||^2 + ||x - y||^2) / 2 - 1 ),   ||y|| = 1,

its sandwich bounds ``||x|| - 1 <= p_y(x) <= ||x|| + 1`` and profiles of
``p_y`` along rays ``t -> t * xhat``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .norms import NormSpec, SpecError, _unchecked_norms, as_batch, as_vector
from .reports import DefectReport, Witness
from .sampling import SampleConfig, block_rng, draw_vectors, sup_scan

__all__ = [
    "PContext",
    "PBatch",
    "RadicandError",
    "RadicandWarning",
    "radicand",
    "radicands",
    "p_eval",
    "p_batch",
    "sandwich_check",
    "sandwich_violation",
    "RayProfile",
    "ray_profile",
    "default_schedule",
    "UNIT_TOL",
]

UNIT_TOL = 1e-10
SILENT_CLAMP = 1e-10
HARD_LIMIT = 1e-6


class RadicandError(ArithmeticError):
    """The radicand is too negative to be rounding noise."""


class RadicandWarning(RuntimeWarning):
    pass


@dataclass(frozen=True, eq=False)
class PContext:
    """A norm together with a unit vector ``y``.

    A nonzero ``y`` that is not a unit vector is replaced by ``y / ||y||``;
    ``y`` within ``UNIT_TOL`` of the unit sphere is kept bit-for-bit.
    """

    spec: NormSpec
    y: np.ndarray

    def __post_init__(self):
        y = as_vector(self.spec, self.y).copy()
        ny = float(_unchecked_norms(self.spec, y[None, :])[0])
        if ny == 0:
            raise SpecError("y must be nonzero")
        if abs(ny - 1.0) > UNIT_TOL:
            y = y / ny
            ny = float(_unchecked_norms(self.spec, y[None, :])[0])
            if abs(ny - 1.0) > UNIT_TOL:
                y = y / ny
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    def flipped(self) -> "PContext":
        return PContext(self.spec, -self.y)


def _radicands(ctx: PContext, X: np.ndarray) -> np.ndarray:
    a = _unchecked_norms(ctx.spec, X + ctx.y)
    b = _unchecked_norms(ctx.spec, X - ctx.y)
    return 0.5 * (a * a + b * b) - 1.0


def radicands(ctx: PContext, X) -> np.ndarray:
    return _radicands(ctx, as_batch(ctx.spec, X))


def radicand(ctx: PContext, x) -> float:
    """``(||x+y||^2 + ||x-y||^2) / 2 - 1``; nonnegative in exact arithmetic."""
    return float(_radicands(ctx, as_batch(ctx.spec, as_vector(ctx.spec, x)))[0])


@dataclass
class PBatch:
    values: np.ndarray
    radicands: np.ndarray
    flagged: np.ndarray

    @property
    def any_flagged(self) -> bool:
        return bool(self.flagged.any())


def _p_from_radicands(r: np.ndarray) -> PBatch:
    if np.any(r < -HARD_LIMIT):
        raise RadicandError(
            f"radicand {float(r.min()):.3e} below -{HARD_LIMIT:g}; "
            "the norm kernel is not a norm or y is not a unit vector"
        )
    return PBatch(np.sqrt(np.maximum(r, 0.0)), r, r < -SILENT_CLAMP)


def _p_values(ctx: PContext, X: np.ndarray) -> np.ndarray:
    return _p_from_radicands(_radicands(ctx, X)).values


def p_batch(ctx: PContext, X) -> PBatch:
    """Evaluate ``p_y`` on a batch, keeping radicands and clamp flags."""
    return _p_from_radicands(_radicands(ctx, as_batch(ctx.spec, X)))


def p_eval(ctx: PContext, x) -> float:
    """``p_y(x)``.

    Radicands in ``[-1e-10, 0)`` are clamped to zero silently, those in
    ``[-1e-6, -1e-10)`` are clamped with a :class:`RadicandWarning` and
    anything lower raises :class:`RadicandError`.
    """
    res = _p_from_radicands(_radicands(ctx, as_batch(ctx.spec, as_vector(ctx.spec, x))))
    if res.any_flagged:
        warnings.warn(f"clamped radicand {res.radicands[0]:.3e}", RadicandWarning,
                      stacklevel=2)
    return float(res.values[0])


def _sandwich(ctx, X):
    nx = _unchecked_norms(ctx.spec, X)
    p = _p_values(ctx, X)
    lower = np.maximum(0.0, (nx - 1.0) - p)
    upper = np.maximum(0.0, p - (nx + 1.0))
    return nx, p, lower, upper


def sandwich_check(ctx: PContext, cfg: SampleConfig, tolerance: float = 1e-9,
                   workers: int = 1, stream: str = "sandwich") -> DefectReport:
    """Largest violation of ``||x|| - 1 <= p_y(x) <= ||x|| + 1`` over samples.

    Every sample is checked, including ``||x|| < 1``.  ``details`` splits the
    lower and upper bound violations and repeats them for the ``||x|| >= 1``
    subset.
    """
    cfg.check(ctx.spec)

    def evaluate(b, start, stop):
        rng = block_rng(cfg.seed, stream, b)
        X = draw_vectors(ctx.spec, cfg, rng, stop - start)
        nx, p, lower, upper = _sandwich(ctx, X)
        big = nx >= 1.0
        d = np.maximum(lower, upper)
        return {
            "defect": d,
            "raw": d,
            "sample": {"x": X},
            "aux": {
                "lower": lower,
                "upper": upper,
                "lower_norm_ge_1": lower[big],
                "upper_norm_ge_1": upper[big],
            },
            "counts": {
                "n_norm_ge_1": int(big.sum()),
                "n_violations": int((d > tolerance).sum()),
            },
        }

    res = sup_scan(cfg.n_samples, evaluate, workers)
    details = {k: res.aux[k] for k in ("lower", "upper", "lower_norm_ge_1",
                                       "upper_norm_ge_1")}
    details.update(res.counts)
    return DefectReport(
        "sandwich", res.sup, cfg.n_samples, tolerance, cfg.seed,
        witness=Witness("sandwich", res.sample["x"], ctx.y, res.sup) if res.sup > 0 else None,
        raw_sup=res.raw_sup,
        details=details,
    )


def sandwich_violation(ctx: PContext, x) -> float:
    _, _, lower, upper = _sandwich(ctx, as_batch(ctx.spec, as_vector(ctx.spec, x)))
    return float(max(lower[0], upper[0]))


def default_schedule(t_max: float = 2.0**20):
    """Geometric ray schedule ``1, 2, 4, ...`` up to ``t_max``."""
    if not t_max >= 1:
        raise SpecError("t_max must be >= 1")
    return [2.0**k for k in range(int(math.floor(math.log2(t_max))) + 1)]


@dataclass
class RayProfile:
    """``p_y`` along ``t * direction``.

    ``defect`` is ``p_y(t x) - t ||x||``; for a unit direction this is the
    bounded difference between ``p_y`` and the norm on the ray.
    """

    direction: np.ndarray
    t: np.ndarray
    p_value: np.ndarray
    ratio: np.ndarray
    defect: np.ndarray

    @property
    def entries(self):
        return list(zip(self.t.tolist(), self.p_value.tolist(),
                        self.ratio.tolist(), self.defect.tolist()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "p_value", "ratio", "defect"])
        for row in self.entries:
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def ray_profile(ctx: PContext, direction, ts=None) -> RayProfile:
    if ts is None:
        ts = default_schedule()
    x = as_vector(ctx.spec, direction)
    nx = float(_unchecked_norms(ctx.spec, x[None, :])[0])
    if abs(nx - 1.0) > UNIT_TOL:
        raise SpecError(f"ray direction must be a unit vector (norm {nx!r})")
    t = np.asarray(ts, dtype=float).reshape(-1)
    if t.size == 0:
        raise SpecError("empty t schedule")
    if not np.all(np.isfinite(t)) or np.any(t <= 0):
        raise SpecError("all t must be finite and > 0")
    t = np.sort(t)
    X = t[:, None] * x[None, :]
    p = _p_values(ctx, X)
    return RayProfile(x, t, p, p / t, p - _unchecked_norms(ctx.spec, X))
