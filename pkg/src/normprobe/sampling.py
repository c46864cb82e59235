"""Deterministic sample streams and the blocked sup-scan driver.

Every scan draws its samples block by block.  Block ``b`` of stream
``label`` gets its own generator seeded from ``(seed, label, b)``, so the
samples (and therefore every reported supremum) do not depend on how many
workers evaluate the blocks or in which order they finish.
"""

from __future__ import annotations

import dataclasses
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .norms import NormSpec, ScalarField, SpecError, _unchecked_norms

__all__ = [
    "LogUniform",
    "SampleConfig",
    "BLOCK_SIZE",
    "block_rng",
    "draw_directions",
    "draw_vectors",
    "draw_scalars",
    "sample_unit_sphere",
    "SupResult",
    "sup_scan",
]

BLOCK_SIZE = 2048
_MAX_REDRAWS = 16


@dataclass(frozen=True)
class LogUniform:
    """Log-uniform law on ``[low, high]``."""

    low: float
    high: float

    def __post_init__(self):
        if not (0 < self.low <= self.high) or not math.isfinite(self.high):
            raise SpecError(f"log-uniform bounds must satisfy 0 < low <= high, got {self}")

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        lo, hi = math.log(self.low), math.log(self.high)
        return np.exp(rng.uniform(lo, hi, size=n))

    def to_dict(self):
        return {"law": "log_uniform", "low": self.low, "high": self.high}

    @classmethod
    def from_dict(cls, d):
        if d.get("law", "log_uniform") != "log_uniform":
            raise SpecError(f"unsupported law {d.get('law')!r}")
        return cls(float(d["low"]), float(d["high"]))


@dataclass(frozen=True)
class SampleConfig:
    """Sampling parameters shared by every scan.

    ``radius_law`` controls the norm of sampled vectors and ``scalar_law``
    the modulus of sampled scalars.  Real scalars get a random sign,
    complex scalars a uniform phase.
    """

    dim: int
    field: ScalarField = ScalarField.REAL
    n_samples: int = 10_000
    radius_law: LogUniform = dataclasses.field(default_factory=lambda: LogUniform(1e-2, 1e3))
    scalar_law: LogUniform = dataclasses.field(default_factory=lambda: LogUniform(1e-3, 1e3))
    seed: int = 42

    def __post_init__(self):
        if isinstance(self.n_samples, bool) or int(self.n_samples) != self.n_samples:
            raise SpecError("n_samples must be an integer")
        if self.n_samples < 1:
            raise SpecError("n_samples must be positive")
        if int(self.dim) != self.dim or self.dim < 1:
            raise SpecError("dim must be a positive integer")
        if not (0 <= int(self.seed) < 2**64):
            raise SpecError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "field", ScalarField.parse(self.field))

    @classmethod
    def for_spec(cls, spec: NormSpec, **kwargs) -> "SampleConfig":
        return cls(dim=spec.dim, field=spec.field, **kwargs)

    def check(self, spec: NormSpec):
        if spec.dim != self.dim or spec.field is not self.field:
            raise SpecError(
                f"sample config ({self.dim}, {self.field.value}) does not match "
                f"norm ({spec.dim}, {spec.field.value})"
            )

    def to_dict(self):
        return {
            "dim": self.dim,
            "field": self.field.value,
            "n_samples": self.n_samples,
            "radius_law": self.radius_law.to_dict(),
            "scalar_law": self.scalar_law.to_dict(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        kw = dict(d)
        for key in ("radius_law", "scalar_law"):
            if key in kw:
                kw[key] = LogUniform.from_dict(kw[key])
        return cls(**kw)


def _label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def block_rng(seed: int, label: str, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_label_key(label), block))
    return np.random.Generator(np.random.PCG64(ss))


def _gaussian(rng, n, dim, field):
    if field is ScalarField.COMPLEX:
        z = rng.standard_normal((n, dim, 2))
        return z[..., 0] + 1j * z[..., 1]
    return rng.standard_normal((n, dim))


def draw_directions(spec: NormSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` isotropic directions, each scaled to unit norm under ``spec``."""
    X = _gaussian(rng, n, spec.dim, spec.field)
    nx = _unchecked_norms(spec, X)
    bad = nx == 0
    for _ in range(_MAX_REDRAWS):
        if not bad.any():
            break
        X[bad] = _gaussian(rng, int(bad.sum()), spec.dim, spec.field)
        nx[bad] = _unchecked_norms(spec, X[bad])
        bad = nx == 0
    if bad.any():
        raise RuntimeError("could not draw a nonzero direction")
    return X / nx[:, None]


def draw_vectors(spec: NormSpec, cfg: SampleConfig, rng: np.random.Generator, n: int):
    """Random directions with norms drawn from ``cfg.radius_law``."""
    return draw_directions(spec, rng, n) * cfg.radius_law.draw(rng, n)[:, None]


def draw_scalars(cfg: SampleConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    mod = cfg.scalar_law.draw(rng, n)
    if cfg.field is ScalarField.COMPLEX:
        return mod * np.exp(1j * rng.uniform(0.0, 2 * math.pi, size=n))
    return mod * np.where(rng.random(n) < 0.5, -1.0, 1.0)


def sample_unit_sphere(spec: NormSpec, cfg: SampleConfig, index: int = 0) -> np.ndarray:
    """A unit vector under ``spec``; ``index`` selects independent draws."""
    cfg.check(spec)
    rng = block_rng(cfg.seed, "unit_sphere", index)
    y = draw_directions(spec, rng, 1)
    # a second pass removes the last rounding error of the division
    y = y / _unchecked_norms(spec, y)[:, None]
    return y[0]


@dataclass
class SupResult:
    sup: float
    raw_sup: float
    index: int
    sample: dict
    aux: dict
    counts: dict


def _blocks(n):
    return [(b, b * BLOCK_SIZE, min(n, (b + 1) * BLOCK_SIZE))
            for b in range(math.ceil(n / BLOCK_SIZE))]


def sup_scan(n: int, evaluate, workers: int = 1) -> SupResult:
    """Run ``evaluate(block, start, stop)`` over fixed blocks and reduce.

    ``evaluate`` returns a dict with arrays ``defect`` (normalized) and
    ``raw``, a dict ``sample`` of per-sample arrays used to build the
    witness, and optional ``aux`` (max-reduced) and ``counts`` (summed).
    The sup is taken over ``defect``; ties go to the lowest sample index.
    """
    blocks = _blocks(n)

    def run(block):
        b, start, stop = block
        out = evaluate(b, start, stop)
        d = np.asarray(out["defect"], dtype=float)
        k = int(np.argmax(d))
        return {
            "start": start,
            "sup": float(d[k]),
            "k": k,
            "raw_sup": float(np.max(out["raw"])),
            "sample": {key: v[k] for key, v in out["sample"].items()},
            "aux": {key: float(np.max(v)) if np.size(v) else 0.0
                    for key, v in out.get("aux", {}).items()},
            "counts": {key: int(v) for key, v in out.get("counts", {}).items()},
        }

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]

    best = parts[0]
    for part in parts[1:]:
        if part["sup"] > best["sup"]:
            best = part
    aux, counts = {}, {}
    for part in parts:
        for key, v in part["aux"].items():
            aux[key] = max(aux.get(key, 0.0), v)
        for key, v in part["counts"].items():
            counts[key] = counts.get(key, 0) + v
    return SupResult(
        sup=best["sup"],
        raw_sup=max(p["raw_sup"] for p in parts),
        index=best["start"] + best["k"],
        sample=best["sample"],
        aux=aux,
        counts=counts,
    )
