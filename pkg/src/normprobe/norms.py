"""Norms on finite-dimensional coordinate spaces over R or C.

A :class:`NormSpec` is a declarative, immutable description of a norm on
``K^n``.  Vectors are plain numpy arrays (``float64`` for real fields,
``complex128`` for complex ones); every evaluator works on a single vector
of shape ``(dim,)`` or on a batch of shape ``(n, dim)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "ScalarField",
    "Lp",
    "WeightedLp",
    "Quadratic",
    "Term",
    "Combination",
    "NormSpec",
    "SpecError",
    "as_vector",
    "as_batch",
    "norm_eval",
    "norms",
    "basis_vector",
]

INF = math.inf


class SpecError(ValueError):
    """Invalid norm description or incompatible vector."""


class ScalarField(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is ScalarField.REAL else np.complex128

    @classmethod
    def parse(cls, value) -> "ScalarField":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise SpecError(f"field must be 'real' or 'complex', got {value!r}") from None


def _check_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "∞"):
            return INF
        raise SpecError(f"p must be a number or 'inf', got {p!r}")
    p = float(p)
    if math.isnan(p) or p < 1:
        raise SpecError("p must be ≥ 1")
    return p


@dataclass(frozen=True)
class Lp:
    """Standard l_p norm; ``p = math.inf`` is the max-modulus norm."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))


@dataclass(frozen=True, eq=False)
class WeightedLp:
    """``(sum_i w_i |x_i|^p)^(1/p)``; for ``p = inf`` it is ``max_i w_i |x_i|``."""

    p: float
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        if w.size == 0 or not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise SpecError("weights must be finite and > 0")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __eq__(self, other):
        return (
            isinstance(other, WeightedLp)
            and self.p == other.p
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Quadratic:
    """Norm ``sqrt(sum_ab x_a G_ab conj(x_b))`` for a positive-definite ``G``.

    With this convention the polarization form of the norm reproduces
    ``G`` entrywise: ``form(e_i, e_j) == G[i, j]``.
    """

    gram: np.ndarray
    _factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        g = np.array(self.gram)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise SpecError(f"gram must be a square matrix, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise SpecError("gram entries must be finite")
        g = g.astype(np.complex128 if np.iscomplexobj(g) else np.float64)
        scale = max(1.0, float(np.max(np.abs(g))))
        if np.max(np.abs(g - g.conj().T)) > 1e-12 * scale:
            raise SpecError("gram must be symmetric (Hermitian for complex fields)")
        g = 0.5 * (g + g.conj().T)
        smallest = float(np.linalg.eigvalsh(g)[0])
        if smallest <= 0:
            raise SpecError(
                f"gram must be positive definite (smallest eigenvalue {smallest:.6g})"
            )
        # ||x||^2 = x^T G conj(x) = x^H conj(G) x = ||L^H x||^2 with conj(G) = L L^H
        factor = np.linalg.cholesky(g.conj()).conj().T
        g.setflags(write=False)
        factor.setflags(write=False)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_factor", factor)

    @property
    def smallest_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.gram)[0])

    def __eq__(self, other):
        return isinstance(other, Quadratic) and np.array_equal(self.gram, other.gram)

    __hash__ = None


@dataclass(frozen=True)
class Term:
    coefficient: float
    norm: "NormSpec"

    def __post_init__(self):
        c = float(self.coefficient)
        if not math.isfinite(c) or c <= 0:
            raise SpecError("coefficient must be finite and > 0")
        object.__setattr__(self, "coefficient", c)


@dataclass(frozen=True)
class Combination:
    """``sum_k c_k ||x||_k`` (mode ``"sum"``) or ``max_k c_k ||x||_k`` (``"max"``)."""

    terms: tuple
    mode: str = "sum"

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise SpecError("combination must have at least one term")
        for t in terms:
            if not isinstance(t, Term):
                raise SpecError("combination terms must be Term instances")
        mode = str(self.mode).lower()
        if mode not in ("sum", "max"):
            raise SpecError(f"mode must be 'sum' or 'max', got {self.mode!r}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "mode", mode)


Kind = Union[Lp, WeightedLp, Quadratic, Combination]


@dataclass(frozen=True)
class NormSpec:
    dim: int
    field: ScalarField
    kind: Kind

    def __post_init__(self):
        if isinstance(self.dim, bool) or int(self.dim) != self.dim or self.dim < 1:
            raise SpecError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "field", ScalarField.parse(self.field))
        kind = self.kind
        if isinstance(kind, WeightedLp) and kind.weights.size != self.dim:
            raise SpecError(
                f"weights has {kind.weights.size} entries, expected dim={self.dim}"
            )
        if isinstance(kind, Quadratic):
            if kind.gram.shape[0] != self.dim:
                raise SpecError(f"gram is {kind.gram.shape}, expected dim={self.dim}")
            if self.field is ScalarField.REAL and np.iscomplexobj(kind.gram):
                raise SpecError("gram must be real for a real field")
        if isinstance(kind, Combination):
            for t in kind.terms:
                if t.norm.dim != self.dim or t.norm.field is not self.field:
                    raise SpecError("combination terms must share dim and field")
        if not isinstance(kind, (Lp, WeightedLp, Quadratic, Combination)):
            raise SpecError(f"unknown norm kind {kind!r}")

    @property
    def dtype(self):
        return self.field.dtype

    # convenience constructors
    @classmethod
    def lp(cls, p, dim, field=ScalarField.REAL) -> "NormSpec":
        return cls(dim, field, Lp(p))

    @classmethod
    def weighted(cls, p, weights, field=ScalarField.REAL) -> "NormSpec":
        w = np.asarray(weights, dtype=float).reshape(-1)
        return cls(w.size, field, WeightedLp(p, w))

    @classmethod
    def quadratic(cls, gram, field=None) -> "NormSpec":
        g = np.asarray(gram)
        if field is None:
            field = ScalarField.COMPLEX if np.iscomplexobj(g) else ScalarField.REAL
        return cls(g.shape[0], field, Quadratic(g))

    @classmethod
    def combine(cls, terms, mode="sum") -> "NormSpec":
        """``terms`` is a sequence of ``(coefficient, NormSpec)`` pairs."""
        terms = [Term(c, s) for c, s in terms]
        if not terms:
            raise SpecError("combination must have at least one term")
        first = terms[0].norm
        return cls(first.dim, first.field, Combination(tuple(terms), mode))

    def describe(self) -> str:
        k = self.kind
        if isinstance(k, Lp):
            body = f"l{_p_str(k.p)}"
        elif isinstance(k, WeightedLp):
            body = f"weighted l{_p_str(k.p)}"
        elif isinstance(k, Quadratic):
            body = "quadratic"
        else:
            body = f"{k.mode}(" + ", ".join(
                f"{t.coefficient:g}*{t.norm.describe()}" for t in k.terms
            ) + ")"
        return body


def _p_str(p):
    return "inf" if math.isinf(p) else f"{p:g}"


def basis_vector(spec: NormSpec, i: int) -> np.ndarray:
    e = np.zeros(spec.dim, dtype=spec.dtype)
    e[i] = 1.0
    return e


def as_batch(spec: NormSpec, x) -> np.ndarray:
    """Validate ``x`` against ``spec`` and return a 2-D array of shape (n, dim)."""
    arr = np.asarray(x)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise SpecError(f"expected a vector or a batch of vectors, got shape {arr.shape}")
    if arr.shape[1] != spec.dim:
        raise SpecError(f"vector has dim {arr.shape[1]}, norm has dim {spec.dim}")
    if np.iscomplexobj(arr):
        if spec.field is ScalarField.REAL:
            raise SpecError("complex vector given for a real norm")
    elif not np.issubdtype(arr.dtype, np.number) and arr.dtype != np.bool_:
        raise SpecError(f"non-numeric vector dtype {arr.dtype}")
    arr = arr.astype(spec.dtype, copy=False)
    if not np.all(np.isfinite(arr)):
        raise SpecError("vector coordinates must be finite")
    return arr


def as_vector(spec: NormSpec, x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise SpecError(f"expected a single vector, got shape {arr.shape}")
    return as_batch(spec, arr)[0]


def _lp(absx: np.ndarray, p: float) -> np.ndarray:
    if math.isinf(p):
        return absx.max(axis=-1)
    if p == 1:
        return absx.sum(axis=-1)
    if p == 2:
        return np.sqrt((absx * absx).sum(axis=-1))
    # scale by the largest modulus so absx**p cannot overflow or underflow
    m = absx.max(axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return m * ((absx / safe[:, None]) ** p).sum(axis=-1) ** (1.0 / p)


def _accumulate(X: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``X @ M.T`` summed column by column in a fixed order."""
    out = np.zeros((X.shape[0], M.shape[0]), dtype=np.result_type(X, M))
    for j in range(M.shape[1]):
        out += X[:, j, None] * M[None, :, j]
    return out


def _eval(kind: Kind, X: np.ndarray) -> np.ndarray:
    if isinstance(kind, Lp):
        return _lp(np.abs(X), kind.p)
    if isinstance(kind, WeightedLp):
        if math.isinf(kind.p):
            return (kind.weights * np.abs(X)).max(axis=-1)
        return _lp(kind.weights ** (1.0 / kind.p) * np.abs(X), kind.p)
    if isinstance(kind, Quadratic):
        # fixed-order column accumulation instead of BLAS, so a row's value does
        # not depend on the batch it is evaluated in
        Y = _accumulate(X, kind._factor)
        return np.sqrt((Y.real**2 + Y.imag**2).sum(axis=-1) if np.iscomplexobj(Y)
                       else (Y * Y).sum(axis=-1))
    values = np.stack([t.coefficient * _eval(t.norm.kind, X) for t in kind.terms])
    return values.sum(axis=0) if kind.mode == "sum" else values.max(axis=0)


def norms(spec: NormSpec, X) -> np.ndarray:
    """Row-wise norms of a batch ``X`` of shape (n, dim)."""
    return _eval(spec.kind, as_batch(spec, X))


def norm_eval(spec: NormSpec, x) -> float:
    """The norm of a single vector."""
    return float(_eval(spec.kind, as_batch(spec, as_vector(spec, x)))[0])


def _unchecked_norms(spec: NormSpec, X: np.ndarray) -> np.ndarray:
    # hot path for internally generated, already-validated batches
    return _eval(spec.kind, X)
