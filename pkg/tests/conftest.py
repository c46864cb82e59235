import math

import numpy as np
import pytest

from normprobe import NormSpec
from normprobe.norms import Combination, Lp, Quadratic, WeightedLp


def oracle_norm(spec, x):
    """Plain-Python norm evaluation, independent of the numpy kernels."""
    k = spec.kind
    mods = [abs(complex(c)) for c in x]
    if isinstance(k, Lp):
        if math.isinf(k.p):
            return max(mods)
        return sum(m ** k.p for m in mods) ** (1.0 / k.p)
    if isinstance(k, WeightedLp):
        w = [float(v) for v in k.weights]
        if math.isinf(k.p):
            return max(wi * m for wi, m in zip(w, mods))
        return sum(wi * m ** k.p for wi, m in zip(w, mods)) ** (1.0 / k.p)
    if isinstance(k, Quadratic):
        g = k.gram
        n = len(x)
        q = sum(complex(x[a]) * complex(g[a][b]) * complex(x[b]).conjugate()
                for a in range(n) for b in range(n))
        return math.sqrt(max(q.real, 0.0))
    vals = [t.coefficient * oracle_norm(t.norm, x) for t in k.terms]
    return sum(vals) if k.mode == "sum" else max(vals)


def oracle_p(spec, y, x):
    a = oracle_norm(spec, [xi + yi for xi, yi in zip(x, y)])
    b = oracle_norm(spec, [xi - yi for xi, yi in zip(x, y)])
    return math.sqrt(max(0.5 * (a * a + b * b) - 1.0, 0.0))


def random_spd(rng, n, complex_=False):
    a = rng.standard_normal((n, n))
    if complex_:
        a = a + 1j * rng.standard_normal((n, n))
    return a @ a.conj().T + 0.5 * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def e():
    return np.eye(2)


def builtin_specs():
    rng = np.random.default_rng(7)
    l1 = NormSpec.lp(1, 3)
    return [
        NormSpec.lp(1, 2),
        NormSpec.lp(2, 3),
        NormSpec.lp(1.5, 3),
        NormSpec.lp(3, 2),
        NormSpec.lp("inf", 3),
        NormSpec.lp(1, 2, "complex"),
        NormSpec.lp(2, 3, "complex"),
        NormSpec.weighted(1.5, [1.0, 2.0, 0.5]),
        NormSpec.weighted("inf", [3.0, 1.0]),
        NormSpec.quadratic(random_spd(rng, 3)),
        NormSpec.quadratic(random_spd(rng, 2, complex_=True)),
        NormSpec.combine([(1.0, l1), (2.0, NormSpec.lp(2, 3))], "sum"),
        NormSpec.combine([(1.0, l1), (1.5, NormSpec.lp("inf", 3))], "max"),
    ]


BUILTIN = builtin_specs()
BUILTIN_IDS = [f"{s.field.value}-{s.describe()}" for s in BUILTIN]
