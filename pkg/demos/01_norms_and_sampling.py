# Norms, specs and the seeded sampler.
#
# Run from the repository root:  python3 demos/01_norms_and_sampling.py

import numpy as np

from normprobe import NormSpec, SampleConfig, bundled_spec, norm_eval, norms, sample_unit_sphere
from normprobe.sampling import block_rng, draw_vectors

np.set_printoptions(precision=6, suppress=True)

# a few norms on R^3
x = np.array([3.0, -4.0, 12.0])
for spec in (NormSpec.lp(1, 3), NormSpec.lp(2, 3), NormSpec.lp("inf", 3),
             NormSpec.weighted(2, [4.0, 1.0, 0.25]),
             NormSpec.combine([(1, NormSpec.lp(1, 3)), (2, NormSpec.lp(2, 3))])):
    print(f"{spec.describe():28s} ||x|| = {norm_eval(spec, x):.6f}")

# a quadratic norm sqrt(x^T G x); diag(4, 1) doubles the first coordinate
q = bundled_spec("quadratic_diag41")
print("quadratic_diag41 on (1,0), (0,1):", norms(q, np.eye(2)))

# complex vectors work the same way
cl2 = NormSpec.lp(2, 2, "complex")
print("complex l2 of (1+i, 1):", norm_eval(cl2, [1 + 1j, 1]))

# sampling is keyed by (seed, label, block): same seed, same vectors
cfg = SampleConfig.for_spec(q, seed=7)
a = draw_vectors(q, cfg, block_rng(cfg.seed, "demo", 0), 4)
b = draw_vectors(q, cfg, block_rng(cfg.seed, "demo", 0), 4)
print("repeatable draws:", np.array_equal(a, b))
print("radii span", norms(q, a).min(), "to", norms(q, a).max())

# unit vectors w.r.t. the norm itself, not the Euclidean sphere
y = sample_unit_sphere(q, cfg)
print("y =", y, " ||y|| =", norm_eval(q, y))
