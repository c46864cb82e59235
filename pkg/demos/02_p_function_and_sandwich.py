# The p-function p_y(x) = sqrt((||x+y||^2 + ||x-y||^2)/2 - 1) and its bounds.
#
# For a unit y it always sits between ||x|| - 1 and ||x|| + 1.  In a Euclidean
# space it is exactly ||x||; elsewhere it bends away from the norm.

import numpy as np

from normprobe import NormSpec, PContext, SampleConfig, p_eval, radicand, sandwich_check

e1, e2 = np.eye(2)

for name, spec in [("l2", NormSpec.lp(2, 2)), ("l1", NormSpec.lp(1, 2)),
                   ("linf", NormSpec.lp("inf", 2))]:
    ctx = PContext(spec, e1)
    print(f"{name:5s} p(e2) = {p_eval(ctx, e2):.6f}   radicand = {radicand(ctx, e2):.6f}")

# y need not be a unit vector on input: it gets rescaled
ctx = PContext(NormSpec.lp(1, 2), [3.0, 0.0])
print("rescaled y:", ctx.y)

# the max norm has p_y(x) = 0 for x = (0, b), |b| <= 1, even though x != 0
linf = PContext(NormSpec.lp("inf", 2), e1)
for b in (0.25, 0.5, 1.0, 1.5):
    print(f"linf p((0, {b})) = {p_eval(linf, [0.0, b]):.6f}")

# sandwich scan over many vectors, short and long
spec = NormSpec.lp(1.5, 3)
cfg = SampleConfig.for_spec(spec, n_samples=50_000)
r = sandwich_check(PContext(spec, [1.0, 1.0, 0.0]), cfg)
print(f"sandwich on l1.5: sup violation {r.sup_defect:.2e} over {r.n_samples} samples, "
      f"{r.details['n_norm_ge_1']} with ||x|| >= 1")
