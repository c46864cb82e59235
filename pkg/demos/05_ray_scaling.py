# p_y along a ray t*x for growing t.
#
# The defect d(t) = p_y(t x) - t ||x|| never leaves [-1, 1], so p_y(t x)/t
# tends to ||x||.  In l1 with x = e2, y = e1 it equals sqrt(t^2 + 2t) - t,
# which creeps up to 1 and never gets there.

import numpy as np

from normprobe import NormSpec, PContext, ray_profile, scaling_tension_probe

e1, e2 = np.eye(2)
prof = ray_profile(PContext(NormSpec.lp(1, 2), e1), e2)
print(f"{'t':>10s} {'p':>14s} {'p/t':>10s} {'d(t)':>10s}")
for t, p, ratio, d in prof.entries[::4]:
    print(f"{t:10.0f} {p:14.4f} {ratio:10.6f} {d:10.7f}")

for name, spec in (("l2", NormSpec.lp(2, 2)), ("l1", NormSpec.lp(1, 2)),
                   ("linf", NormSpec.lp("inf", 2))):
    s = scaling_tension_probe(PContext(spec, e1), e2)
    print(f"{name:5s} sup|d| {s.sup_abs_defect:.6f}  final {s.final_defect:.6f}  {s.trend}")

# the CSV written by the command line tool is the same table
print(prof.to_csv().splitlines()[:3])
