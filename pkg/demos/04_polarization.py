# Rebuilding the inner product from the norm.
#
# The polarization form <x, y> = (||x+y||^2 - ||x-y||^2)/4 (plus the imaginary
# terms over C) reproduces the Gram matrix of a quadratic norm.  For any other
# norm it still yields *some* matrix, but that matrix does not give back the
# norm, and the form fails additivity.

import numpy as np

from normprobe import NormSpec, bundled_spec, form_axiom_scan, gram_reconstruct, SampleConfig
from normprobe.polarization import residual_at

np.set_printoptions(precision=6, suppress=True)

q = bundled_spec("quadratic_diag41")
r = gram_reconstruct(q)
print("diag(4,1) gram:\n", r.gram)
print("residual", r.residual_sup, "smallest eigenvalue", r.spd_margin)

l1 = NormSpec.lp(1, 2)
r = gram_reconstruct(l1)
print("\nl1 gram:\n", r.gram)
print("but at x = (1,1): ||x||_1 = 2, sqrt(x^T I x) = sqrt(2), gap",
      residual_at(l1, [1.0, 1.0]))
print("largest gap over samples", r.residual_sup, "at", r.witness.x)

# a Hermitian Gram matrix over C
G = np.array([[2.0, 1j], [-1j, 3.0]])
r = gram_reconstruct(NormSpec.quadratic(G))
print("\ncomplex gram:\n", r.gram, "\nresidual", r.residual_sup)

for spec, name in ((q, "diag(4,1)"), (l1, "l1")):
    reports = form_axiom_scan(spec, SampleConfig.for_spec(spec, n_samples=2000))
    print(name, {rep.probe_name: f"{rep.sup_defect:.2e}" for rep in reports})
