# Is a given norm induced by an inner product?
#
# classify() scans homogeneity and identity defects of p_y over several unit
# y, plus the parallelogram law, and returns a verdict with a witness that
# can be recomputed from scratch.

import numpy as np

from normprobe import NormSpec, Outcome, SampleConfig, bundled_spec, classify, recompute

specs = {
    "l2 (dim 4)": NormSpec.lp(2, 4),
    "l3 (dim 2)": NormSpec.lp(3, 2),
    "random SPD quadratic": NormSpec.quadratic(
        (lambda a: a @ a.T + 3 * np.eye(3))(np.random.default_rng(0).standard_normal((3, 3)))),
    "combo_sum": bundled_spec("combo_sum"),
    "complex l1": NormSpec.lp(1, 2, "complex"),
}

for name, spec in specs.items():
    v = classify(spec, SampleConfig.for_spec(spec, n_samples=5000))
    w = v.worst
    line = f"{name:22s} {v.outcome.value:24s} worst {w.probe_name:13s} {w.sup_defect:.3e}"
    if v.outcome is Outcome.NOT_INNER_PRODUCT:
        # the witness reproduces the reported defect exactly
        line += f"  recomputed {recompute(spec, v.witness):.3e}"
    print(line)

print()
print("witness for combo_sum:")
v = classify(bundled_spec("combo_sum"), SampleConfig.for_spec(bundled_spec("combo_sum")))
for k, val in v.witness.to_dict().items():
    print(f"  {k}: {val}")
