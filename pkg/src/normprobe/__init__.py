"""Numerical diagnostics for inner-product norms.

Evaluates ``p_y(x) = sqrt((||x+y||^2 + ||x-y||^2)/2 - 1)`` for unit ``y``,
scans its homogeneity, identity and parallelogram defects, and classifies
a declarative norm as inner-product consistent or not, with a witness.
"""

from .norms import (Combination, Lp, NormSpec, Quadratic, ScalarField, SpecError, Term,
                    WeightedLp, basis_vector, norm_eval, norms)
from .sampling import LogUniform, SampleConfig, sample_unit_sphere
from .reports import DefectReport, Witness
from .axioms import axiom_scan
from .pfunc import (PContext, RadicandError, RadicandWarning, RayProfile, p_batch,
                    p_eval, radicand, ray_profile, sandwich_check)
from .diagnostics import (CoherenceError, Outcome, Verdict, classify, degenerate_zero_probe,
                          homogeneity_defect, identity_defect, parallelogram_defect,
                          parallelogram_scan, recompute, scaling_tension_probe)
from .polarization import GramRecon, form_axiom_scan, gram_reconstruct, polar_form
from .specio import bundled_spec, bundled_spec_names, load_spec, spec_from_dict, spec_to_dict

__version__ = "0.1.0"
