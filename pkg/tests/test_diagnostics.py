import math

import numpy as np
import pytest

from normprobe import NormSpec, PContext, SampleConfig
from normprobe.diagnostics import (CoherenceError, Outcome, classify, degenerate_zero_probe,
                                   homogeneity_defect, homogeneity_defect_at, identity_defect,
                                   identity_defect_at, parallelogram_defect,
                                   parallelogram_scan, recompute, scaling_tension_probe,
                                   unit_ys)
from normprobe.pfunc import sandwich_check
from normprobe.reports import DefectReport, Witness, merge_reports
from normprobe.sampling import sample_unit_sphere

from conftest import BUILTIN, BUILTIN_IDS, random_spd

L1, L2, LINF = NormSpec.lp(1, 2), NormSpec.lp(2, 2), NormSpec.lp("inf", 2)
E1, E2 = np.eye(2)


def cfg_for(spec, n=2000, seed=42):
    return SampleConfig.for_spec(spec, n_samples=n, seed=seed)


# -- pointwise values --------------------------------------------------------

def test_l1_homogeneity_hand_value():
    # radicands 8 and 3 at 2 e2 and e2
    raw = homogeneity_defect_at(PContext(L1, E1), E2, 2.0)
    assert raw == pytest.approx(abs(math.sqrt(8) - 2 * math.sqrt(3)), abs=1e-14)
    assert raw == pytest.approx(0.6357, abs=1e-4)


def test_unit_scalar_contributes_nothing(rng):
    ctx = PContext(NormSpec.lp(1.5, 3), [1.0, 2.0, 3.0])
    for x in rng.standard_normal((20, 3)):
        assert homogeneity_defect_at(ctx, x, 1.0) == 0.0


def test_l1_identity_hand_value():
    assert identity_defect_at(PContext(L1, E1), E2) == pytest.approx(math.sqrt(3) - 1,
                                                                      abs=1e-15)
    assert identity_defect_at(PContext(L1, E1), [0.0, 0.0]) == 0.0


def test_parallelogram_hand_values(rng):
    assert parallelogram_defect(L1, E1, E2) == 4.0
    for x, y in rng.standard_normal((20, 2, 2)) * 10:
        assert parallelogram_defect(L2, x, y) <= 1e-9 * max(1, 2 * x @ x + 2 * y @ y)
        assert parallelogram_defect(L1, x, x) <= 1e-12 * max(1.0, abs(x).sum() ** 2)


# -- scans -------------------------------------------------------------------

def test_euclidean_scans_are_clean():
    spec = NormSpec.lp(2, 4)
    cfg = cfg_for(spec, 5000)
    ctx = PContext(spec, sample_unit_sphere(spec, cfg))
    assert homogeneity_defect(ctx, cfg).sup_defect <= 1e-9
    assert identity_defect(ctx, cfg).sup_defect <= 1e-9
    assert parallelogram_scan(spec, cfg).sup_defect <= 1e-9


def test_identity_defect_bounded_by_one_for_any_norm():
    for spec in BUILTIN:
        cfg = cfg_for(spec)
        ctx = PContext(spec, sample_unit_sphere(spec, cfg))
        r = identity_defect(ctx, cfg)
        assert r.raw_sup <= 1 + 1e-9
        assert r.sup_defect <= r.raw_sup + 1e-15


def test_l1_scans_find_defects():
    cfg = cfg_for(L1)
    ctx = PContext(L1, E1)
    for r in (homogeneity_defect(ctx, cfg), identity_defect(ctx, cfg),
              parallelogram_scan(L1, cfg)):
        assert r.sup_defect > 0.05
        assert r.witness is not None and r.exceeds


@pytest.mark.parametrize("spec", BUILTIN, ids=BUILTIN_IDS)
def test_witnesses_recompute(spec):
    cfg = cfg_for(spec, 3000)
    ctx = PContext(spec, sample_unit_sphere(spec, cfg, index=2))
    reports = [homogeneity_defect(ctx, cfg), identity_defect(ctx, cfg),
               parallelogram_scan(spec, cfg)]
    for r in reports:
        if r.witness is None:
            continue
        w = Witness.from_dict(r.witness.to_dict())  # survives JSON encoding
        assert abs(recompute(spec, w) - r.sup_defect) <= 1e-12, r.probe_name


def test_scan_reports_are_bit_reproducible_across_workers():
    spec = NormSpec.lp(3, 3, "complex")
    cfg = cfg_for(spec, 9000, seed=7)
    ctx = PContext(spec, sample_unit_sphere(spec, cfg))
    a = homogeneity_defect(ctx, cfg, workers=1).to_dict()
    b = homogeneity_defect(ctx, cfg, workers=4).to_dict()
    c = homogeneity_defect(ctx, cfg, workers=1).to_dict()
    assert a == b == c
    assert sandwich_check(ctx, cfg, workers=3).to_dict() == sandwich_check(ctx, cfg).to_dict()


def test_different_seeds_give_different_samples():
    cfg_a, cfg_b = cfg_for(L1, seed=1), cfg_for(L1, seed=2)
    ra = parallelogram_scan(L1, cfg_a)
    rb = parallelogram_scan(L1, cfg_b)
    assert ra.witness.x.tobytes() != rb.witness.x.tobytes()


# -- degenerate zeros ----------------------------------------------------------

def test_linf_has_degenerate_zero():
    r = degenerate_zero_probe(PContext(LINF, [1.0, 0.0]), cfg_for(LINF, 10_000))
    assert r.witness is not None
    x = r.witness.x
    assert np.abs(x).max() >= 0.4
    assert r.details["p_value"] <= 1e-8
    assert abs(x[0]) <= 1e-6 and abs(x[1]) <= 1.0 + 1e-12
    assert recompute(LINF, r.witness) == r.sup_defect


@pytest.mark.parametrize("spec", [L2, L1], ids=["l2", "l1"])
def test_no_degenerate_zero_at_basis_y(spec):
    r = degenerate_zero_probe(PContext(spec, E1), cfg_for(spec, 10_000))
    assert r.witness is None and r.sup_defect == 0.0
    assert r.details["min_ratio"] >= 0.05


def test_l2_ratio_is_one():
    r = degenerate_zero_probe(PContext(L2, E1), cfg_for(L2, 1000))
    assert r.details["min_ratio"] == pytest.approx(1.0, abs=1e-9)


# -- scaling tension ---------------------------------------------------------

def test_scaling_tension_euclidean():
    s = scaling_tension_probe(PContext(L2, E1), [0.6, 0.8])
    assert s.sup_abs_defect <= 1e-9 and s.trend == "zero"


def test_scaling_tension_l1():
    s = scaling_tension_probe(PContext(L1, E1), E2)
    assert s.bounded and s.vanishing_slope and s.trend == "increasing"
    assert s.final_defect == pytest.approx(1.0, abs=1e-3)
    assert s.sup_abs_defect <= 1 + 1e-9


# -- classification ------------------------------------------------------------

def test_unit_ys_contains_basis():
    spec = NormSpec.weighted(2, [4.0, 1.0, 9.0])
    ys = unit_ys(spec, cfg_for(spec), 3)
    assert len(ys) == 6
    np.testing.assert_allclose(ys[3], [0.5, 0, 0])


def test_classify_l2_dim4():
    spec = NormSpec.lp(2, 4)
    v = classify(spec, cfg_for(spec, 10_000))
    assert v.outcome is Outcome.INNER_PRODUCT_CONSISTENT
    assert all(r.sup_defect <= 1e-9 for r in v.evidence)
    assert v.witness is None
    assert [r.probe_name for r in v.evidence] == ["homogeneity", "identity", "parallelogram"]


def test_classify_l1_dim2():
    v = classify(L1, cfg_for(L1, 1000))
    assert v.outcome is Outcome.NOT_INNER_PRODUCT
    assert v.worst.sup_defect >= 0.5
    assert v.witness is not None
    assert abs(recompute(L1, v.witness) - v.worst.sup_defect) <= 1e-12


def test_classify_random_quadratic_dim5(rng):
    spec = NormSpec.quadratic(random_spd(rng, 5))
    assert classify(spec, cfg_for(spec, 5000)).outcome is Outcome.INNER_PRODUCT_CONSISTENT


def test_classify_complex_spaces(rng):
    spec = NormSpec.quadratic(random_spd(rng, 3, complex_=True))
    assert classify(spec, cfg_for(spec)).outcome is Outcome.INNER_PRODUCT_CONSISTENT
    spec = NormSpec.lp(1, 2, "complex")
    assert classify(spec, cfg_for(spec)).outcome is Outcome.NOT_INNER_PRODUCT


@pytest.mark.parametrize("p", [1, 1.5, 3, math.inf])
@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5])
def test_non_euclidean_lp_is_falsified(p, seed):
    for dim in (2, 3):
        spec = NormSpec.lp(p, dim)
        v = classify(spec, cfg_for(spec, 1000, seed))
        assert v.outcome is Outcome.NOT_INNER_PRODUCT


def test_verdict_invariants():
    for spec in (L1, L2, NormSpec.lp(3, 3)):
        v = classify(spec, cfg_for(spec, 1000))
        if v.outcome is Outcome.NOT_INNER_PRODUCT:
            assert any(r.sup_defect > v.threshold and r.witness is not None for r in v.evidence)
        else:
            assert all(r.sup_defect <= v.threshold for r in v.evidence)


def test_homogeneity_failure_implies_identity_failure():
    for spec in BUILTIN:
        v = classify(spec, cfg_for(spec, 1000))
        h, i, _ = v.evidence
        if h.sup_defect > v.threshold:
            assert i.sup_defect > 0


def test_classify_raises_on_incoherent_defects(monkeypatch):
    import normprobe.diagnostics as diag

    fake = DefectReport("parallelogram", 1.0, 10, 1e-6, 0)
    monkeypatch.setattr(diag, "parallelogram_scan", lambda *a, **k: fake)
    with pytest.raises(CoherenceError):
        diag.classify(L2, cfg_for(L2, 100))


def test_verdict_serializes():
    v = classify(L1, cfg_for(L1, 500))
    d = v.to_dict()
    assert d["outcome"] == "NotInnerProduct"
    assert d["witness_probe"] == v.worst.probe_name
    assert all("witness" in r for r in d["evidence"])


def test_merge_reports_keeps_the_worst():
    a = DefectReport("h", 0.1, 10, 1e-6, 1, details={"n_violations": 2, "min_ratio": 0.5})
    b = DefectReport("h", 0.3, 5, 1e-6, 1, details={"n_violations": 1, "min_ratio": 0.7})
    m = merge_reports([a, b])
    assert m.sup_defect == 0.3 and m.n_samples == 15
    assert m.details["n_violations"] == 3 and m.details["min_ratio"] == 0.5
