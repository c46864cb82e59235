import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normprobe import NormSpec, SampleConfig, SpecError, axiom_scan, norm_eval, norms
from normprobe.norms import Combination, Lp, Quadratic, Term, WeightedLp, as_vector
from normprobe.sampling import (BLOCK_SIZE, LogUniform, block_rng, draw_scalars,
                                draw_vectors, sample_unit_sphere)
from normprobe.specio import (bundled_spec, bundled_spec_names, spec_from_dict,
                              spec_to_dict)

from conftest import BUILTIN, BUILTIN_IDS, oracle_norm, random_spd


def test_l2_three_four_five():
    assert norm_eval(NormSpec.lp(2, 2), [3, 4]) == 5.0


def test_linf_is_max_modulus():
    assert norm_eval(NormSpec.lp(math.inf, 2), [1, -2]) == 2.0
    assert norm_eval(NormSpec.lp("inf", 2, "complex"), [3 + 4j, 1]) == 5.0


@pytest.mark.parametrize("spec", BUILTIN, ids=BUILTIN_IDS)
def test_zero_vector_has_zero_norm(spec):
    assert norm_eval(spec, np.zeros(spec.dim)) == 0.0


@pytest.mark.parametrize("spec", BUILTIN, ids=BUILTIN_IDS)
def test_batch_matches_plain_python_oracle(spec, rng):
    X = rng.standard_normal((50, spec.dim)) * 10.0
    if spec.field.value == "complex":
        X = X + 1j * rng.standard_normal((50, spec.dim))
    got = norms(spec, X)
    want = np.array([oracle_norm(spec, list(x)) for x in X])
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=0)


def test_general_p_survives_extreme_scales():
    spec = NormSpec.lp(3, 2)
    assert norm_eval(spec, [1e200, 1e200]) == pytest.approx(1e200 * 2 ** (1 / 3), rel=1e-14)
    assert norm_eval(spec, [1e-200, 0]) == pytest.approx(1e-200, rel=1e-14)


def test_quadratic_identity_gram_is_l2(rng):
    q = NormSpec.quadratic(np.eye(4))
    X = rng.standard_normal((20, 4))
    np.testing.assert_allclose(norms(q, X), norms(NormSpec.lp(2, 4), X), rtol=1e-14)


@pytest.mark.parametrize(
    "make, message",
    [
        (lambda: NormSpec.lp(0.5, 2), "p must be ≥ 1"),
        (lambda: NormSpec.weighted(2, [1.0, 0.0]), "weights"),
        (lambda: NormSpec.quadratic([[1.0, 0.0], [0.0, -1.0]]), "positive definite"),
        (lambda: NormSpec.quadratic([[1.0, 0.5], [0.0, 1.0]]), "symmetric"),
        (lambda: NormSpec(0, "real", Lp(2)), "dim"),
        (lambda: NormSpec(2, "quaternion", Lp(2)), "field"),
        (lambda: NormSpec(2, "real", Combination(())), "at least one"),
        (lambda: NormSpec(3, "real", WeightedLp(2, [1.0, 1.0])), "weights"),
        (lambda: NormSpec.combine([(-1.0, NormSpec.lp(1, 2))]), "coefficient"),
        (lambda: NormSpec.combine([(1.0, NormSpec.lp(1, 2)), (1.0, NormSpec.lp(1, 3))]),
         "share dim"),
    ],
)
def test_construction_errors(make, message):
    with pytest.raises(SpecError, match=message):
        make()


def test_vector_validation():
    spec = NormSpec.lp(2, 2)
    with pytest.raises(SpecError, match="dim"):
        norm_eval(spec, [1.0, 2.0, 3.0])
    with pytest.raises(SpecError, match="complex"):
        norm_eval(spec, [1j, 0])
    with pytest.raises(SpecError, match="finite"):
        norm_eval(spec, [np.nan, 0])
    with pytest.raises(SpecError, match="finite"):
        norm_eval(spec, [np.inf, 0])
    # real input is promoted on a complex space
    assert as_vector(NormSpec.lp(2, 2, "complex"), [1, 0]).dtype == np.complex128


@pytest.mark.parametrize("spec", BUILTIN, ids=BUILTIN_IDS)
def test_axiom_scan_finds_no_defects(spec):
    reports = axiom_scan(spec, SampleConfig.for_spec(spec, n_samples=3000))
    assert [r.probe_name for r in reports] == ["norm_triangle", "norm_homogeneity"]
    for r in reports:
        assert r.sup_defect <= 1e-9, r.to_dict()


def test_axiom_scan_l1_large_run():
    spec = NormSpec.lp(1, 4)
    for r in axiom_scan(spec, SampleConfig.for_spec(spec, n_samples=10_000)):
        assert r.sup_defect <= 1e-10


def test_axiom_scan_never_runs_for_indefinite_gram():
    with pytest.raises(SpecError):
        spec = NormSpec.quadratic(np.diag([1.0, -1.0]))
        axiom_scan(spec, SampleConfig.for_spec(spec))


@pytest.mark.parametrize("spec", BUILTIN, ids=BUILTIN_IDS)
def test_unit_sphere_sample_is_unit(spec):
    cfg = SampleConfig.for_spec(spec, seed=3)
    for k in range(5):
        y = sample_unit_sphere(spec, cfg, index=k)
        assert abs(norm_eval(spec, y) - 1.0) <= 1e-12


def test_unit_sphere_sample_is_deterministic():
    spec = NormSpec.lp(1.5, 5)
    cfg = SampleConfig.for_spec(spec, seed=99)
    a = sample_unit_sphere(spec, cfg)
    b = sample_unit_sphere(spec, SampleConfig.for_spec(spec, seed=99))
    assert a.tobytes() == b.tobytes()
    assert a.tobytes() != sample_unit_sphere(spec, cfg, index=1).tobytes()


def test_unit_sphere_one_dimensional():
    spec = NormSpec.weighted(3, [8.0])
    y = sample_unit_sphere(spec, SampleConfig.for_spec(spec))
    unit = 1.0 / norm_eval(spec, [1.0])
    assert y[0] == pytest.approx(unit) or y[0] == pytest.approx(-unit)


def test_sample_config_validation():
    with pytest.raises(SpecError, match="n_samples must be positive"):
        SampleConfig(dim=2, n_samples=0)
    with pytest.raises(SpecError, match="seed"):
        SampleConfig(dim=2, seed=-1)
    with pytest.raises(SpecError):
        LogUniform(2.0, 1.0)
    with pytest.raises(SpecError, match="does not match"):
        SampleConfig(dim=3).check(NormSpec.lp(2, 2))


def test_sample_config_round_trip():
    cfg = SampleConfig(dim=3, field="complex", n_samples=17, seed=2**64 - 1,
                       radius_law=LogUniform(0.5, 2.0))
    assert SampleConfig.from_dict(cfg.to_dict()) == cfg


def test_block_streams_are_reproducible_and_distinct():
    spec = NormSpec.lp(2, 3, "complex")
    cfg = SampleConfig.for_spec(spec)
    a = draw_vectors(spec, cfg, block_rng(1, "s", 0), BLOCK_SIZE)
    b = draw_vectors(spec, cfg, block_rng(1, "s", 0), BLOCK_SIZE)
    c = draw_vectors(spec, cfg, block_rng(1, "s", 1), BLOCK_SIZE)
    d = draw_vectors(spec, cfg, block_rng(1, "t", 0), BLOCK_SIZE)
    assert a.tobytes() == b.tobytes()
    assert a.tobytes() != c.tobytes() and a.tobytes() != d.tobytes()


def test_sampled_radii_follow_the_law(rng):
    spec = NormSpec.lp(1, 4)
    cfg = SampleConfig.for_spec(spec)
    X = draw_vectors(spec, cfg, rng, 20_000)
    r = norms(spec, X)
    assert r.min() >= 1e-2 * (1 - 1e-12) and r.max() <= 1e3 * (1 + 1e-12)
    # log-uniform: the median sits near the geometric mean of the bounds
    assert abs(np.log10(np.median(r)) - 0.5) < 0.1


def test_scalars_have_signs_and_phases(rng):
    real = draw_scalars(SampleConfig(dim=1), rng, 1000)
    assert (real < 0).any() and (real > 0).any()
    cplx = draw_scalars(SampleConfig(dim=1, field="complex"), rng, 1000)
    assert np.abs(cplx.imag).max() > 1e-3
    assert np.abs(cplx).min() >= 1e-3 * (1 - 1e-12)


@settings(max_examples=60, deadline=None)
@given(
    p=st.one_of(st.floats(1.0, 8.0), st.just(math.inf)),
    coords=st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=6),
)
def test_norm_is_even(p, coords):
    spec = NormSpec.lp(p, len(coords))
    x = np.array(coords)
    assert abs(norm_eval(spec, -x) - norm_eval(spec, x)) <= 1e-12 * max(1.0, norm_eval(spec, x))


@settings(max_examples=60, deadline=None)
@given(
    p=st.one_of(st.floats(1.0, 8.0), st.just(math.inf)),
    xy=st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=1,
                max_size=6),
    lam=st.floats(-1e3, 1e3),
)
def test_triangle_and_homogeneity(p, xy, lam):
    spec = NormSpec.lp(p, len(xy))
    x = np.array([a for a, _ in xy])
    y = np.array([b for _, b in xy])
    nx, ny = norm_eval(spec, x), norm_eval(spec, y)
    assert norm_eval(spec, x + y) <= nx + ny + 1e-9 * max(1.0, nx + ny)
    assert abs(norm_eval(spec, lam * x) - abs(lam) * nx) <= 1e-9 * max(1.0, abs(lam) * nx)


# -- JSON spec format -------------------------------------------------------

@pytest.mark.parametrize("spec", BUILTIN, ids=BUILTIN_IDS)
def test_spec_json_round_trip(spec, rng):
    back = spec_from_dict(spec_to_dict(spec))
    X = rng.standard_normal((10, spec.dim))
    np.testing.assert_array_equal(norms(spec, X), norms(back, X))
    assert spec_to_dict(back) == spec_to_dict(spec)


def test_bundled_specs_load():
    names = bundled_spec_names()
    assert set(names) >= {"l1_dim2", "l2_dim4", "l2_dim8", "linf_dim2", "quadratic_diag41",
                          "combo_sum"}
    for n in names:
        bundled_spec(n)
    assert math.isinf(bundled_spec("linf_dim2").kind.p)
    np.testing.assert_array_equal(bundled_spec("quadratic_diag41").kind.gram, np.diag([4.0, 1.0]))


@pytest.mark.parametrize(
    "doc, field_name",
    [
        ({"dim": 2, "kind": {"type": "lp", "p": 0.5}}, "p must be ≥ 1"),
        ({"dim": 2, "kind": {"type": "lp"}}, "kind.p"),
        ({"dim": 2, "kind": {"type": "lp", "p": "big"}}, "kind.p"),
        ({"kind": {"type": "lp", "p": 2}}, "dim"),
        ({"dim": 2, "kind": {"type": "weird"}}, "kind.type"),
        ({"dim": 2, "kind": {"type": "weighted_lp", "p": 2, "weights": [1]}}, "weights"),
        ({"dim": 2, "kind": {"type": "quadratic", "gram": [[1, 0]]}}, "gram"),
        ({"dim": 2, "kind": {"type": "quadratic", "gram": [[1, 0], [0, -2]]}}, "gram"),
        ({"dim": 2, "kind": {"type": "combination", "terms": []}}, "terms"),
        ({"dim": 2, "kind": {"type": "combination",
                             "terms": [{"coefficient": 0, "norm": {"kind": {"type": "lp", "p": 1}}}]}},
         "terms[0].coefficient"),
        ({"dim": 2, "field": "octonion", "kind": {"type": "lp", "p": 2}}, "field"),
    ],
)
def test_spec_schema_errors_name_the_field(doc, field_name):
    with pytest.raises(SpecError) as info:
        spec_from_dict(doc)
    assert field_name in str(info.value)


def test_complex_gram_json():
    g = random_spd(np.random.default_rng(1), 2, complex_=True)
    spec = NormSpec.quadratic(g)
    doc = spec_to_dict(spec)
    assert doc["field"] == "complex"
    assert isinstance(doc["kind"]["gram"][0][1], list)
    np.testing.assert_array_equal(spec_from_dict(doc).kind.gram, spec.kind.gram)


def test_term_and_kind_equality():
    assert Lp(2) == Lp(2.0)
    assert WeightedLp(2, [1, 2]) == WeightedLp(2, np.array([1.0, 2.0]))
    assert Quadratic(np.eye(2)) == Quadratic(np.eye(2))
    assert Term(1, NormSpec.lp(1, 2)).coefficient == 1.0
