import pytest

from bungee import catalog
from bungee import extcomplex as xc
from bungee import verify as V
from bungee.extcomplex import finite
from bungee.grid import Viewport, classify_grid
from bungee.funcexpr import evaluate
from bungee.orbit import DepthStats, OrbitClass, OrbitConfig, OrbitDiagnostics, Semigroup, classify_points

RECIP = Semigroup.from_texts(["1/z^2"])
EXP = Semigroup.from_texts(["exp(z)"])
SQUARE = Semigroup.from_texts(["z^2"])
POWERS = Semigroup.from_texts(["z^2", "z^3"])
EXP_SEMI = catalog.exp_semigroup().semigroup
EXP_FP = complex(0.318131505204764, 1.337235701430689)


def pts(*zs):
    return V.SampleSet(tuple(xc.from_complex(complex(z)) for z in zs), 0, "explicit")


def box(bounds, n=300, seed=7, H=None):
    return V.sample_region(bounds, n, seed, V.find_poles(H) if H else ())


# ---------------------------------------------------------------- sampling


def test_samples_reproducible():
    a = V.sample_region((-2, -2, 2, 2), 50, 3)
    b = V.sample_region((-2, -2, 2, 2), 50, 3)
    c = V.sample_region((-2, -2, 2, 2), 50, 4)
    assert a == b and a != c
    assert len(a) == 50 and a.as_dict()["seed"] == 3


def test_annulus_moduli_stay_in_bands():
    s = V.sample_annulus([(0.1, 0.9), (1.1, 10.0)], 400, 1)
    for z in s.points:
        r = abs(z)
        assert 0.1 <= r <= 0.9 or 1.1 <= r <= 10.0


def test_circle_samples_on_circle():
    for z in V.sample_circle(50, 2).points:
        assert abs(abs(z) - 1.0) < 1e-15


def test_pole_avoidance():
    poles = V.find_poles(RECIP)
    assert len(poles) == 1 and abs(poles[0]) < 1e-8
    s = V.sample_region((-0.01, -0.01, 0.01, 0.01), 100, 0, poles)
    assert min(abs(z) for z in s.points) >= V.POLE_EXCLUSION
    mob = Semigroup.from_texts(["(z-1)/(z+1)"])
    assert any(abs(p + 1) < 1e-8 for p in V.find_poles(mob))
    assert V.find_poles(EXP) == []


# ---------------------------------------------------------------- verdict type


def test_verdict_invariants():
    v = V.check_partition(RECIP, box((-2, -2, 2, 2), 100, H=RECIP))
    d = v.as_dict()
    assert v.resolved <= v.total
    assert d["passed"] == (v.violations == 0)
    assert d["unresolved"] == v.total - v.resolved
    assert len(v.exemplars) <= V.MAX_EXEMPLARS


def test_verdicts_reproducible():
    S = box((-3, -3, 3, 3), 100)
    a = V.check_forward_invariance(EXP_SEMI, S).as_dict()
    b = V.check_forward_invariance(EXP_SEMI, S).as_dict()
    assert a == b


# ---------------------------------------------------------------- partition


@pytest.mark.parametrize("H,bounds", [(RECIP, (-2, -2, 2, 2)), (EXP, (-3, -3, 3, 3)), (POWERS, (-1.5, -1.5, 1.5, 1.5))])
def test_partition_passes(H, bounds):
    v = V.check_partition(H, box(bounds, 500, H=H))
    assert v.passed and v.total == 500


def test_partition_detects_a_broken_classifier(monkeypatch):
    def liar(H, z, cfg=OrbitConfig()):
        stats = DepthStats((1.0,), (1.0,), (0,), (1,))
        return OrbitDiagnostics(OrbitClass.BUNGEE, stats)

    monkeypatch.setattr(V, "classify_point", liar)
    v = V.check_partition(SQUARE, box((-1, -1, 1, 1), 20))
    assert not v.passed and v.violations == 20
    assert len(v.exemplars) == V.MAX_EXEMPLARS


# ---------------------------------------------------------------- set identities


def test_union_single_generator_trivial():
    v = V.check_bungee_union(RECIP, box((-2, -2, 2, 2), 100, H=RECIP), max_word_len=2)
    assert v.passed
    assert v.extras["subset_beyond_tested"] == 0


def test_union_exp_semigroup_superset_direction():
    assert V.check_bungee_union(EXP_SEMI, box((-3, -3, 3, 3)), max_word_len=3).passed


def test_union_duplicate_generators_identical():
    S = box((-2, -2, 2, 2), 100, H=RECIP)
    a = V.check_bungee_union(RECIP, S, max_word_len=1)
    b = V.check_bungee_union(Semigroup.from_texts(["1/z^2", "1/z^2"]), S, max_word_len=1)
    assert (a.total, a.resolved, a.violations) == (b.total, b.resolved, b.violations)


def test_union_word_length_limit():
    with pytest.raises(ValueError):
        V.check_bungee_union(RECIP, pts(0.5), max_word_len=5)


def test_filled_intersection_examples():
    near = box((EXP_FP.real - 0.5, EXP_FP.imag - 0.5, EXP_FP.real + 0.5, EXP_FP.imag + 0.5), 200)
    assert V.check_filled_intersection(EXP_SEMI, near).passed
    assert V.check_filled_intersection(SQUARE, box((-1.5, -1.5, 1.5, 1.5), 100)).passed
    small = V.sample_annulus([(0.0, 0.5)], 100, 5)
    v = V.check_filled_intersection(POWERS, small)
    assert v.passed and v.resolved == 100
    assert set(classify_points(POWERS, small.points)) == {OrbitClass.BOUNDED}


def test_escaping_intersection_examples():
    v = V.check_escaping_intersection(EXP, pts(5))
    assert v.passed and v.resolved == 1
    assert V.check_escaping_intersection(POWERS, V.sample_annulus([(2.0, 5.0)], 100, 1)).passed
    assert V.check_escaping_intersection(EXP_SEMI, box((3, -3, 6, 3))).passed


def test_forward_invariance_examples():
    for H, z in ((RECIP, 0.5), (SQUARE, 0.3), (EXP, 10)):
        v = V.check_forward_invariance(H, pts(z))
        assert v.passed and v.resolved == 1, (H.texts, z)
    assert "backward" in V.check_forward_invariance(RECIP, pts(0.5)).extras


def test_non_commuting_semigroup_is_informational():
    H = Semigroup.from_texts(["z^2", "z + 1"])
    v = V.check_forward_invariance(H, box((-1, -1, 1, 1), 30))
    assert v.informational
    assert not V.check_forward_invariance(EXP_SEMI, pts(0.1)).informational  # declared abelian


# ---------------------------------------------------------------- conjugacy


def test_conjugate_expression():
    g = V.conjugate(RECIP.generators[0], finite(2.0), xc.ZERO)
    z = finite(0.7, 0.2)
    expected = 2 * (1 / ((0.7 + 0.2j) / 2) ** 2)
    assert abs(evaluate(g, z).to_complex() - expected) < 1e-12


@pytest.mark.parametrize(
    "H,a,b,bounds",
    [
        (RECIP, 1.0, 0.0, (-2, -2, 2, 2)),
        (RECIP, 2.0, 0.0, (-2, -2, 2, 2)),
        (EXP, 1.0, 1.0, (-3, -3, 3, 3)),
    ],
)
def test_conjugacy(H, a, b, bounds):
    v = V.check_conjugacy(H.generators[0], finite(a), finite(b), box(bounds, 300, H=H))
    assert v.passed and v.resolved > 250


def test_conjugacy_rejects_degenerate_map():
    with pytest.raises(ValueError):
        V.check_conjugacy(RECIP.generators[0], xc.ZERO, xc.ZERO, pts(0.5))


# ---------------------------------------------------------------- fixed points


def test_exp_fixed_point():
    recs = V.find_repelling_fixed_points(EXP, 1, Viewport.from_bounds(-1, 0, 3, 3, 1, 1), 64)
    near = [r for r in recs if abs(r.location.to_complex() - EXP_FP) < 1e-6]
    assert len(near) == 1
    r = near[0]
    assert r.residual <= 1e-9 and r.repelling
    assert r.multiplier == pytest.approx(abs(EXP_FP), rel=1e-9)
    assert r.multiplier > 1.37


def test_square_fixed_points():
    recs = V.find_repelling_fixed_points(SQUARE, 1, Viewport.from_bounds(-2, -2, 2, 2, 1, 1), 64)
    locs = sorted((round(r.location.re, 9) + 0.0, round(r.multiplier, 9), r.repelling) for r in recs)
    assert locs == [(0.0, 0.0, False), (1.0, 2.0, True)]


def test_reciprocal_square_fixed_points():
    recs = V.find_repelling_fixed_points(RECIP, 1, Viewport.from_bounds(-2, -2, 2, 2, 1, 1), 64)
    one = [r for r in recs if abs(r.location.to_complex() - 1) < 1e-9]
    assert len(one) == 1 and one[0].multiplier == pytest.approx(2.0) and one[0].repelling
    assert len(recs) == 3  # the cube roots of unity


def test_fixed_point_word_limit():
    H = Semigroup.from_texts(["z^2", "z^3", "z+1"])
    with pytest.raises(ValueError):
        V.find_repelling_fixed_points(H, 4, Viewport(0j, 1, 1, 1, 1))


# ---------------------------------------------------------------- boundary density


def test_density_square_uses_class_boundary():
    res = V.fixed_point_density(SQUARE, Viewport(0j, 2.0, 2.0, 256, 256), OrbitConfig(), "z^2")
    v = res.verdicts[0][1]
    assert v.passed and v.resolved == 1 and v.extras["fallback"]


def test_density_reciprocal_square_512():
    res = V.fixed_point_density(RECIP, Viewport(0j, 2.0, 2.0, 512, 512), OrbitConfig(), "1/z^2")
    v = res.verdicts[0][1]
    assert v.passed and v.resolved == 3
    assert max(v.extras["distances"]) <= 2.0


def test_density_exp_local_raster():
    recs = V.find_repelling_fixed_points(EXP, 1, Viewport.from_bounds(-1, 0, 3, 3, 1, 1), 64)
    vp = Viewport(EXP_FP, 0.01, 0.01, 512, 512)
    raster, depth = V.density_raster(EXP, vp, recs, OrbitConfig())
    assert depth == 40
    v = V.check_boundary_density(EXP, raster, recs)
    assert v.passed and v.resolved == 1


def test_density_flags_empty_mask():
    r = classify_grid(SQUARE, Viewport(0j, 0.2, 0.2, 8, 8))  # all Bounded
    rec = V.FixedPointRecord((0,), finite(0.05), 0.0, 3.0)
    v = V.check_boundary_density(SQUARE, r, [rec])
    assert not v.passed and v.violations == 1


# ---------------------------------------------------------------- suites


def test_builtin_suite_passes():
    res = V.builtin_suite(seed=7, samples=150)
    assert res.passed, res.lines()
    names = {v.name for _, v in res.verdicts}
    assert {"filled-set-agreement", "bungee-set-agreement", "boundary-density", "conjugacy"} <= names


def test_unknown_suite():
    with pytest.raises(ValueError):
        V.run_suite("nope", SQUARE)
