"""Closed-form family fields, Killing machinery, and reconstruction."""

import math

import numpy as np
import pytest

from elasticae import closedform as cf
from elasticae import curve as cv
from elasticae import elliptic as el
from oracles import wavelike_arc_energy_quad


def random_moduli(count, seed=0, min_multiplier_gap=0.0):
    """Admissible moduli samples; optionally bounded away from lam = 0."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w = rng.uniform(0.3, 1.0)
        m = rng.uniform(0.05, 0.95) * w
        if abs(3.0 * w - m - 1.0) < min_multiplier_gap:
            continue
        amp = rng.uniform(0.8, 2.5)
        beta = rng.uniform(-2.0, 0.0)
        sign = 1 if rng.random() < 0.5 else -1
        out.append(cf.ElasticaParams.from_moduli(m, w, amp, beta, sign))
    return out


class TestModuliFormulas:
    def test_multiplier_examples(self):
        assert cf.lambda_from_moduli(0.5, 0.5, 3.0) == pytest.approx(0.0, abs=1e-14)
        for j in (1, 3, 7):
            assert cf.lambda_from_moduli(1.0, 1.0, 2.0 * j) == pytest.approx(2.0 * j**2)
        m, amp = 0.3, 1.7
        assert cf.lambda_from_moduli(m, m, amp) == pytest.approx(amp**2 * (2 * m - 1) / (2 * m))

    def test_torsion_constant_zeroes(self):
        assert cf.torsion_constant_from_moduli(0.4, 1.0, 2.0) == 0.0
        assert cf.torsion_constant_from_moduli(0.4, 0.4, 2.0) == 0.0

    def test_torsion_constant_identity(self):
        m, w, amp = 0.0, 0.5, 1.0
        c = cf.torsion_constant_from_moduli(m, w, amp, sign=-1)
        assert c < 0.0
        # both sides of the defining identity, evaluated independently
        assert 4.0 * c**2 == pytest.approx(amp**6 / w**2 * (1 - w) * (w - m), rel=1e-14)

    def test_region_rejection(self):
        for bad in ((0.5, 0.4, 1.0), (-0.1, 0.5, 1.0), (0.2, 1.1, 1.0), (0.2, 0.5, 0.0)):
            with pytest.raises(ValueError):
                cf.ElasticaParams.from_moduli(*bad)
            with pytest.raises(ValueError):
                cf.lambda_from_moduli(*bad)

    def test_inconsistent_fields_rejected(self):
        good = cf.ElasticaParams.from_moduli(0.3, 0.8, 1.5)
        with pytest.raises(ValueError):
            cf.ElasticaParams(good.m, good.w, good.amplitude, good.c, good.beta,
                              good.lam + 0.5, good.a)

    def test_beta_normalized(self):
        m = 0.4
        period = 2.0 * el.complete_K(m)
        p = cf.ElasticaParams.from_moduli(m, m, 1.0, beta=3.7)
        assert -period <= p.beta <= 0.0
        k_raw = 1.0 * el.jacobi_sn_cn_dn(p.alpha * 0.3 + 3.7, m)[1]
        assert cf.signed_curvature_planar(p, 0.3) == pytest.approx(k_raw, abs=1e-12)


class TestFamilyClassification:
    def test_kinds(self):
        assert cf.ElasticaParams.from_moduli(0.5, 0.5, 1.0).family is cf.FamilyKind.WAVELIKE
        assert cf.ElasticaParams.from_moduli(0.5, 1.0, 1.0).family is cf.FamilyKind.ORBITLIKE
        assert cf.ElasticaParams.from_moduli(1.0, 1.0, 1.0).family is cf.FamilyKind.BORDERLINE
        assert cf.ElasticaParams.from_moduli(0.0, 1.0, 1.0).family is cf.FamilyKind.CIRCULAR
        assert cf.ElasticaParams.from_moduli(0.3, 0.8, 1.0).family is cf.FamilyKind.SPATIAL
        assert cf.ElasticaParams.from_moduli(0.0, 0.5, 1.0).family is cf.FamilyKind.SPATIAL


class TestCurvature:
    def test_wavelike_inflection(self):
        m = 0.49
        p = cf.ElasticaParams.from_moduli(m, m, 1.3)
        s_inflection = (el.complete_K(m) - p.beta) / p.alpha  # sn = 1 there
        assert cf.curvature_squared(p, s_inflection) == pytest.approx(0.0, abs=1e-12)

    def test_maximum_at_zero_phase(self):
        p = cf.ElasticaParams.from_moduli(0.3, 0.7, 2.1)  # beta = 0: sn(0) = 0
        assert cf.curvature_squared(p, 0.0) == pytest.approx(p.amplitude**2)

    def test_borderline_sech_profile(self):
        amp = 3.0
        p = cf.ElasticaParams.from_moduli(1.0, 1.0, amp, beta=0.0)
        s = np.linspace(0.0, 2.0, 9)
        expected = amp**2 / np.cosh(amp * s / 2.0) ** 2
        assert np.abs(cf.curvature_squared(p, s) - expected).max() < 1e-13

    def test_oscillation_family_signed_curvature(self):
        j = 3
        m = 1.0 / j**2
        kk = el.complete_K(m)
        p = cf.ElasticaParams.from_moduli(m, m, 2.0 * kk, beta=0.0)
        s = np.linspace(0.0, 1.0, 17)
        expected = 2.0 * kk * np.asarray(el.jacobi_sn_cn_dn(j * kk * s, m)[1])
        assert np.abs(cf.signed_curvature_planar(p, s) - expected).max() < 1e-12

    def test_concentration_member_signed_curvature(self):
        j, r = 4, 0.8
        p = cf.ElasticaParams.from_moduli(1.0, 1.0, 2.0 * j, beta=r)
        s = np.linspace(0.0, 1.0, 11)
        assert np.abs(
            cf.signed_curvature_planar(p, s) - 2.0 * j / np.cosh(j * s + r)
        ).max() < 1e-13

    def test_circular_constant(self):
        p = cf.ElasticaParams.from_moduli(0.0, 1.0, 1.7)
        assert cf.signed_curvature_planar(p, 0.9) == pytest.approx(1.7)

    def test_signed_curvature_rejects_spatial(self):
        p = cf.ElasticaParams.from_moduli(0.3, 0.8, 1.0)
        with pytest.raises(ValueError, match="planar"):
            cf.signed_curvature_planar(p, 0.0)


class TestTorsion:
    def test_planar_zero(self):
        p = cf.ElasticaParams.from_moduli(0.5, 0.5, 1.0)
        assert cf.torsion(p, 0.3) == 0.0

    def test_value_at_curvature_max(self):
        p = cf.ElasticaParams.from_moduli(0.2, 0.7, 1.4, beta=0.0)
        assert cf.torsion(p, 0.0) == pytest.approx(p.c / p.amplitude**2)

    def test_torsion_curvature_product_constant(self):
        p = cf.ElasticaParams.from_moduli(0.2, 0.6, 1.8, beta=-0.5)
        s = np.linspace(0.0, 3.0, 40)
        prod = cf.curvature_squared(p, s) * cf.torsion(p, s)
        assert np.abs(prod - p.c).max() < 1e-12 * max(1.0, abs(p.c))


class TestKilling:
    def test_borderline_magnitude(self):
        amp = 2.4
        p = cf.ElasticaParams.from_moduli(1.0, 1.0, amp)
        assert cf.killing_magnitude(p) == pytest.approx(amp**2 / 2.0)

    def test_degenerate_circular_raises(self):
        p = cf.ElasticaParams.from_moduli(0.0, 1.0, 1.0)
        assert p.a == 0.0
        with pytest.raises(ValueError, match="[Cc]ircular"):
            cf.killing_magnitude(p)
        with pytest.raises(ValueError):
            cf.cylindrical_radius(p, 0.1)

    def test_profile_constant_on_random_moduli(self):
        s = np.linspace(0.0, 1.0, 200)
        for p in random_moduli(100, seed=3):
            prof = cf.killing_a_squared_profile(p, s)
            assert prof.std() <= 1e-8 * prof.mean()
            assert prof.mean() == pytest.approx(p.a**2, rel=1e-10)


class TestCylindricalRadius:
    def test_planar_reduction(self):
        p = cf.ElasticaParams.from_moduli(0.5, 0.5, 1.2, beta=-0.3)
        s = np.linspace(0.0, 2.0, 25)
        k = cf.signed_curvature_planar(p, s)
        expected = 2.0 * np.abs(k) / p.a
        assert np.abs(cf.cylindrical_radius(p, s) - expected).max() < 1e-12

    def test_borderline_apex(self):
        amp = 5.0
        p = cf.ElasticaParams.from_moduli(1.0, 1.0, amp, beta=0.0)
        assert cf.cylindrical_radius(p, 0.0) == pytest.approx(4.0 / amp)

    def test_wavelike_touches_axis_at_inflection(self):
        m = 0.36
        p = cf.ElasticaParams.from_moduli(m, m, 1.0)
        s_inflection = (el.complete_K(m) - p.beta) / p.alpha
        assert cf.cylindrical_radius(p, s_inflection) == pytest.approx(0.0, abs=1e-6)


class TestReconstructPlanar:
    def test_circle_closes(self):
        amp = 2.0
        length = 2.0 * math.pi / amp
        p = cf.ElasticaParams.from_moduli(0.0, 1.0, amp)
        crv = cf.reconstruct_planar(p, length, 4096)
        gap = np.linalg.norm(crv.nodes[-1] - crv.nodes[0])
        assert gap <= 1e-8 * length

    def test_wavelike_energy_matches_closed_form(self, wavelike_j2, wavelike_j2_curve):
        m = wavelike_j2.m
        closed = 2.0 * el.complete_K(m) * el.cn_squared_period_integral(m)
        disc = cv.bending_energy(wavelike_j2_curve)
        assert disc == pytest.approx(closed, rel=1e-5)

    def test_invalid_inputs(self):
        p = cf.ElasticaParams.from_moduli(0.5, 0.5, 1.0)
        with pytest.raises(ValueError):
            cf.reconstruct_planar(p, -1.0, 256)
        with pytest.raises(ValueError):
            cf.reconstruct_planar(p, 1.0, 8)
        spatial = cf.ElasticaParams.from_moduli(0.3, 0.8, 1.0)
        with pytest.raises(ValueError):
            cf.reconstruct_planar(spatial, 1.0, 256)

    def test_segment_not_representable(self):
        # straight segments are excluded from the moduli region (A > 0)
        with pytest.raises(ValueError):
            cf.ElasticaParams.from_moduli(0.5, 0.5, 0.0)


class TestReconstructSpatial:
    def test_vanishing_torsion_matches_planar(self):
        m, amp, beta = 0.3, 1.2, -0.4
        delta = (2.0e-6 / amp**3) ** 2 / 0.7  # w = 1 - delta gives |c| ~ 1e-6
        spatial = cf.ElasticaParams.from_moduli(m, 1.0 - delta, amp, beta)
        assert 0 < abs(spatial.c) < 2e-6
        planar = cf.ElasticaParams.from_moduli(m, 1.0, amp, beta)
        crv_s = cf.reconstruct_spatial(spatial, 1.5, 1024)
        crv_p = cf.reconstruct_spatial(planar, 1.5, 1024)  # planar path, embedded
        assert cv.cm_distance(crv_s, crv_p, 1) <= 1e-4

    def test_curvature_profile_matches(self):
        p = cf.ElasticaParams.from_moduli(0.25, 0.75, 1.6, beta=-0.6)
        crv = cf.reconstruct_spatial(p, 2.0, 4096)
        kappa = cv.curvature_vectors(cv.resample_constant_speed(crv))
        k_disc = np.linalg.norm(kappa, axis=1)[8:-8]
        s = np.linspace(0.0, 2.0, 4097)[8:-8]
        k_true = np.sqrt(cf.curvature_squared(p, s))
        assert np.abs(k_disc / k_true - 1.0).max() <= 1e-4

    def test_radius_law_on_best_fit_axis(self):
        p = cf.ElasticaParams.from_moduli(0.35, 0.8, 1.5, beta=-0.7, torsion_sign=-1)
        crv = cf.reconstruct_spatial(p, 2.0, 8192)
        assert cf.radius_law_residual(p, crv, 2.0) <= 1e-5


class TestMultiplierRecovery:
    def test_estimate_matches_formula(self, wavelike_j2, wavelike_j2_curve):
        lam, _ = cv.estimate_multiplier(wavelike_j2_curve)
        assert lam == pytest.approx(wavelike_j2.lam, rel=1e-3)

    def test_el_residual_small(self, wavelike_j2, wavelike_j2_curve):
        _, norm = cv.el_residual(wavelike_j2_curve, wavelike_j2.lam)
        assert norm <= 1e-3
