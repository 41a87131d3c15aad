"""Elliptic integrals and Jacobi functions against independent oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elasticae import elliptic as el
from oracles import complete_K_quad, complete_E_quad, cn_squared_period_integral_quad, jacobi_mp

ORACLE_GRID = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


class TestCompleteK:
    def test_degenerate_value(self):
        assert el.complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_frozen_reference_value(self):
        # quadrature oracle value, frozen: K(0.5)
        assert el.complete_K(0.5) == pytest.approx(1.8540746773013719, abs=1e-14)

    def test_small_parameter_limit(self):
        # 2 K(m) -> pi as m -> 0
        for m in (1e-4, 1e-6, 1e-8):
            assert 2.0 * el.complete_K(m) == pytest.approx(math.pi, rel=1e-4)
        assert abs(2.0 * el.complete_K(1e-8) - math.pi) < 1e-7

    def test_quadrature_agreement(self):
        for m in ORACLE_GRID:
            assert el.complete_K(m) == pytest.approx(complete_K_quad(m), abs=1e-9)

    def test_monotone_increasing(self):
        grid = np.linspace(0.0, 0.999, 60)
        vals = [el.complete_K(m) for m in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert min(vals) >= math.pi / 2 - 1e-15

    def test_domain_errors(self):
        with pytest.raises(ValueError, match="diverges"):
            el.complete_K(1.0)
        for bad in (-0.1, 1.2, float("nan")):
            with pytest.raises(ValueError):
                el.complete_K(bad)


class TestCompleteE:
    def test_endpoint_values(self):
        assert el.complete_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert el.complete_E(1.0) == 1.0

    def test_quadrature_agreement(self):
        for m in ORACLE_GRID:
            assert el.complete_E(m) == pytest.approx(complete_E_quad(m), abs=1e-9)

    def test_monotone_decreasing(self):
        grid = np.linspace(0.0, 1.0, 60)
        vals = [el.complete_E(m) for m in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_domain_error(self):
        with pytest.raises(ValueError):
            el.complete_E(1.0 + 1e-12)


class TestJacobi:
    def test_origin(self):
        for m in (0.0, 0.37, 0.99, 1.0):
            sn, cn, dn = el.jacobi_sn_cn_dn(0.0, m)
            assert (sn, cn, dn) == (0.0, 1.0, 1.0)

    def test_trigonometric_degeneration(self):
        u = np.linspace(-8.0, 8.0, 33)
        sn, cn, dn = el.jacobi_sn_cn_dn(u, 0.0)
        assert np.abs(sn - np.sin(u)).max() < 1e-15
        assert np.abs(cn - np.cos(u)).max() < 1e-15
        assert np.abs(dn - 1.0).max() == 0.0

    def test_hyperbolic_degeneration(self):
        u = np.linspace(-6.0, 6.0, 25)
        sn, cn, dn = el.jacobi_sn_cn_dn(u, 1.0)
        assert np.abs(sn - np.tanh(u)).max() < 1e-15
        assert np.abs(cn - 1.0 / np.cosh(u)).max() < 1e-15
        assert np.abs(dn - cn).max() == 0.0

    @given(
        u=st.floats(min_value=-60.0, max_value=60.0),
        m=st.floats(min_value=0.0, max_value=1.0),
    )
    @settings(max_examples=400, deadline=None)
    def test_identities(self, u, m):
        sn, cn, dn = el.jacobi_sn_cn_dn(u, m)
        assert abs(sn * sn + cn * cn - 1.0) <= 1e-12
        assert abs(dn * dn + m * sn * sn - 1.0) <= 1e-12

    @given(
        u=st.floats(min_value=-30.0, max_value=30.0),
        m=st.floats(min_value=0.0, max_value=0.999),
    )
    @settings(max_examples=200, deadline=None)
    def test_cn_antiperiodic(self, u, m):
        period = 2.0 * el.complete_K(m)
        _, cn0, _ = el.jacobi_sn_cn_dn(u, m)
        _, cn1, _ = el.jacobi_sn_cn_dn(u + period, m)
        assert abs(cn1 + cn0) <= 1e-10

    def test_small_parameter_limit_uniform(self):
        u = np.linspace(0.0, 10.0, 501)
        _, cn, _ = el.jacobi_sn_cn_dn(u, 1e-6)
        assert np.abs(cn - np.cos(u)).max() <= 1e-4

    def test_against_mpmath(self):
        for u in (-7.3, -1.0, 0.4, 2.9, 11.7):
            for m in (0.05, 0.5, 0.95):
                got = el.jacobi_sn_cn_dn(u, m)
                ref = jacobi_mp(u, m)
                for g, r in zip(got, ref):
                    assert g == pytest.approx(r, abs=5e-12)

    def test_quarter_period(self):
        # sn(K) = 1 in this convention
        for m in (0.2, 0.6, 0.9):
            sn, cn, _ = el.jacobi_sn_cn_dn(el.complete_K(m), m)
            assert sn == pytest.approx(1.0, abs=1e-12)
            assert cn == pytest.approx(0.0, abs=1e-12)

    def test_near_one_routed_to_hyperbolic(self):
        u = 1.7
        sn, cn, dn = el.jacobi_sn_cn_dn(u, 1.0 - 1e-12)
        assert sn == pytest.approx(math.tanh(u), abs=1e-10)
        assert cn == dn


class TestCnSquaredPeriodIntegral:
    def test_small_parameter_limit(self):
        assert el.cn_squared_period_integral(0.0) == math.pi / 2
        assert el.cn_squared_period_integral(1e-9) == pytest.approx(math.pi / 2, rel=1e-8)

    def test_half_parameter_against_quadrature(self):
        assert el.cn_squared_period_integral(0.5) == pytest.approx(
            cn_squared_period_integral_quad(0.5), abs=1e-9
        )

    def test_closed_form_matches_quadrature_on_grid(self):
        for m in ORACLE_GRID:
            assert el.cn_squared_period_integral(m) == pytest.approx(
                cn_squared_period_integral_quad(m), abs=1e-9
            )

    def test_divergent_parameter_rejected(self):
        with pytest.raises(ValueError):
            el.cn_squared_period_integral(1.0)
