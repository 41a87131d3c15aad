"""Backend equivalence and convergence-order checks for the hot kernels."""

import numpy as np
import pytest

from elasticae._kernels import available_backends

BACKENDS = available_backends()


def test_extension_built():
    # the compiled extension should be present in a normal install; the
    # fallback keeps the package usable without it
    assert "fallback" in BACKENDS
    if "ext" not in BACKENDS:
        pytest.skip("compiled extension not built; fallback-only environment")


@pytest.mark.skipif("ext" not in BACKENDS, reason="compiled extension not built")
class TestBackendAgreement:
    def test_complete_integrals(self):
        ext, fb = BACKENDS["ext"], BACKENDS["fallback"]
        for m in (0.0, 1e-8, 0.1, 0.5, 0.9, 0.999, 1 - 1e-9):
            assert ext.complete_k(m) == pytest.approx(fb.complete_k(m), abs=1e-15)
            assert ext.complete_e(m) == pytest.approx(fb.complete_e(m), abs=1e-15)

    def test_jacobi(self):
        ext, fb = BACKENDS["ext"], BACKENDS["fallback"]
        u = np.linspace(-25.0, 25.0, 401)
        for m in (1e-18, 0.3, 0.97, 1 - 1e-11):
            for a, b in zip(ext.jacobi_sn_cn_dn(u, m), fb.jacobi_sn_cn_dn(u, m)):
                assert np.abs(np.asarray(a) - np.asarray(b)).max() < 1e-13

    def test_planar_rk4(self):
        ext, fb = BACKENDS["ext"], BACKENDS["fallback"]
        s = np.linspace(0.0, 2.0, 2 * 512 + 1)
        k = 1.5 * np.cos(3.0 * s)
        th_e, nodes_e = ext.planar_rk4(k, 2.0 / 512)
        th_f, nodes_f = fb.planar_rk4(k, 2.0 / 512)
        assert np.abs(th_e - th_f).max() < 1e-13
        assert np.abs(nodes_e - nodes_f).max() < 1e-13

    def test_frenet_rk4(self):
        ext, fb = BACKENDS["ext"], BACKENDS["fallback"]
        s = np.linspace(0.0, 2.0, 2 * 256 + 1)
        k = 1.0 + 0.3 * np.sin(2.0 * s)
        t = 0.4 * np.cos(s)
        out_e = ext.frenet_rk4(k, t, 2.0 / 256)
        out_f = fb.frenet_rk4(k, t, 2.0 / 256)
        for a, b in zip(out_e, out_f):
            assert np.abs(a - b).max() < 1e-13


def test_planar_rk4_fourth_order():
    # integrate theta' = cos(2s) against the exact antiderivatives
    fb = BACKENDS["fallback"]
    errors = []
    for n in (64, 128, 256):
        s = np.linspace(0.0, 1.0, 2 * n + 1)
        theta, nodes = fb.planar_rk4(np.cos(2.0 * s), 1.0 / n)
        exact = 0.5 * np.sin(2.0 * np.linspace(0.0, 1.0, n + 1))
        errors.append(np.abs(theta - exact).max())
    assert errors[0] / errors[1] > 12.0  # ~16x per doubling
    assert errors[1] / errors[2] > 12.0


def test_frenet_rk4_circle():
    # constant curvature, zero torsion: a circle in the plane z = 0
    fb = BACKENDS["fallback"]
    n = 512
    radius = 2.0
    length = 2.0 * np.pi * radius
    k = np.full(2 * n + 1, 1.0 / radius)
    t = np.zeros(2 * n + 1)
    nodes, tang, norm, binorm = fb.frenet_rk4(k, t, length / n)
    assert np.abs(nodes[-1] - nodes[0]).max() < 1e-8
    assert np.abs(nodes[:, 2]).max() < 1e-14
    frame_dot = np.einsum("ij,ij->i", tang, norm)
    assert np.abs(frame_dot).max() < 1e-10
