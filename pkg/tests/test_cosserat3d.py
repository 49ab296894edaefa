from __future__ import annotations

import numpy as np
import pytest

from cosserat_plate.cosserat3d import (
    LEVI_CIVITA,
    axial_of,
    balance_residuals,
    energy_strain,
    energy_stress,
    hooke_forward,
    hooke_inverse,
    kinematic_relations,
)
from cosserat_plate.material import CosseratModuli, primed_constants

from conftest import random_pd_moduli


def _eps(i, j, k):
    """Oracle Levi-Civita from the permutation product formula."""
    return (i - j) * (j - k) * (k - i) / 2


def _forward_loops(g, c, m):
    """Index-notation oracle of the forward law."""
    s = np.zeros((3, 3))
    mu = np.zeros((3, 3))
    trg = sum(g[k, k] for k in range(3))
    trc = sum(c[k, k] for k in range(3))
    for i in range(3):
        for j in range(3):
            d = 1.0 if i == j else 0.0
            s[i, j] = (m.mu + m.mu_c) * g[i, j] + (m.mu - m.mu_c) * g[j, i] + m.lam * trg * d
            mu[i, j] = (m.gamma + m.epsilon) * c[i, j] + (m.gamma - m.epsilon) * c[j, i] + m.beta * trc * d
    return s, mu


class TestLeviCivita:
    def test_matches_product_formula(self):
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    assert LEVI_CIVITA[i, j, k] == _eps(i, j, k)

    def test_read_only(self):
        with pytest.raises(ValueError):
            LEVI_CIVITA[0, 1, 2] = 5


class TestHooke:
    def test_zero(self, unit_moduli):
        s, mu = hooke_forward(np.zeros((3, 3)), np.zeros((3, 3)), unit_moduli)
        assert not s.any() and not mu.any()

    def test_identity_strain(self):
        m = CosseratModuli(1, 1, 0.37, 1, 1, 1)
        s, _ = hooke_forward(np.eye(3), np.zeros((3, 3)), m)
        np.testing.assert_allclose(s, 5 * np.eye(3), rtol=0, atol=1e-15)

    def test_against_index_loops(self, rng):
        m = CosseratModuli(1, 1, 0.5, 1, 1, 0.7)
        for _ in range(20):
            g, c = rng.standard_normal((2, 3, 3))
            s, mu = hooke_forward(g, c, m)
            s0, mu0 = _forward_loops(g, c, m)
            np.testing.assert_allclose(s, s0, rtol=1e-14, atol=1e-14)
            np.testing.assert_allclose(mu, mu0, rtol=1e-14, atol=1e-14)

    def test_batched(self, rng, generic_moduli):
        g, c = rng.standard_normal((2, 4, 5, 3, 3))
        s, mu = hooke_forward(g, c, generic_moduli)
        s0, mu0 = _forward_loops(g[2, 3], c[2, 3], generic_moduli)
        np.testing.assert_allclose(s[2, 3], s0, atol=1e-14)
        np.testing.assert_allclose(mu[2, 3], mu0, atol=1e-14)

    def test_inverse_zero(self, unit_moduli):
        g, c = hooke_inverse(np.zeros((3, 3)), np.zeros((3, 3)), primed_constants(unit_moduli))
        assert not g.any() and not c.any()

    def test_inverse_identity_stress(self, unit_moduli):
        # oracle: solve the forward law for identity output
        p = primed_constants(unit_moduli)
        g, _ = hooke_inverse(np.eye(3), np.zeros((3, 3)), p)
        A = np.array([hooke_forward(E.reshape(3, 3), np.zeros((3, 3)), unit_moduli)[0].ravel()
                      for E in np.eye(9)]).T
        oracle = np.linalg.solve(A, np.eye(3).ravel()).reshape(3, 3)
        np.testing.assert_allclose(g, oracle, atol=1e-15)
        assert g[0, 0] == pytest.approx(2 * p.mu_p + 3 * p.lambda_p)

    def test_round_trip_1000(self, rng):
        for _ in range(1000):
            m = random_pd_moduli(rng)
            g, c = rng.standard_normal((2, 3, 3))
            g2, c2 = hooke_inverse(*hooke_forward(g, c, m), primed_constants(m))
            assert np.max(np.abs(g2 - g)) <= 1e-12 * np.max(np.abs(g))
            assert np.max(np.abs(c2 - c)) <= 1e-12 * np.max(np.abs(c))


class TestEnergy:
    def test_zero(self, unit_moduli):
        assert energy_strain(np.zeros((3, 3)), np.zeros((3, 3)), unit_moduli) == 0.0
        assert energy_stress(np.zeros((3, 3)), np.zeros((3, 3)), primed_constants(unit_moduli)) == 0.0

    def test_single_shear(self):
        g = np.zeros((3, 3))
        g[0, 1] = 1.0
        m = CosseratModuli(0.0, 1.0, 2.0, 1, 1, 1)
        assert energy_strain(g, np.zeros((3, 3)), m) == pytest.approx(1.5)

    def test_half_work(self, rng, generic_moduli):
        g, c = rng.standard_normal((2, 3, 3))
        s, mu = hooke_forward(g, c, generic_moduli)
        assert energy_strain(g, c, generic_moduli) == pytest.approx(0.5 * (np.sum(s * g) + np.sum(mu * c)), rel=1e-13)

    def test_conjugacy_1000(self, rng):
        for _ in range(1000):
            m = random_pd_moduli(rng)
            g, c = rng.standard_normal((2, 3, 3))
            w = energy_strain(g, c, m)
            phi = energy_stress(*hooke_forward(g, c, m), primed_constants(m))
            assert abs(phi - w) <= 1e-12 * abs(w)

    def test_identity_stress(self, unit_moduli):
        p = primed_constants(unit_moduli)
        val = energy_stress(np.eye(3), np.zeros((3, 3)), p)
        assert val == pytest.approx(1.5 * (2 * p.mu_p + 3 * p.lambda_p), rel=1e-14)

    def test_quadratic_scaling(self, rng, generic_moduli):
        g, c = rng.standard_normal((2, 3, 3))
        assert energy_strain(3 * g, 3 * c, generic_moduli) == pytest.approx(9 * energy_strain(g, c, generic_moduli))


class TestKinematics:
    def test_microrotation_e3(self):
        g, chi = kinematic_relations(np.zeros((3, 3)), np.array([0, 0, 1.0]), np.zeros((3, 3)))
        expected = np.zeros((3, 3))
        expected[0, 1], expected[1, 0] = -1.0, 1.0
        np.testing.assert_array_equal(g, expected)
        assert not chi.any()

    def test_no_rotation(self, rng):
        gu = rng.standard_normal((3, 3))
        g, _ = kinematic_relations(gu, np.zeros(3), np.zeros((3, 3)))
        np.testing.assert_array_equal(g, gu.T)

    def test_rigid_motion_strain_free(self, rng):
        # u = c + w x X has grad_u[i, j] = eps_ikj w_k; phi = w
        w = rng.standard_normal(3)
        gu = np.einsum("ikj,k->ij", LEVI_CIVITA, w)
        g, chi = kinematic_relations(gu, w, np.zeros((3, 3)))
        assert np.max(np.abs(g)) <= 1e-15
        assert not chi.any()


class TestBalance:
    def test_zero(self):
        f, mo = balance_residuals(np.zeros(3), np.zeros((3, 3)), np.zeros(3))
        assert not f.any() and not mo.any()

    def test_symmetric_stress(self, rng):
        s = rng.standard_normal((3, 3))
        f, mo = balance_residuals(np.zeros(3), s + s.T, np.zeros(3))
        assert np.max(np.abs(mo)) <= 1e-15

    def test_single_skew(self):
        s = np.zeros((3, 3))
        s[0, 1] = 1.0
        _, mo = balance_residuals(np.zeros(3), s, np.zeros(3))
        np.testing.assert_array_equal(mo, [0, 0, 1.0])

    def test_axial(self, rng):
        a = rng.standard_normal((3, 3))
        np.testing.assert_allclose(axial_of(a), [a[1, 2] - a[2, 1], a[2, 0] - a[0, 2], a[0, 1] - a[1, 0]])
