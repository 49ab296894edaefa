from __future__ import annotations

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import random_pd_moduli
from cosserat_plate.cosserat3d import hooke_forward
from cosserat_plate.errors import DomainError, SingularModuliError, ValidationError
from cosserat_plate.material import CosseratModuli
from cosserat_plate.plate_constitutive import (
    build_compliance,
    build_reduced_compliance,
    compliance_apply,
    diagnostic_report,
    energy_density,
    gradient_check,
    closed_form_coefficients,
    closed_form_energy_density,
    quadrature_energy_density,
    stiffness_apply,
)
from cosserat_plate.profiles import PlateLoads, couple_stress_at, stress_at
from cosserat_plate.resultants import densities_from_stress_set
from cosserat_plate.sets import STRAIN_NAMES, STRESS_NAMES, StrainSet, StressSet


def _compliance_3d(m):
    """Numerical inverse of the 3D Hooke law as two 9x9 matrices."""
    C = np.zeros((9, 9))
    D = np.zeros((9, 9))
    for k in range(9):
        e = np.zeros(9)
        e[k] = 1.0
        s, c = hooke_forward(e.reshape(3, 3), np.zeros((3, 3)), m)
        C[:, k] = s.ravel()
        s, c = hooke_forward(np.zeros((3, 3)), e.reshape(3, 3), m)
        D[:, k] = c.ravel()
    return np.linalg.inv(C), np.linalg.inv(D)


def _oracle_energy(S, loads, m, h):
    Ci, Di = _compliance_3d(m)
    d = densities_from_stress_set(S, h)

    def integrand(z):
        s = stress_at(d, loads, z).ravel()
        c = couple_stress_at(d, loads, z).ravel()
        return 0.25 * h * (s @ Ci @ s + c @ Di @ c)

    return quad(integrand, -1, 1)[0]


class TestExactEnergy:
    def test_matches_oracle(self, rng):
        for _ in range(5):
            m = random_pd_moduli(rng)
            h = rng.uniform(0.1, 2.0)
            S = StressSet(rng.standard_normal(20))
            L = PlateLoads.from_pv(*rng.standard_normal(4))
            assert energy_density(S, L, build_compliance(m, h)) == pytest.approx(_oracle_energy(S, L, m, h), rel=1e-10)

    def test_matches_gauss_quadrature(self, rng, generic_moduli):
        cmap = build_compliance(generic_moduli, 0.3)
        for _ in range(50):
            S = StressSet(rng.standard_normal(20))
            L = PlateLoads.from_pv(*rng.standard_normal(4))
            a = energy_density(S, L, cmap)
            b = quadrature_energy_density(S, L, generic_moduli, 0.3)
            assert abs(a - b) <= 1e-12 * abs(b)

    def test_zero_state(self, unit_moduli):
        assert energy_density(StressSet.zeros(), PlateLoads(), build_compliance(unit_moduli, 1.0)) == 0.0

    def test_p_squared_term(self, unit_moduli):
        cmap = build_compliance(unit_moduli, 1.0)
        val = energy_density(StressSet.zeros(), PlateLoads.from_pv(p=1.0), cmap)
        assert val == pytest.approx(17 * 2 / (280 * 5), rel=1e-14)
        assert val == pytest.approx(0.0242857, abs=1e-7)

    def test_positive(self, rng):
        for _ in range(20):
            m = random_pd_moduli(rng)
            assert np.all(np.linalg.eigvalsh(build_compliance(m, rng.uniform(0.1, 3)).K) > 0)

    def test_field_evaluation(self, rng, generic_moduli):
        cmap = build_compliance(generic_moduli, 0.5)
        S = rng.standard_normal((20, 3, 4))
        L = PlateLoads.from_pv(rng.standard_normal((3, 4)))
        out = energy_density(S, L, cmap)
        assert out.shape == (3, 4)
        pt = energy_density(StressSet(S[:, 1, 2]), PlateLoads.from_pv(L.p[1, 2]), cmap)
        assert out[1, 2] == pytest.approx(pt, rel=1e-14)


class TestCoefficients:
    def test_pressure_in_bending_strain(self, unit_moduli):
        E = compliance_apply(StressSet.zeros(), PlateLoads.from_pv(p=5.0), build_compliance(unit_moduli, 1.0))
        assert E.array[STRAIN_NAMES.index("e11")] == pytest.approx(-0.6, rel=1e-14)

    def test_tau3_coefficient(self, unit_moduli):
        K = build_compliance(unit_moduli, 1.0).K
        assert K[STRAIN_NAMES.index("tau31"), STRESS_NAMES.index("Ss1")] == pytest.approx(6.0, rel=1e-14)

    def test_group_blocks_decouple(self, rng):
        K = build_compliance(random_pd_moduli(rng), 0.7).K
        assert not K[:14, 14:].any()
        assert not K[14:, :14].any()

    def test_symmetric(self, rng):
        K = build_compliance(random_pd_moduli(rng), 0.7).K
        np.testing.assert_array_equal(K, K.T)

    def test_closed_form_coefficients_match(self, rng):
        for _ in range(5):
            m = random_pd_moduli(rng)
            h = rng.uniform(0.1, 2.0)
            keys = set(closed_form_coefficients(m, h))
            coeff = [r for r in diagnostic_report(m, h) if r["term"] in keys]
            assert len(coeff) == len(keys)
            assert all(r["match"] for r in coeff), [r for r in coeff if not r["match"]]

    def test_reference_energy_bracket_sign(self, rng, generic_moduli):
        cmap = build_compliance(generic_moduli, 0.4)
        S = StressSet(rng.standard_normal(20))
        L = PlateLoads.from_pv(*rng.standard_normal(4))
        exact = energy_density(S, L, cmap)
        plus = closed_form_energy_density(S, L, generic_moduli, 0.4, couple_bracket_sign=1.0)
        minus = closed_form_energy_density(S, L, generic_moduli, 0.4)
        assert plus == pytest.approx(exact, rel=1e-12)
        assert minus != pytest.approx(exact, rel=1e-3)


class TestGradientAndInverse:
    def test_gradient(self, rng, generic_moduli):
        cmap = build_compliance(generic_moduli, 0.5)
        L = PlateLoads.from_pv(*rng.standard_normal(4))
        for _ in range(10):
            S0 = rng.standard_normal(20)
            err = gradient_check(cmap, lambda s: energy_density(s, L, cmap), S0, L)
            assert err <= 1e-8

    def test_gradient_detects_wrong_energy(self, rng, generic_moduli):
        cmap = build_compliance(generic_moduli, 0.5)
        S0 = rng.standard_normal(20)
        err = gradient_check(cmap, lambda s: 1.01 * energy_density(s, PlateLoads(), cmap), S0, PlateLoads())
        assert err > 1e-3

    def test_round_trip(self, rng):
        for _ in range(10):
            m = random_pd_moduli(rng)
            cmap = build_compliance(m, 0.8)
            S = StressSet(rng.standard_normal(20))
            L = PlateLoads.from_pv(*rng.standard_normal(4))
            back = stiffness_apply(compliance_apply(S, L, cmap), L, cmap)
            np.testing.assert_allclose(back.array, S.array, rtol=1e-10, atol=1e-10)

    def test_strain_set_type(self, unit_moduli):
        E = compliance_apply(StressSet.zeros(), PlateLoads(), build_compliance(unit_moduli, 1.0))
        assert isinstance(E, StrainSet)


class TestErrors:
    def test_mu_c_zero(self):
        with pytest.raises(SingularModuliError, match="mu_c"):
            build_compliance(CosseratModuli(1, 1, 0, 1, 1, 1), 1.0)

    def test_epsilon_zero(self):
        with pytest.raises(SingularModuliError, match="epsilon"):
            build_compliance(CosseratModuli(1, 1, 1, 1, 1, 0), 1.0)

    def test_thickness(self, unit_moduli):
        with pytest.raises(DomainError):
            build_compliance(unit_moduli, -1.0)

    def test_wrong_length(self, unit_moduli):
        with pytest.raises(ValidationError):
            energy_density(np.zeros(19), PlateLoads(), build_compliance(unit_moduli, 1.0))

    def test_reduced_basis_shape(self, unit_moduli):
        with pytest.raises(ValidationError):
            build_reduced_compliance(unit_moduli, 1.0, np.eye(19))


class TestReduced:
    def test_identity_basis_matches_full(self, generic_moduli):
        full = build_compliance(generic_moduli, 0.6)
        red = build_reduced_compliance(generic_moduli, 0.6, np.eye(20))
        np.testing.assert_allclose(red.K, full.K, rtol=1e-14, atol=0)

    def test_restriction(self, rng, generic_moduli):
        B = rng.standard_normal((20, 7))
        full = build_compliance(generic_moduli, 0.6)
        red = build_reduced_compliance(generic_moduli, 0.6, B)
        np.testing.assert_allclose(red.K, B.T @ full.K @ B, rtol=1e-12, atol=1e-12)

    def test_mu_c_zero_symmetric_subspace(self):
        # with mu_c = 0 the energy stays finite on stresses with no skew part
        m = CosseratModuli(1.2, 1.0, 0.0, 0.6, 0.9, 0.7)
        B = np.zeros((20, 2))
        B[STRESS_NAMES.index("M12"), 0] = B[STRESS_NAMES.index("M21"), 0] = 1.0
        B[STRESS_NAMES.index("M11"), 1] = 1.0
        red = build_reduced_compliance(m, 1.0, B)
        assert np.all(np.isfinite(red.K))
        S = StressSet(B @ np.array([0.3, -0.2]))
        assert energy_density(np.array([0.3, -0.2]), PlateLoads(), red) == pytest.approx(
            _oracle_energy(S, PlateLoads(), CosseratModuli(1.2, 1.0, 1e3, 0.6, 0.9, 0.7), 1.0), rel=1e-12)
