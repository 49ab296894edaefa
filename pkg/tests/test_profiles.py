from __future__ import annotations

import numpy as np
import pytest

from cosserat_plate.errors import DomainError, StencilError
from cosserat_plate.profiles import (
    FACE_RESIDUAL_NAMES,
    PlateLoads,
    SectionDensities,
    couple_stress_at,
    displacement_at,
    face_bc_residuals,
    microrotation_at,
    stress_at,
    thickness_equilibrium_field,
    thickness_equilibrium_residual,
)
from cosserat_plate.resultants import densities_from_stress_set
from cosserat_plate.sets import KinematicSet, StressSet


def random_densities(rng, h=0.7, grid=()):
    return SectionDensities(h, *(rng.standard_normal(s + grid) for s in
                                 ((2, 2), (2, 2), (2,), (2,), (2, 2), (2,), (2,))))


def random_loads(rng, grid=()):
    return PlateLoads(*(rng.standard_normal(grid) if grid else float(rng.standard_normal()) for _ in range(4)))


class TestLoads:
    def test_derived(self):
        L = PlateLoads(0.5, -0.5, 0.3, 0.1)
        assert (L.p, L.sigma_0, L.v, L.t) == pytest.approx((1.0, 0.0, 0.1, 0.2))

    def test_from_pv_round_trip(self):
        L = PlateLoads.from_pv(p=2.0, sigma_0=0.4, v=-0.3, t=0.7)
        assert (L.p, L.sigma_0, L.v, L.t) == pytest.approx((2.0, 0.4, -0.3, 0.7))

    def test_zero(self):
        assert PlateLoads().is_zero()


class TestStress:
    def test_zero(self):
        assert not stress_at(SectionDensities.zeros(1.0), PlateLoads(), 0.3).any()

    def test_shear_vanishes_on_faces(self, rng):
        d = random_densities(rng)
        for z in (-1.0, 1.0):
            s = stress_at(d, PlateLoads(), z)
            assert not s[2, :2].any()
            assert not s[:2, 2].any()

    def test_normal_face_value(self):
        L = PlateLoads(0.5, -0.5)
        assert stress_at(SectionDensities.zeros(1.0), L, 1.0)[2, 2] == pytest.approx(0.5)
        assert stress_at(SectionDensities.zeros(1.0), L, -1.0)[2, 2] == pytest.approx(-0.5)

    def test_mid_surface_normal(self, rng):
        L = random_loads(rng)
        assert stress_at(random_densities(rng), L, 0.0)[2, 2] == pytest.approx(L.sigma_0)

    def test_in_plane_linear(self, rng):
        d = random_densities(rng)
        s = stress_at(d, PlateLoads(), 0.4)
        np.testing.assert_allclose(s[:2, :2], d.n + 0.5 * d.h * 0.4 * d.m)

    def test_domain(self):
        with pytest.raises(DomainError):
            stress_at(SectionDensities.zeros(1.0), PlateLoads(), 1.01)


class TestCouple:
    def test_transverse_row_zero(self, rng):
        d = random_densities(rng)
        for z in np.linspace(-1, 1, 7):
            assert not couple_stress_at(d, random_loads(rng), z)[2, :2].any()

    def test_face_value(self):
        L = PlateLoads(mu_t=0.8, mu_b=0.2)
        assert couple_stress_at(SectionDensities.zeros(1.0), L, 1.0)[2, 2] == pytest.approx(0.8)
        assert couple_stress_at(SectionDensities.zeros(1.0), L, -1.0)[2, 2] == pytest.approx(0.2)

    def test_in_plane_vanishes_on_faces(self, rng):
        assert not couple_stress_at(random_densities(rng), PlateLoads(), 1.0)[:2, :2].any()

    def test_zero(self):
        assert not couple_stress_at(SectionDensities.zeros(2.0), PlateLoads(), -0.5).any()


class TestKinematicProfiles:
    def test_mid_plane(self, rng):
        U = rng.standard_normal(9)
        u = displacement_at(U, 0.5, 0.0)
        np.testing.assert_allclose(u, [U[6], U[7], U[2]])
        phi = microrotation_at(U, 0.5, 0.0)
        np.testing.assert_allclose(phi, [U[3] / 0.8, U[4] / 0.8, U[8]])

    def test_faces(self, rng):
        U = rng.standard_normal(9)
        for z in (-1.0, 1.0):
            assert not microrotation_at(U, 0.5, z)[:2].any()

    def test_cubic_profile(self):
        # Omega3 = k2 Theta3 / h, so Theta3 = 1 means Omega3 = 1.6 / h
        h = 0.4
        U = np.zeros(9)
        U[5] = 1.6 / h
        assert microrotation_at(U, h, 1.0)[2] == pytest.approx(2.0 / 3.0)

    def test_affine_displacement(self, rng):
        U = KinematicSet(rng.standard_normal(9))
        zs = np.linspace(-1, 1, 5)
        u = np.array([displacement_at(U, 0.3, z)[0] for z in zs])
        assert np.max(np.abs(np.diff(u, 2))) <= 1e-14


class TestFaces:
    def test_identically_zero(self, rng):
        for _ in range(20):
            r = face_bc_residuals(random_densities(rng, grid=(3, 4)), random_loads(rng, (3, 4)))
            assert r.shape == (len(FACE_RESIDUAL_NAMES),)
            assert np.max(np.abs(r)) <= 1e-14

    def test_perturbed_normal_stress(self, rng):
        d = random_densities(rng)
        L = random_loads(rng)

        def shifted(dd, ll, z):
            s = stress_at(dd, ll, z)
            s[2, 2] += 0.25
            return s

        r = face_bc_residuals(d, L, stress=shifted)
        assert r[0] == pytest.approx(0.25) and r[1] == pytest.approx(0.25)
        assert np.max(np.abs(r[2:])) <= 1e-14


def _exact_state(h, n=7):
    """Polynomial resultants satisfying every plate equation exactly.

    M11 = x^2, Q1 = Qs1 = 2x, p = -2, R and Ss constant, N symmetric
    constant, Ms1 = -2 v x with v = 0.3.
    """
    x = np.linspace(0, 1, n)
    X, Y = np.meshgrid(x, x)
    z = np.zeros_like(X)
    M = np.stack([np.stack([X ** 2, z]), np.stack([z, z])])
    Q = np.stack([2 * X, z])
    R = np.ones((2, 2) + X.shape) * 0.2
    Ss = np.ones((2,) + X.shape) * 0.1
    N = np.stack([np.stack([z + 1, z + 0.5]), np.stack([z + 0.5, z - 1])])
    Ms = np.stack([-0.6 * X, z])
    S = StressSet.from_parts(M=M, Q=Q, Qs=Q.copy(), R=R, Ss=Ss, N=N, Ms=Ms)
    loads = PlateLoads.from_pv(p=-2.0 + z, v=0.3 + z, t=0.1, sigma_0=0.2)
    return densities_from_stress_set(S, h), loads, x[1] - x[0]


class TestThicknessEquilibrium:
    def test_zero(self):
        d = SectionDensities.zeros(1.0, (5, 5))
        f, m = thickness_equilibrium_residual(d, PlateLoads(), 0.3, (2, 2), 0.1, 0.1)
        assert not f.any() and not m.any()

    def test_exact_plate_state(self):
        d, L, step = _exact_state(0.3)
        f, m = thickness_equilibrium_field(d, L, np.linspace(-1, 1, 9), step, step)
        assert np.max(np.abs(f)) <= 1e-12
        assert np.max(np.abs(m)) <= 1e-12

    def test_violated_transverse_equilibrium(self):
        d, L, step = _exact_state(0.3)
        bad = PlateLoads.from_pv(p=L.p + 1.0, v=L.v, t=L.t, sigma_0=L.sigma_0)
        f, m = thickness_equilibrium_residual(d, bad, 0.0, (3, 3), step, step)
        assert abs(f[2]) > 1.0
        assert np.max(np.abs(f[:2])) <= 1e-12 and np.max(np.abs(m)) <= 1e-12

    def test_boundary_point(self):
        d = SectionDensities.zeros(1.0, (5, 5))
        with pytest.raises(StencilError):
            thickness_equilibrium_residual(d, PlateLoads(), 0.0, (0, 2), 0.1, 0.1)

    def test_field_matches_pointwise(self, rng):
        d = random_densities(rng, grid=(6, 6))
        L = random_loads(rng, (6, 6))
        f, m = thickness_equilibrium_field(d, L, [0.5], 0.2, 0.3)
        fp, mp = thickness_equilibrium_residual(d, L, 0.5, (2, 3), 0.2, 0.3)
        np.testing.assert_allclose(f[0, 1, 2], fp, atol=1e-13)
        np.testing.assert_allclose(m[0, 1, 2], mp, atol=1e-13)
