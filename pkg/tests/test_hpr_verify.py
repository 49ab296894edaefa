from __future__ import annotations

import math

import numpy as np
import pytest

from cosserat_plate.errors import AdmissibilityError
from cosserat_plate.hpr_verify import (
    AdmissibleState,
    ManufacturedSolution,
    hpr_functional,
    manufactured_problem,
    navier_cosserat_reference,
    navier_reissner_reference,
    null_space_report,
    reconstruct_faces,
    simply_supported_layout,
    state_from_kinematics,
    stationarity_check,
    stress_perturbation_check,
)
from cosserat_plate.material import CosseratModuli
from cosserat_plate.profiles import PlateLoads
from cosserat_plate.sets import KINEMATIC_NAMES, KinematicSet, StrainSet
from cosserat_plate.solver import (
    EDGES,
    EdgeBC,
    PlateProblem,
    PlateSolution,
    assemble_bending,
    assemble_twisting,
    solve,
)

GENERIC = CosseratModuli(1.2, 1.0, 0.8, 0.6, 0.9, 0.7)


def _problem(n=11, bc=None, loads=PlateLoads(), material=GENERIC, h=0.3, a=1.0, b=0.8):
    bc = bc or {e: EdgeBC.clamped() for e in EDGES}
    return PlateProblem(a, b, h, n, n, material, loads, bc)


def _sine(grid, amp=1.0):
    X, Y = grid.mesh()
    return amp * np.sin(math.pi * X / grid.a) * np.sin(math.pi * Y / grid.b)


def _lame(young, nu):
    return young * nu / ((1 + nu) * (1 - 2 * nu)), young / (2 * (1 + nu))


class TestFunctional:
    def test_zero_state(self):
        p = _problem()
        st = state_from_kinematics(p, np.zeros((9,) + p.grid.shape))
        assert hpr_functional(st, p) == 0.0

    def test_rejects_inadmissible(self, rng):
        p = _problem()
        st = state_from_kinematics(p, rng.standard_normal((9,) + p.grid.shape))
        bad = AdmissibleState(st.U, StrainSet(st.E.array + 1e-3), st.S, st.grid)
        assert st.admissible and not bad.admissible
        with pytest.raises(AdmissibilityError):
            hpr_functional(bad, p)

    def test_value_at_solution(self):
        # Theta is quadratic: Theta(U*) - Theta(0) = b.U*/2 when A U* = b
        p = _problem(loads=PlateLoads.from_pv(p=1.0, sigma_0=0.2, v=0.3, t=0.1))
        sol = solve(p)
        zero = hpr_functional(state_from_kinematics(p, np.zeros_like(sol.kinematics.array)), p)
        theta = hpr_functional(state_from_kinematics(p, sol.kinematics), p)
        U = sol.kinematics.array.reshape(9, -1)
        half_work = 0.5 * (assemble_bending(p).b @ U[:6].ravel() + assemble_twisting(p).b @ U[6:].ravel())
        assert theta - zero == pytest.approx(half_work, rel=1e-10)

    def test_quadratic_scaling(self, rng):
        p = _problem()
        U = rng.standard_normal((9,) + p.grid.shape)
        t1 = hpr_functional(state_from_kinematics(p, U), p)
        t2 = hpr_functional(state_from_kinematics(p, 3.0 * U), p)
        assert t2 == pytest.approx(9.0 * t1, rel=1e-12)

    def test_quadratic_along_a_line(self, rng):
        p = _problem(loads=PlateLoads.from_pv(p=1.0))
        U, D = rng.standard_normal((2, 9) + p.grid.shape)
        ts = np.linspace(-2, 2, 7)
        vals = [hpr_functional(state_from_kinematics(p, U + t * D), p) for t in ts]
        coef, res, *_ = np.polyfit(ts, vals, 2, full=True)
        assert math.sqrt(res[0] / len(ts)) <= 1e-10 * np.max(np.abs(vals))
        cubic = np.polyfit(ts, vals, 3)
        assert abs(cubic[0]) <= 1e-10 * np.max(np.abs(vals))


class TestStationarity:
    @pytest.mark.parametrize("layout", ["clamped", "simply_supported", "free"])
    def test_solution_is_stationary(self, layout):
        bc = {"clamped": None, "simply_supported": simply_supported_layout(),
              "free": {e: EdgeBC.free() if e != "left" else EdgeBC.clamped() for e in EDGES}}[layout]
        p = _problem(bc=bc, loads=PlateLoads.from_pv(p=1.0, v=0.2, t=0.1))
        rep = stationarity_check(solve(p), p, n_directions=10)
        assert rep["n_directions"] == 10
        assert rep["max_normalized"] <= 1e-8

    def test_non_solution_detected(self, rng):
        p = _problem(loads=PlateLoads.from_pv(p=1.0))
        sol = solve(p)
        U = sol.kinematics.array.copy()
        U[2, 3:-3, 3:-3] *= 1.2
        fake = PlateSolution(KinematicSet(U), sol.strains, sol.stresses, {}, {})
        assert stationarity_check(fake, p, n_directions=10)["max_normalized"] > 1e-3

    def test_zero_problem(self):
        p = _problem()
        assert stationarity_check(solve(p), p, n_directions=5)["max_normalized"] == 0.0

    def test_stress_perturbations_raise_theta(self):
        p = _problem(loads=PlateLoads.from_pv(p=1.0, t=0.3))
        rep = stress_perturbation_check(solve(p), p, n_directions=5)
        assert rep["all_not_lower"]
        assert rep["max_decrease"] < 0


class TestReissnerReference:
    def test_zero_load(self):
        assert navier_reissner_reference(1, 1, 0.1, 1.0, 0.3, 0.0)["w_center"] == 0.0

    def test_closed_form(self):
        a, b, h, E, nu, p0 = 1.0, 1.5, 0.2, 2.0, 0.25, 0.7
        D = E * h ** 3 / (12 * (1 - nu ** 2))
        k2 = math.pi ** 2 * (1 / a ** 2 + 1 / b ** 2)
        oracle = p0 / (D * k2 ** 2) * (1 + h ** 2 * k2 * (2 - nu) / (10 * (1 - nu)))
        assert navier_reissner_reference(a, b, h, E, nu, p0)["w_center"] == pytest.approx(oracle, rel=1e-14)

    def test_thin_limit(self):
        r = navier_reissner_reference(1, 1, 1e-4, 1.0, 0.3, 1.0)
        assert r["w_center"] / r["kirchhoff_center"] == pytest.approx(1.0, abs=1e-6)

    def test_mirror_symmetry(self):
        x = np.linspace(0, 2, 21)
        y = np.linspace(0, 1, 11)
        r = navier_reissner_reference(2, 1, 0.1, 1.0, 0.3, 1.0, x, y)
        for key, flip in (("w", np.s_[:, ::-1]), ("Mx", np.s_[::-1]), ("Mxy", np.s_[:, ::-1])):
            sign = -1.0 if key == "Mxy" else 1.0
            tol = 1e-14 * np.abs(r[key]).max()
            np.testing.assert_allclose(r[key], sign * r[key][flip], rtol=0, atol=tol)

    def test_cosserat_reference_tends_to_reissner(self):
        lam, mu = _lame(1.0, 0.3)
        small = 1e-9
        p = _problem(h=0.1, material=CosseratModuli(lam, mu, small, small, small, small), a=1.0, b=1.0)
        ref = navier_cosserat_reference(p, 1.0)
        rei = navier_reissner_reference(1, 1, 0.1, 1.0, 0.3, 1.0)
        assert ref["consistency"] <= 1e-8 * abs(ref["w_center"])
        assert ref["w_center"] == pytest.approx(rei["w_center"], rel=1e-6)

    def test_discrete_matches_cosserat_reference(self):
        p = _problem(n=33, bc=simply_supported_layout(), h=0.2, a=1.0, b=1.0)
        p = p.with_(loads=PlateLoads.from_pv(p=_sine(p.grid)))
        ref = navier_cosserat_reference(p, 1.0)
        W = solve(p).kinematics.array[KINEMATIC_NAMES.index("W")]
        assert W[16, 16] == pytest.approx(ref["w_center"], rel=5e-3)


class TestNullSpace:
    def test_clamped(self):
        assert null_space_report(_problem(n=6))["dimension"] == 0

    def test_one_clamped_edge(self):
        bc = {e: EdgeBC.clamped() if e == "bottom" else EdgeBC.free() for e in EDGES}
        assert null_space_report(_problem(n=6, bc=bc))["dimension"] == 0

    def test_free(self):
        rep = null_space_report(_problem(n=6, bc={e: EdgeBC.free() for e in EDGES}))
        assert rep["dimension"] == 6
        assert rep["max_principal_angle"] <= 1e-8
        assert rep["smallest_nonzero_eigenvalue"] > 1e3 * rep["eigen_tolerance"]


class TestManufactured:
    def test_exact_data_on_edges(self):
        base = _problem()
        mms = ManufacturedSolution.random(3)
        prob, exact = manufactured_problem(base, 9, mms=mms)
        sol = solve(prob)
        U = sol.kinematics.array
        for sl in (np.s_[:, 0, :], np.s_[:, -1, :], np.s_[:, :, 0], np.s_[:, :, -1]):
            np.testing.assert_allclose(U[sl], exact[sl], atol=1e-14)

    def test_symmetric_m_pins_rotation(self):
        _, exact = manufactured_problem(_problem(), 9, variant="symmetric-m")
        assert not exact[KINEMATIC_NAMES.index("Om3")].any()


class TestFaces:
    def test_solved_problem(self):
        p = _problem(loads=PlateLoads(sigma_t=0.7, sigma_b=-0.2, mu_t=0.3, mu_b=0.1))
        assert reconstruct_faces(p, solve(p)) <= 1e-12
