"""Plate HPR functional, stationarity checks and independent oracles.

Oracles:

* manufactured solutions built from the continuous operator with analytic
  derivatives;
* the classical Reissner single-mode (Navier) solution of a simply
  supported plate, coded from standard plate formulas;
* an exact single-mode solution of the continuous Cosserat plate equations
  for the same support, used to separate model and discretization error;
* kernel of the assembled traction-only operator against the rigid family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.ndimage import gaussian_filter

from .errors import AdmissibilityError, ValidationError
from .plate_constitutive import build_compliance, build_reduced_compliance, energy_density
from .plate_kinematics import FieldGrid, rigid_basis, strain_coefficients, strain_from_kinematics
from .profiles import PlateLoads
from .resultants import edge_tractions
from .sets import KinematicSet, StrainSet, StressSet
from .solver import (
    DISPLACEMENT,
    EDGES,
    EdgeBC,
    PlateProblem,
    PlateSolution,
    _GROUPS,
    _NORMALS,
    _assemble_group,
    _edge_nodes,
    _edge_values,
    _group_constitutive,
    _variant_maps,
    solve,
    solve_reduced,
    stabilization_matrices,
    variant_basis,
)

__all__ = [
    "AdmissibleState",
    "state_from_kinematics",
    "hpr_functional",
    "stationarity_check",
    "stress_perturbation_check",
    "navier_reissner_reference",
    "navier_cosserat_reference",
    "simply_supported_layout",
    "ManufacturedSolution",
    "manufactured_problem",
    "mms_convergence",
    "null_space_report",
    "reconstruct_faces",
    "reconstruction_order",
    "check_record",
]


def check_record(name: str, value: float, tol: float, passed: bool | None = None, **extra) -> dict:
    """Uniform verification record."""
    ok = bool(value <= tol) if passed is None else bool(passed)
    rec = {"check": name, "value": float(value), "tolerance": float(tol), "pass": ok}
    rec.update(extra)
    return rec


# -- admissible states and the functional ------------------------------------------

@dataclass
class AdmissibleState:
    U: KinematicSet
    E: StrainSet
    S: StressSet
    grid: FieldGrid

    @property
    def admissible(self) -> bool:
        E = strain_from_kinematics(self.U, self.grid, "sbp").array
        scale = max(1.0, float(np.max(np.abs(E))))
        return bool(np.max(np.abs(E - self.E.array)) <= 1e-12 * scale)


def _induced_stress(problem: PlateProblem, E: np.ndarray, variant: str) -> np.ndarray:
    grid = problem.grid
    maps = _variant_maps(problem, variant)
    S = np.zeros((20,) + grid.shape)
    for group in ("bending", "twisting"):
        cmap, Bg, sel = maps[group]
        rows, _ = _GROUPS[group]
        C, Lred = _group_constitutive(cmap, sel, problem.loads, grid)
        s_red = C @ (Bg.T @ E[rows].reshape(Bg.shape[0], -1) - Lred)
        S[rows] = (Bg @ s_red).reshape((Bg.shape[0],) + grid.shape)
    return S


def state_from_kinematics(problem: PlateProblem, U, variant: str = "full") -> AdmissibleState:
    """Admissible state with E = E(U) and S induced by the constitutive law."""
    grid = problem.grid
    Uk = U if isinstance(U, KinematicSet) else KinematicSet(U)
    E = strain_from_kinematics(Uk, grid, "sbp")
    return AdmissibleState(Uk, E, StressSet(_induced_stress(problem, E.array, variant)), grid)


def _energy_field(problem: PlateProblem, S: np.ndarray, variant: str) -> np.ndarray:
    """Phi(S) at every node (including pure-load terms)."""
    grid = problem.grid
    if variant == "full":
        cmap = build_compliance(problem.material, problem.h)
        return np.asarray(energy_density(S.reshape(20, -1), _flat_loads(problem), cmap)).reshape(grid.shape)
    Bb, Bt = variant_basis(variant)
    B = np.hstack([Bb, Bt])
    cmap = build_reduced_compliance(problem.material, problem.h, B)
    s_red, *_ = np.linalg.lstsq(B, S.reshape(20, -1), rcond=None)
    return np.asarray(energy_density(s_red, _flat_loads(problem), cmap)).reshape(grid.shape)


def _flat_loads(problem: PlateProblem) -> PlateLoads:
    shape = problem.grid.shape

    def f(v):
        return np.broadcast_to(np.asarray(v, dtype=float), shape).ravel()

    L = problem.loads
    return PlateLoads(f(L.sigma_t), f(L.sigma_b), f(L.mu_t), f(L.mu_b))


def _stabilization_energy(problem: PlateProblem, U: np.ndarray, variant: str) -> float:
    grid = problem.grid
    Jx, Jy = stabilization_matrices(grid)
    maps = _variant_maps(problem, variant)
    total = 0.0
    for group in ("bending", "twisting"):
        cmap, Bg, sel = maps[group]
        rows, cols = _GROUPS[group]
        C, _ = _group_constitutive(cmap, sel, problem.loads, grid)
        Gx, Gy, _ = (g[rows][:, cols] for g in strain_coefficients())
        u = U[cols].reshape(cols.stop - cols.start, -1)
        for Gd, J in ((Gx, Jx), (Gy, Jy)):
            Cdd = (Bg.T @ Gd).T @ C @ (Bg.T @ Gd)
            Ju = (J @ u.T).T
            total += 0.5 * float(np.sum(u * (Cdd @ Ju)))
    return total


def hpr_functional(state: AdmissibleState, problem: PlateProblem, variant: str = "full",
                   check: bool = True) -> float:
    """Discrete HPR functional.

    Theta = sum_w [Phi(S) - S.E + p W + 2 v Omega0_3 + source.U]
            + sum_{traction edges} w_e S_o.U + sum_{displacement edges} w_e S_n.(U - U_o) - J_h(U)

    Domain sums use trapezoid weights and edge sums the 1D trapezoid rule.
    """
    if check and not state.admissible:
        raise AdmissibilityError("strains are not generated by the displacement fields")
    grid = problem.grid
    U = state.U.array
    S = state.S.array
    w = grid.trapezoid_weights()
    loads = problem.loads
    dens = _energy_field(problem, S, variant) - np.sum(S * state.E.array, axis=0)
    dens = dens + np.asarray(loads.p) * U[2] + 2.0 * np.asarray(loads.v) * U[8]
    if problem.source is not None:
        dens = dens + np.sum(problem.source * U, axis=0)
    theta = float(np.sum(w * dens))
    Sflat = StressSet(S.reshape(20, -1))
    for edge in EDGES:
        ebc = problem.bc[edge]
        idx, xs, ys, we = _edge_nodes(grid, edge)
        Sn = edge_tractions(StressSet(Sflat.array[:, idx]), _NORMALS[edge])
        Ue = U.reshape(9, -1)[:, idx]
        for k in range(9):
            vals = _edge_values(ebc.values[k], xs, ys)
            if ebc.kinds[k] == DISPLACEMENT:
                theta += float(np.sum(we * Sn[k] * (Ue[k] - vals)))
            else:
                theta += float(np.sum(we * vals * Ue[k]))
    return theta - _stabilization_energy(problem, U, variant)


def _fixed_mask(problem: PlateProblem, variant: str) -> np.ndarray:
    grid = problem.grid
    mask = np.zeros((9, grid.size), dtype=bool)
    for group in ("bending", "twisting"):
        system = _assemble_group(problem, group, variant)
        _, cols = _GROUPS[group]
        mask[cols] = system.fixed.reshape(len(system.fields), grid.size)
    if variant == "symmetric-m":
        mask[5] = True
    return mask.reshape((9,) + grid.shape)


def _energy_norm2(problem: PlateProblem, U: np.ndarray, variant: str) -> tuple[float, float]:
    """a(U, U) and f(U) of the assembled problem (all dofs)."""
    a = f = 0.0
    for group in ("bending", "twisting"):
        system = _assemble_group(problem, group, variant)
        _, cols = _GROUPS[group]
        u = U[cols].reshape(-1)
        a += float(u @ (system.A @ u))
        f += float(system.b @ u)
    return a, f


def _smooth_direction(rng: np.random.Generator, grid: FieldGrid, fixed: np.ndarray) -> np.ndarray:
    sigma = max(1.0, min(grid.nx, grid.ny) / 8.0)
    d = np.stack([gaussian_filter(rng.standard_normal(grid.shape), sigma, mode="reflect") for _ in range(9)])
    d[fixed] = 0.0
    return d


def stationarity_check(solution: PlateSolution, problem: PlateProblem, n_directions: int = 20,
                       seed: int = 0) -> dict:
    """Largest normalized directional derivative of Theta at a state.

    Directions are smooth random kinematic fields vanishing on prescribed
    dofs, with E and S induced.  The derivative is a central difference,
    exact for the quadratic functional.  Normalization:
    |dTheta| / (sqrt(a(d, d) a(U, U)) + |f(d)|).
    """
    variant = solution.variant
    rng = np.random.default_rng(seed)
    fixed = _fixed_mask(problem, variant)
    U = solution.kinematics.array
    aU, _ = _energy_norm2(problem, U, variant)
    worst = 0.0
    values = []
    for _ in range(n_directions):
        d = _smooth_direction(rng, problem.grid, fixed)
        ad, fd = _energy_norm2(problem, d, variant)
        if ad <= 0:
            continue
        scale = math.sqrt(max(aU, ad) / ad) if aU > 0 else 1.0
        d = d * scale
        ad *= scale ** 2
        fd *= scale
        tp = hpr_functional(state_from_kinematics(problem, U + d, variant), problem, variant, check=False)
        tm = hpr_functional(state_from_kinematics(problem, U - d, variant), problem, variant, check=False)
        dtheta = 0.5 * (tp - tm)
        norm = math.sqrt(ad * aU) + abs(fd)
        val = abs(dtheta) / norm if norm > 0 else abs(dtheta)
        values.append(val)
        worst = max(worst, val)
    return {"max_normalized": worst, "values": values, "n_directions": len(values)}


def stress_perturbation_check(solution: PlateSolution, problem: PlateProblem, n_directions: int = 10,
                              seed: int = 0) -> dict:
    """Theta at the solution against Theta with perturbed stresses (fixed U, E).

    Theta is convex in S with its minimum at the constitutive stresses, so
    every perturbation must not decrease it.
    """
    variant = solution.variant
    rng = np.random.default_rng(seed)
    base = state_from_kinematics(problem, solution.kinematics, variant)
    t0 = hpr_functional(base, problem, variant)
    Bb, Bt = variant_basis(variant)
    B = np.hstack([Bb, Bt])
    decreases = []
    for _ in range(n_directions):
        grid = problem.grid
        coeffs = np.stack([gaussian_filter(rng.standard_normal(grid.shape), 2.0) for _ in range(B.shape[1])])
        dS = np.tensordot(B, coeffs, axes=(1, 0))
        dS *= max(1e-12, float(np.max(np.abs(base.S.array)))) / max(float(np.max(np.abs(dS))), 1e-300)
        pert = AdmissibleState(base.U, base.E, StressSet(base.S.array + dS), base.grid)
        decreases.append(t0 - hpr_functional(pert, problem, variant))
    return {"theta": t0, "max_decrease": max(decreases), "all_not_lower": bool(max(decreases) <= 1e-12 * max(1.0, abs(t0)))}


# -- Navier references ------------------------------------------------------------

def navier_reissner_reference(a: float, b: float, h: float, young: float, poisson: float, p0: float,
                              x=None, y=None, shear_factor: float = 5.0 / 6.0) -> dict:
    """Simply supported Reissner plate under p = p0 sin(pi x / a) sin(pi y / b).

    Returns the centre deflection and, when ``x, y`` are given, the
    deflection and bending-moment fields there.  The deflection is Reissner's
    weighted mean, which includes the transverse-normal-stress term.
    """
    if not (a > 0 and b > 0 and h > 0):
        raise ValidationError("plate dimensions must be positive")
    nu = poisson
    D = young * h ** 3 / (12.0 * (1.0 - nu ** 2))
    k2 = math.pi ** 2 * (1.0 / a ** 2 + 1.0 / b ** 2)
    G = young / (2.0 * (1.0 + nu))
    shear = D * k2 / (shear_factor * G * h)              # Mindlin shear term
    normal = -nu * h ** 2 * k2 / (10.0 * (1.0 - nu))      # transverse normal stress term
    amp = p0 / (D * k2 ** 2) * (1.0 + shear + normal)
    out = {"w_center": amp, "kirchhoff_center": p0 / (D * k2 ** 2), "D": D}
    if x is not None and y is not None:
        X, Y = np.meshgrid(np.asarray(x, float), np.asarray(y, float))
        s = np.sin(math.pi * X / a) * np.sin(math.pi * Y / b)
        c = np.cos(math.pi * X / a) * np.cos(math.pi * Y / b)
        al, be = math.pi / a, math.pi / b
        out["w"] = amp * s
        out["Mx"] = p0 * (al ** 2 + nu * be ** 2) / k2 ** 2 * s
        out["My"] = p0 * (be ** 2 + nu * al ** 2) / k2 ** 2 * s
        out["Mxy"] = -p0 * (1 - nu) * al * be / k2 ** 2 * c
    return out


_PATTERN = {  # (x pattern, y pattern): 0 = sin, 1 = cos
    "Psi1": (1, 0), "Psi2": (0, 1), "W": (0, 0), "Om01": (0, 1), "Om02": (1, 0), "Om3": (1, 1),
}


def _continuous_residual_matrix(C: np.ndarray, Gx, Gy, G0, derivs):
    """Helper: residual of r = dx(Gx^T S) + dy(Gy^T S) - G0^T S for S = C E."""
    U, Ux, Uy, Uxx, Uxy, Uyy = derivs
    Ex = Gx @ Uxx + Gy @ Uxy + G0 @ Ux
    Ey = Gx @ Uxy + Gy @ Uyy + G0 @ Uy
    E = Gx @ Ux + Gy @ Uy + G0 @ U
    return Gx.T @ C @ Ex + Gy.T @ C @ Ey - G0.T @ C @ E


def navier_cosserat_reference(problem: PlateProblem, p0: float) -> dict:
    """Exact single-mode solution of the continuous bending equations.

    Simply supported edges as in ``simply_supported_layout`` and
    p = p0 sin(pi x / a) sin(pi y / b).  Returns the six amplitudes and the
    centre deflection.
    """
    a, b = problem.a, problem.b
    al, be = math.pi / a, math.pi / b
    cmap = build_compliance(problem.material, problem.h)
    C = np.linalg.inv(cmap.K[:14, :14])
    rows, cols = _GROUPS["bending"]
    Gx, Gy, G0 = (g[rows][:, cols] for g in strain_coefficients())
    names = ("Psi1", "Psi2", "W", "Om01", "Om02", "Om3")
    pts = [(0.31 * a, 0.17 * b), (0.23 * a, 0.41 * b)]

    def funcs(pat, x, y):
        fx = (math.sin(al * x), math.cos(al * x))
        fy = (math.sin(be * y), math.cos(be * y))
        dfx = (al * math.cos(al * x), -al * math.sin(al * x))
        dfy = (be * math.cos(be * y), -be * math.sin(be * y))
        ddfx = (-al ** 2 * fx[0], -al ** 2 * fx[1])
        ddfy = (-be ** 2 * fy[0], -be ** 2 * fy[1])
        px, py = pat
        return (fx[px] * fy[py], dfx[px] * fy[py], fx[px] * dfy[py],
                ddfx[px] * fy[py], dfx[px] * dfy[py], fx[px] * ddfy[py])

    def residual(amps, x, y, with_load):
        derivs = [np.zeros(6) for _ in range(6)]
        for k, n in enumerate(names):
            vals = funcs(_PATTERN[n], x, y)
            for d in range(6):
                derivs[d][k] = amps[k] * vals[d]
        r = _continuous_residual_matrix(C, Gx, Gy, G0, derivs)
        if with_load:
            # load enters as f on W and through S = C (E - L)
            s = math.sin(al * x) * math.sin(be * y)
            Lv = cmap.Lm[:14, 0] * p0
            dLx = Lv * al * math.cos(al * x) * math.sin(be * y)
            dLy = Lv * be * math.sin(al * x) * math.cos(be * y)
            r = r - Gx.T @ C @ dLx - Gy.T @ C @ dLy + G0.T @ C @ (Lv * s)
            r[2] += p0 * s
        return r

    def pattern_value(k, x, y):
        return funcs(_PATTERN[names[k]], x, y)[0]

    x0, y0 = pts[0]
    M = np.zeros((6, 6))
    for j in range(6):
        e = np.zeros(6)
        e[j] = 1.0
        r = residual(e, x0, y0, False)
        M[:, j] = [r[k] / pattern_value(k, x0, y0) for k in range(6)]
    r0 = residual(np.zeros(6), x0, y0, True)
    rhs = -np.array([r0[k] / pattern_value(k, x0, y0) for k in range(6)])
    amps = np.linalg.solve(M, rhs)
    x1, y1 = pts[1]
    check = residual(amps, x1, y1, True)
    return {
        "amplitudes": dict(zip(names, amps)),
        "w_center": float(amps[2]),
        "consistency": float(np.max(np.abs(check))),
    }


def simply_supported_layout() -> dict[str, EdgeBC]:
    return {e: EdgeBC.simply_supported(e) for e in EDGES}


# -- manufactured solutions --------------------------------------------------------

@dataclass
class ManufacturedSolution:
    """Smooth trigonometric fields A sin(kx x + px) cos(ky y + py) per component."""

    amp: np.ndarray
    kx: np.ndarray
    ky: np.ndarray
    px: np.ndarray
    py: np.ndarray

    @classmethod
    def random(cls, seed: int = 0, scale: float = 1.0) -> "ManufacturedSolution":
        rng = np.random.default_rng(seed)
        return cls(scale * rng.uniform(0.5, 1.5, 9), rng.uniform(1.0, 2.5, 9), rng.uniform(1.0, 2.5, 9),
                   rng.uniform(0, 1, 9), rng.uniform(0, 1, 9))

    def derivatives(self, X, Y):
        """U, Ux, Uy, Uxx, Uxy, Uyy each of shape (9, ...)."""
        a = self.amp[:, None, None]
        sx = np.sin(self.kx[:, None, None] * X + self.px[:, None, None])
        cx = np.cos(self.kx[:, None, None] * X + self.px[:, None, None])
        sy = np.sin(self.ky[:, None, None] * Y + self.py[:, None, None])
        cy = np.cos(self.ky[:, None, None] * Y + self.py[:, None, None])
        kx = self.kx[:, None, None]
        ky = self.ky[:, None, None]
        return (a * sx * cy, a * kx * cx * cy, -a * ky * sx * sy,
                -a * kx ** 2 * sx * cy, -a * kx * ky * cx * sy, -a * ky ** 2 * sx * cy)

    def values(self, X, Y):
        return self.derivatives(X, Y)[0]

    def edge_function(self, k: int):
        def f(x, y):
            return self.amp[k] * np.sin(self.kx[k] * x + self.px[k]) * np.cos(self.ky[k] * y + self.py[k])
        return f


def manufactured_problem(base: PlateProblem, nx: int, ny: int | None = None,
                         mms: ManufacturedSolution | None = None, variant: str = "full"):
    """Problem whose exact solution is ``mms``: source from the continuous operator,
    displacement data on every edge.  Loads of ``base`` are dropped.
    """
    ny = nx if ny is None else ny
    mms = mms or ManufacturedSolution.random()
    if variant == "symmetric-m":
        # Omega_3 is pinned to zero in this model
        mms = ManufacturedSolution(np.where(np.arange(9) == 5, 0.0, mms.amp), mms.kx, mms.ky, mms.px, mms.py)
    bc = {e: EdgeBC((DISPLACEMENT,) * 9, tuple(mms.edge_function(k) for k in range(9))) for e in EDGES}
    prob = base.with_(nx=nx, ny=ny, loads=PlateLoads(), bc=bc, source=None)
    grid = prob.grid
    X, Y = grid.mesh()
    derivs = [d.reshape(9, -1) for d in mms.derivatives(X, Y)]
    maps = _variant_maps(prob, variant)
    src = np.zeros((9, grid.size))
    for group in ("bending", "twisting"):
        cmap, Bg, sel = maps[group]
        rows, cols = _GROUPS[group]
        C, _ = _group_constitutive(cmap, sel, prob.loads, grid)
        Chat = Bg @ C @ Bg.T
        Gx, Gy, G0 = (g[rows][:, cols] for g in strain_coefficients())
        r = _continuous_residual_matrix(Chat, Gx, Gy, G0, [d[cols] for d in derivs])
        src[cols] = -r
    prob = prob.with_(source=src.reshape((9,) + grid.shape))
    return prob, mms.values(X, Y)


def mms_convergence(base: PlateProblem, sizes=(17, 33, 65), mms: ManufacturedSolution | None = None,
                    variant: str = "full") -> dict:
    """Discrete L2 errors of all nine fields and observed orders between grids.

    Orders are NaN for fields whose error vanishes on every grid.
    """
    mms = mms or ManufacturedSolution.random()
    errors = []
    for n in sizes:
        prob, exact = manufactured_problem(base, n, n, mms, variant)
        sol = solve(prob) if variant == "full" else solve_reduced(prob, variant)
        w = prob.grid.trapezoid_weights()
        diff = sol.kinematics.array - exact
        errors.append(np.sqrt(np.sum(w * diff ** 2, axis=(1, 2))))
    errors = np.array(errors)
    hs = np.array([1.0 / (n - 1) for n in sizes])
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log(errors[:-1] / errors[1:]) / np.log(hs[:-1] / hs[1:])[:, None]
    # fields reproduced exactly (pinned in a reduced model) have no order
    orders[:, np.all(errors == 0.0, axis=0)] = np.nan
    return {"sizes": list(sizes), "errors": errors, "orders": orders}


# -- kernel ------------------------------------------------------------------------

def null_space_report(problem: PlateProblem, rel_tol: float = 1e-9) -> dict:
    """Kernel of the assembled operator (both groups, displacement dofs eliminated)."""
    grid = problem.grid
    blocks, frees = [], []
    for group in ("bending", "twisting"):
        system = _assemble_group(problem, group)
        free = ~system.fixed
        blocks.append(system.A[free][:, free].toarray())
        frees.append(free)
    A = sla.block_diag(*blocks)
    evals, evecs = np.linalg.eigh(A)
    tol = rel_tol * max(float(np.max(np.abs(evals))), 1e-300)
    kernel = evecs[:, np.abs(evals) <= tol]
    R = rigid_basis(grid).reshape(9, grid.size, 6)
    Rb = R[:6].reshape(-1, 6)[frees[0]]
    Rt = R[6:].reshape(-1, 6)[frees[1]]
    Rfull = np.vstack([Rb, Rt])
    dim = kernel.shape[1]
    angle = None
    if dim:
        rnk = np.linalg.matrix_rank(Rfull) if Rfull.size else 0
        if rnk:
            Rq = sla.orth(Rfull)
            angle = float(np.max(sla.subspace_angles(kernel, Rq)))
    return {
        "dimension": int(dim),
        "max_principal_angle": angle,
        "smallest_nonzero_eigenvalue": float(np.min(np.abs(evals[np.abs(evals) > tol]))) if np.any(np.abs(evals) > tol) else 0.0,
        "eigen_tolerance": tol,
    }


# -- 3D reconstruction -------------------------------------------------------------

def reconstruct_faces(problem: PlateProblem, solution: PlateSolution) -> float:
    """Largest face-condition mismatch of the reconstructed 3D fields."""
    from .resultants import densities_from_stress_set
    from .profiles import face_bc_residuals

    d = densities_from_stress_set(solution.stresses, problem.h)
    return float(np.max(np.abs(face_bc_residuals(d, problem.loads))))


def reconstruction_order(problem, variant: str = "full", sizes=(33, 65),
                         zetas=(-1.0, -0.5, 0.0, 0.5, 1.0)) -> dict:
    """Observed order of the interior thickness-equilibrium residual.

    ``problem`` is either a callable ``n -> PlateProblem`` on an n x n grid
    (preferred: loads evaluated exactly on every grid) or a PlateProblem,
    whose gridded loads are then interpolated bilinearly.  Interpolated
    loads carry a fixed O(dx^2) error of the source grid, so only use them
    with sizes no finer than the source.
    """
    from .solver import reconstruct_3d

    if callable(problem):
        make = problem
    else:
        def make(n):
            return problem.with_(nx=n, ny=n, loads=_regrid_loads(problem, n), source=None)
    values = []
    for n in sizes:
        prob = make(n)
        sol = solve(prob) if variant == "full" else solve_reduced(prob, variant)
        r = reconstruct_3d(prob, sol, zetas)
        values.append(math.hypot(r["force_rms"], r["moment_rms"]))
    values = np.array(values)
    hs = np.array([1.0 / (n - 1) for n in sizes])
    orders = np.log(values[:-1] / values[1:]) / np.log(hs[:-1] / hs[1:])
    return {"sizes": list(sizes), "residuals": values, "orders": orders, "order": float(orders[-1])}


def _regrid_loads(problem: PlateProblem, n: int) -> PlateLoads:
    """Interpolate gridded loads of ``problem`` onto an n x n grid (bilinear)."""
    from scipy.interpolate import RegularGridInterpolator

    old = problem.grid
    new = problem.with_(nx=n, ny=n, loads=PlateLoads(), source=None).grid
    X, Y = new.mesh()
    pts = np.stack([Y.ravel(), X.ravel()], axis=1)
    out = {}
    for name in ("sigma_t", "sigma_b", "mu_t", "mu_b"):
        v = np.asarray(getattr(problem.loads, name), dtype=float)
        if v.ndim:
            f = RegularGridInterpolator((old.y, old.x), v, method="linear")
            out[name] = f(pts).reshape(new.shape)
        else:
            out[name] = float(v)
    return PlateLoads(**out)
