"""Bending and twisting boundary-value problems on a rectangular plate.

Discretization
--------------
The discrete problem minimizes

    Pi_h(U) = sum_nodes w (1/2 (E - L).C.(E - L) - f.U) - sum_edges w_e S_o.U + J_h(U)

over nodal kinematic fields, where ``E = G U`` uses the summation-by-parts
derivative of ``plate_kinematics``, ``w`` are trapezoid weights, ``C`` is
the plate stiffness (inverse compliance) and ``f`` collects the distributed
loads (p on W, 2 v on Omega0_3, plus any source).  ``J_h`` is a positive
semidefinite correction replacing the nodal quadrature of products of pure
x- (or pure y-) derivatives by the compact edge-midpoint rule.  It vanishes
on affine fields, is O(dx^2) on smooth fields and removes the odd-even
decoupling of the wide central stencil.

The Euler-Lagrange equations of ``Pi_h`` are a consistent second-order
discretization of the plate equilibrium equations with traction conditions
imposed naturally.  Displacement conditions are eliminated strongly.  The
matrix is symmetric and, with no displacement condition at all, has exactly
the rigid motions as its kernel.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SingularModuliError, SolverError, ValidationError
from .material import CosseratModuli
from .plate_constitutive import ComplianceMap, build_compliance, build_reduced_compliance
from .plate_kinematics import (
    FieldGrid,
    _trap,
    derivative_operators,
    rigid_basis,
    strain_coefficients,
    strain_operator,
)
from .profiles import PlateLoads, SectionDensities, couple_stress_at, displacement_at, face_bc_residuals, \
    microrotation_at, stress_at, thickness_equilibrium_field
from .resultants import densities_from_stress_set
from .sets import KINEMATIC_NAMES, STRESS_NAMES, KinematicSet, StrainSet, StressSet

__all__ = [
    "EDGES",
    "PAIR_NAMES",
    "EQUATION_NAMES",
    "VARIANTS",
    "EdgeBC",
    "BCLayout",
    "PlateProblem",
    "PlateSolution",
    "LinearSystem",
    "assemble_bending",
    "assemble_twisting",
    "solve",
    "solve_reduced",
    "plate_residual",
    "reconstruct_3d",
    "equation_residual_exact",
]

EDGES = ("left", "right", "bottom", "top")
# edge traction conjugate to each kinematic field
PAIR_NAMES = ("M_n1", "M_n2", "Qs_n", "R_n1", "R_n2", "Ss_n", "N_n1", "N_n2", "Ms_n")
EQUATION_NAMES = ("1A_1", "1A_2", "1B", "1C_1", "1C_2", "1D", "2A_1", "2A_2", "2B")
VARIANTS = ("full", "symmetric-m", "decoupled")
_GROUPS = {"bending": (slice(0, 14), slice(0, 6)), "twisting": (slice(14, 20), slice(6, 9))}
_NORMALS = {"left": (-1.0, 0.0), "right": (1.0, 0.0), "bottom": (0.0, -1.0), "top": (0.0, 1.0)}

DISPLACEMENT = "displacement"
TRACTION = "traction"


# -- boundary conditions ------------------------------------------------------------

EdgeValue = float | np.ndarray | Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EdgeBC:
    """Condition on one edge for each of the nine conjugate pairs.

    ``kinds[k]`` is ``"displacement"`` (prescribe kinematic field k) or
    ``"traction"`` (prescribe edge resultant ``PAIR_NAMES[k]``, outward
    normal).  ``values[k]`` is a constant, an array along the edge, or a
    callable ``f(x, y)``.
    """

    kinds: tuple[str, ...]
    values: tuple = (0.0,) * 9

    def __post_init__(self) -> None:
        if len(self.kinds) != 9 or len(self.values) != 9:
            raise ValidationError("EdgeBC needs nine kinds and nine values")
        bad = [k for k in self.kinds if k not in (DISPLACEMENT, TRACTION)]
        if bad:
            raise ValidationError(f"unknown condition kind(s) {bad}")

    @classmethod
    def uniform(cls, bending: str, twisting: str | None = None) -> "EdgeBC":
        twisting = twisting or bending
        return cls((bending,) * 6 + (twisting,) * 3)

    @classmethod
    def clamped(cls) -> "EdgeBC":
        return cls.uniform(DISPLACEMENT)

    @classmethod
    def free(cls) -> "EdgeBC":
        return cls.uniform(TRACTION)

    @classmethod
    def simply_supported(cls, edge: str, twisting: str = DISPLACEMENT) -> "EdgeBC":
        """Hard simple support: W, tangential rotation and tangential micro-axis fixed."""
        if edge not in EDGES:
            raise ValidationError(f"unknown edge {edge!r}")
        normal_x = edge in ("left", "right")
        d, t = DISPLACEMENT, TRACTION
        # Psi1, Psi2, W, Om01, Om02, Om3
        bend = (t, d, d, d, t, t) if normal_x else (d, t, d, t, d, t)
        return cls(bend + (twisting,) * 3)

    def with_values(self, **values) -> "EdgeBC":
        vals = list(self.values)
        for name, v in values.items():
            key = name if name in KINEMATIC_NAMES else None
            idx = KINEMATIC_NAMES.index(key) if key else PAIR_NAMES.index(name) if name in PAIR_NAMES else None
            if idx is None:
                raise ValidationError(f"unknown field or traction name {name!r}")
            vals[idx] = v
        return EdgeBC(self.kinds, tuple(vals))


BCLayout = Mapping[str, EdgeBC]


def _check_layout(bc: BCLayout) -> dict[str, EdgeBC]:
    missing = [e for e in EDGES if e not in bc]
    extra = [e for e in bc if e not in EDGES]
    if missing or extra:
        raise ValidationError(f"bc layout must name exactly the edges {EDGES}; missing={missing} extra={extra}")
    for e, v in bc.items():
        if not isinstance(v, EdgeBC):
            raise ValidationError(f"edge {e!r} must carry an EdgeBC")
    return dict(bc)


# -- problem and solution ------------------------------------------------------------

@dataclass
class PlateProblem:
    """Rectangular plate [0, a] x [0, b] of thickness h on an nx x ny grid.

    ``source`` optionally adds a distributed generalized load to each of the
    nine equations (array of shape (9, ny, nx)); the equations read
    ``equation_k + source_k = 0``.
    """

    a: float
    b: float
    h: float
    nx: int
    ny: int
    material: CosseratModuli
    loads: PlateLoads = field(default_factory=PlateLoads)
    bc: BCLayout = field(default_factory=lambda: {e: EdgeBC.clamped() for e in EDGES})
    source: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise ValidationError(f"thickness must be positive, got {self.h}")
        self.grid  # validates sizes
        self.bc = _check_layout(self.bc)
        for name in ("sigma_t", "sigma_b", "mu_t", "mu_b"):
            val = np.asarray(getattr(self.loads, name))
            if val.ndim and val.shape != self.grid.shape:
                raise ValidationError(f"load {name} must be scalar or shaped {self.grid.shape}")
        if self.source is not None:
            src = np.asarray(self.source, dtype=float)
            if src.shape != (9,) + self.grid.shape:
                raise ValidationError(f"source must have shape {(9,) + self.grid.shape}")
            self.source = src

    @property
    def grid(self) -> FieldGrid:
        return FieldGrid(int(self.nx), int(self.ny), float(self.a), float(self.b))

    def with_(self, **changes) -> "PlateProblem":
        data = {k: getattr(self, k) for k in ("a", "b", "h", "nx", "ny", "material", "loads", "bc", "source")}
        data.update(changes)
        return PlateProblem(**data)


@dataclass
class PlateSolution:
    kinematics: KinematicSet
    strains: StrainSet
    stresses: StressSet
    residuals: dict
    metadata: dict
    variant: str = "full"


@dataclass
class LinearSystem:
    """Assembled system of one group before elimination of displacement dofs."""

    group: str
    A: sp.csr_matrix
    b: np.ndarray
    fixed: np.ndarray          # boolean mask over dofs
    fixed_values: np.ndarray   # values at all dofs (only fixed ones used)
    nodal_weights: np.ndarray  # trapezoid weight of each dof's node
    fields: tuple[str, ...]
    strain_op: sp.csr_matrix   # G mapping group dofs to group strains
    basis: np.ndarray          # group stress basis (n_group_stress x k)
    stiffness: np.ndarray      # k x k
    load_strain: np.ndarray    # k x N reduced load strains L


# -- variants ------------------------------------------------------------------------

def _sym_col(i: int, j: int) -> np.ndarray:
    c = np.zeros(20)
    c[i] = c[j] = 1.0
    return c


def _unit(i: int) -> np.ndarray:
    c = np.zeros(20)
    c[i] = 1.0
    return c


def variant_basis(variant: str) -> tuple[np.ndarray, np.ndarray]:
    """Stress bases (20 x k) for the bending and twisting groups."""
    ix = {n: i for i, n in enumerate(STRESS_NAMES)}
    if variant == "full":
        cols_b = [_unit(i) for i in range(14)]
        cols_t = [_unit(i) for i in range(14, 20)]
    elif variant == "symmetric-m":
        cols_b = [_unit(ix["M11"]), _sym_col(ix["M12"], ix["M21"]), _unit(ix["M22"])]
        cols_b += [_unit(ix[n]) for n in ("Q1", "Q2", "Qs1", "Qs2", "R11", "R12", "R21", "R22")]
        cols_t = [_unit(i) for i in range(14, 20)]
    elif variant == "decoupled":
        cols_b = [_unit(ix["M11"]), _sym_col(ix["M12"], ix["M21"]), _unit(ix["M22"]),
                  _sym_col(ix["Q1"], ix["Qs1"]), _sym_col(ix["Q2"], ix["Qs2"])]
        cols_b += [_unit(ix[n]) for n in ("R11", "R12", "R21", "R22", "Ss1", "Ss2")]
        cols_t = [_unit(ix["N11"]), _sym_col(ix["N12"], ix["N21"]), _unit(ix["N22"]),
                  _unit(ix["Ms1"]), _unit(ix["Ms2"])]
    else:
        raise ValidationError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    return np.stack(cols_b, axis=1), np.stack(cols_t, axis=1)


def _variant_maps(problem: PlateProblem, variant: str):
    m = problem.material
    if variant == "decoupled" and m.mu_c != 0.0:
        raise ValidationError("the decoupled variant requires mu_c = 0")
    if variant != "decoupled" and m.mu_c == 0.0:
        raise SingularModuliError("mu_c", "full and symmetric-m models need mu_c > 0; use variant 'decoupled'")
    Bb, Bt = variant_basis(variant)
    if variant == "full":
        cmap = build_compliance(m, problem.h)
        return {"bending": (cmap, Bb[:14], slice(0, 14)), "twisting": (cmap, Bt[14:], slice(14, 20))}
    cmap = build_reduced_compliance(m, problem.h, np.hstack([Bb, Bt]))
    kb = Bb.shape[1]
    return {
        "bending": (cmap, Bb[:14], slice(0, kb)),
        "twisting": (cmap, Bt[14:], slice(kb, kb + Bt.shape[1])),
    }


def _group_constitutive(cmap: ComplianceMap, sel: slice, loads: PlateLoads, grid: FieldGrid):
    K = cmap.K[sel, sel]
    if np.abs(cmap.K[sel]).sum() - np.abs(K).sum() > 1e-12 * np.abs(K).sum():
        raise SolverError("compliance couples the bending and twisting groups")
    evals = np.linalg.eigvalsh(K)
    if not np.all(evals > 0):
        raise SingularModuliError("compliance", "group compliance is not positive definite for these moduli")
    C = np.linalg.inv(K)
    C = 0.5 * (C + C.T)
    lv = cmap.load_values(loads)
    Lfull = np.tensordot(cmap.Lm[sel], lv[:3], axes=(1, 0))
    Lfull = np.broadcast_to(Lfull.reshape((K.shape[0], -1)), (K.shape[0], grid.size)) \
        if Lfull.ndim == 1 else Lfull.reshape(K.shape[0], grid.size)
    return C, np.ascontiguousarray(Lfull)


# -- assembly -------------------------------------------------------------------------

def _edge_nodes(grid: FieldGrid, edge: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Flat node indices along an edge, their coordinates and 1D trapezoid weights."""
    nx, ny = grid.nx, grid.ny
    if edge in ("left", "right"):
        i = 0 if edge == "left" else nx - 1
        idx = np.arange(ny) * nx + i
        xs = np.full(ny, grid.x[i])
        ys = grid.y
        w = _trap(ny, grid.dy)
    else:
        j = 0 if edge == "bottom" else ny - 1
        idx = j * nx + np.arange(nx)
        xs = grid.x
        ys = np.full(nx, grid.y[j])
        w = _trap(nx, grid.dx)
    return idx, xs, ys, w


def _edge_values(value, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    if callable(value):
        out = np.asarray(value(xs, ys), dtype=float)
    else:
        out = np.asarray(value, dtype=float)
    out = np.broadcast_to(out, xs.shape).astype(float)
    if not np.all(np.isfinite(out)):
        raise ValidationError("boundary data must be finite")
    return out


def _compact_ops(grid: FieldGrid):
    """Edge-midpoint differences and weights in x and y."""
    nx, ny = grid.nx, grid.ny
    dpx = sp.diags([-np.ones(nx - 1), np.ones(nx - 1)], [0, 1], shape=(nx - 1, nx)) / grid.dx
    dpy = sp.diags([-np.ones(ny - 1), np.ones(ny - 1)], [0, 1], shape=(ny - 1, ny)) / grid.dy
    delx = sp.kron(sp.identity(ny), dpx, format="csr")
    dely = sp.kron(dpy, sp.identity(nx), format="csr")
    wx = np.outer(_trap(ny, grid.dy), np.full(nx - 1, grid.dx)).ravel()
    wy = np.outer(np.full(ny - 1, grid.dy), _trap(nx, grid.dx)).ravel()
    return (delx, wx), (dely, wy)


def stabilization_matrices(grid: FieldGrid) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Scalar forms (compact edge rule minus nodal rule) for d/dx and d/dy.

    Both are positive semidefinite and annihilate affine fields.
    """
    Dx, Dy = derivative_operators(grid, "sbp")
    w = grid.trapezoid_weights().ravel()
    (delx, wx), (dely, wy) = _compact_ops(grid)
    Jx = delx.T @ sp.diags(wx) @ delx - Dx.T @ sp.diags(w) @ Dx
    Jy = dely.T @ sp.diags(wy) @ dely - Dy.T @ sp.diags(w) @ Dy
    return Jx.tocsr(), Jy.tocsr()


def _assemble_group(problem: PlateProblem, group: str, variant: str = "full") -> LinearSystem:
    grid = problem.grid
    N = grid.size
    maps = _variant_maps(problem, variant)
    cmap, Bg, sel = maps[group]
    rows, cols = _GROUPS[group]
    fields = KINEMATIC_NAMES[cols]
    nf = len(fields)
    C, Lred = _group_constitutive(cmap, sel, problem.loads, grid)

    G = strain_operator(grid, "sbp", rows, cols)
    P = sp.kron(sp.csr_matrix(Bg.T), sp.identity(N), format="csr")
    Geff = (P @ G).tocsr()
    w = grid.trapezoid_weights().ravel()
    CW = sp.kron(sp.csr_matrix(C), sp.diags(w), format="csr")
    A = Geff.T @ CW @ Geff

    Gx, Gy, _ = (g[rows][:, cols] for g in strain_coefficients())
    Jx, Jy = stabilization_matrices(grid)
    Cxx = (Bg.T @ Gx).T @ C @ (Bg.T @ Gx)
    Cyy = (Bg.T @ Gy).T @ C @ (Bg.T @ Gy)
    A = (A + sp.kron(sp.csr_matrix(Cxx), Jx) + sp.kron(sp.csr_matrix(Cyy), Jy)).tocsr()
    A = (0.5 * (A + A.T)).tocsr()

    b = Geff.T @ (CW @ Lred.reshape(-1))
    f = np.zeros((nf, N))
    p = np.broadcast_to(np.asarray(problem.loads.p, dtype=float), grid.shape).ravel()
    v = np.broadcast_to(np.asarray(problem.loads.v, dtype=float), grid.shape).ravel()
    if group == "bending":
        f[fields.index("W")] += p
    else:
        f[fields.index("Om03")] += 2.0 * v
    if problem.source is not None:
        f += problem.source[cols].reshape(nf, N)
    b = b + (f * w).reshape(-1)

    fixed = np.zeros(nf * N, dtype=bool)
    fixed_sum = np.zeros(nf * N)
    fixed_cnt = np.zeros(nf * N)
    traction = np.zeros(nf * N)
    for edge in EDGES:
        ebc = problem.bc[edge]
        idx, xs, ys, we = _edge_nodes(grid, edge)
        for local, gk in enumerate(range(cols.start, cols.stop)):
            vals = _edge_values(ebc.values[gk], xs, ys)
            dofs = local * N + idx
            if ebc.kinds[gk] == DISPLACEMENT:
                fixed[dofs] = True
                fixed_sum[dofs] += vals
                fixed_cnt[dofs] += 1
            else:
                traction[dofs] += we * vals
    values = np.where(fixed_cnt > 0, fixed_sum / np.maximum(fixed_cnt, 1), 0.0)
    b = b + traction
    wd = np.tile(w, nf)
    return LinearSystem(group, A, b, fixed, values, wd, fields, Geff, Bg, C, Lred)


def assemble_bending(problem: PlateProblem, variant: str = "full") -> LinearSystem:
    """System for (Psi1, Psi2, W, Om01, Om02, Om3)."""
    return _assemble_group(problem, "bending", variant)


def assemble_twisting(problem: PlateProblem, variant: str = "full") -> LinearSystem:
    """System for (U1, U2, Om03)."""
    return _assemble_group(problem, "twisting", variant)


# -- solving --------------------------------------------------------------------------

def _group_rigid(grid: FieldGrid, group: str) -> np.ndarray:
    R = rigid_basis(grid).reshape(9, grid.size, 6)
    rows, cols = _GROUPS[group]
    R = R[cols].reshape(-1, 6)
    keep = np.linalg.norm(R, axis=0) > 0
    return R[:, keep]


def free_kernel(system: LinearSystem, grid: FieldGrid, extra_fixed: np.ndarray | None = None) -> np.ndarray:
    """Rigid motions of the group that vanish on every fixed dof, restricted to free dofs."""
    fixed = system.fixed if extra_fixed is None else (system.fixed | extra_fixed)
    R = _group_rigid(grid, system.group)
    Rd = R[fixed]
    if Rd.shape[0]:
        ns = sla.null_space(Rd, rcond=1e-12)
    else:
        ns = np.eye(R.shape[1])
    if ns.shape[1] == 0:
        return np.zeros((int((~fixed).sum()), 0))
    Z = (R @ ns)[~fixed]
    Q, _ = np.linalg.qr(Z)
    return Q


def _solve_system(system: LinearSystem, grid: FieldGrid, method: str = "direct", tol: float = 1e-10,
                  extra_fixed: np.ndarray | None = None) -> tuple[np.ndarray, dict]:
    t0 = time.perf_counter()
    fixed = system.fixed.copy()
    values = system.fixed_values.copy()
    if extra_fixed is not None:
        fixed |= extra_fixed
        values[extra_fixed & ~system.fixed] = 0.0
    free = ~fixed
    A = system.A
    Aff = A[free][:, free].tocsc()
    rhs = system.b[free] - A[free][:, fixed] @ values[fixed]
    Z = free_kernel(system, grid, extra_fixed)
    meta = {"group": system.group, "n_dofs": int(free.sum()), "nnz": int(Aff.nnz), "method": method,
            "rigid_constraints": int(Z.shape[1])}
    imbalance = Z.T @ rhs if Z.shape[1] else np.zeros(0)
    meta["load_imbalance"] = float(np.linalg.norm(imbalance)) if Z.shape[1] else 0.0
    if Z.shape[1]:
        rhs = rhs - Z @ imbalance
    if not np.all(np.isfinite(rhs)):
        raise SolverError("non-finite right-hand side")
    if method == "direct":
        if Z.shape[1]:
            # pin one well-conditioned dof per rigid mode, then project the kernel out
            _, _, piv = sla.qr(Z.T, pivoting=True, mode="economic")
            keep = np.ones(Aff.shape[0], dtype=bool)
            keep[piv[: Z.shape[1]]] = False
            uf = np.zeros(Aff.shape[0])
            uf[keep], fstats = _factor_solve(Aff[keep][:, keep].tocsc(), rhs[keep], system, grid)
            uf -= Z @ (Z.T @ uf)
        else:
            uf, fstats = _factor_solve(Aff, rhs, system, grid)
        meta.update(fstats)
        meta["iterations"] = 0
    elif method == "cg":
        diag = Aff.diagonal()
        if np.any(diag <= 0):
            raise SolverError("non-positive diagonal; the operator is not positive definite")
        M = spla.LinearOperator(Aff.shape, matvec=lambda x: x / diag)
        op = Aff
        if Z.shape[1]:
            op = spla.LinearOperator(Aff.shape, matvec=lambda x: Aff @ x + Z @ (Z.T @ x))
        history: list[float] = []
        bnorm = max(np.linalg.norm(rhs), 1e-300)

        def cb(xk):
            history.append(float(np.linalg.norm(rhs - op @ xk) / bnorm))

        uf, info = spla.cg(op, rhs, rtol=tol, atol=0.0, maxiter=10 * Aff.shape[0], M=M, callback=cb)
        meta["iterations"] = len(history)
        if info != 0:
            raise SolverError(f"conjugate gradients did not converge (info={info})", history)
    else:
        raise ValidationError(f"unknown solver method {method!r}")
    if not np.all(np.isfinite(uf)):
        raise SolverError(f"solution is not finite; {_null_diagnosis(system, grid)}")
    u = values.copy()
    u[free] = uf
    r = Aff @ uf - rhs
    meta["relative_residual"] = float(np.linalg.norm(r) / max(np.linalg.norm(rhs), 1e-300))
    meta["seconds"] = time.perf_counter() - t0
    return u, meta


def _factor_solve(A: sp.csc_matrix, rhs: np.ndarray, system: LinearSystem, grid: FieldGrid):
    """Sparse LU in symmetric mode: the reduced operator is symmetric positive definite."""
    try:
        lu = spla.splu(A, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                       options={"SymmetricMode": True})
    except RuntimeError as exc:
        raise SolverError(f"factorization failed: {exc}; {_null_diagnosis(system, grid)}") from exc
    x = lu.solve(rhs)
    x += lu.solve(rhs - A @ x)  # one refinement step
    return x, {"factor_nnz": int(lu.L.nnz + lu.U.nnz)}


def _null_diagnosis(system: LinearSystem, grid: FieldGrid) -> str:
    Z = free_kernel(system, grid)
    return f"expected rigid kernel dimension {Z.shape[1]} for the {system.group} group"


def _post(problem: PlateProblem, U: np.ndarray, variant: str) -> tuple[StrainSet, StressSet]:
    grid = problem.grid
    E = (strain_operator(grid, "sbp") @ U.reshape(-1)).reshape((20,) + grid.shape)
    S = np.zeros((20,) + grid.shape)
    maps = _variant_maps(problem, variant)
    for group in ("bending", "twisting"):
        cmap, Bg, sel = maps[group]
        rows, _ = _GROUPS[group]
        C, Lred = _group_constitutive(cmap, sel, problem.loads, grid)
        Eg = E[rows].reshape(Bg.shape[0], -1)
        s_red = C @ (Bg.T @ Eg - Lred)
        S[rows] = (Bg @ s_red).reshape((Bg.shape[0],) + grid.shape)
    return StrainSet(E), StressSet(S)


def _run(problem: PlateProblem, variant: str, method: str, tol: float) -> PlateSolution:
    grid = problem.grid
    U = np.zeros((9, grid.size))
    meta = {"variant": variant, "groups": {}}
    for group in ("bending", "twisting"):
        system = _assemble_group(problem, group, variant)
        extra = None
        if variant == "symmetric-m" and group == "bending":
            # Omega_3 carries no energy once S* vanishes and M is symmetric
            extra = np.zeros(system.A.shape[0], dtype=bool)
            k = system.fields.index("Om3")
            extra[k * grid.size:(k + 1) * grid.size] = True
        u, gm = _solve_system(system, grid, method, tol, extra)
        _, cols = _GROUPS[group]
        U[cols] = u.reshape(len(system.fields), grid.size)
        meta["groups"][group] = gm
    U = U.reshape((9,) + grid.shape)
    E, S = _post(problem, U, variant)
    sol = PlateSolution(KinematicSet(U), E, S, {}, meta, variant)
    sol.residuals = plate_residual(problem, sol)
    return sol


def solve(problem: PlateProblem, method: str = "direct", tol: float = 1e-10) -> PlateSolution:
    """Solve both groups with the full model."""
    return _run(problem, "full", method, tol)


def solve_reduced(problem: PlateProblem, variant: str, method: str = "direct", tol: float = 1e-10) -> PlateSolution:
    """Solve with a reduced model: ``symmetric-m`` or ``decoupled``."""
    aliases = {"SymmetricM": "symmetric-m", "DecoupledReissner": "decoupled"}
    variant = aliases.get(variant, variant)
    if variant not in ("symmetric-m", "decoupled"):
        raise ValidationError(f"unknown reduced variant {variant!r}")
    return _run(problem, variant, method, tol)


# -- residuals ------------------------------------------------------------------------

def _interior_mask(grid: FieldGrid, margin: int) -> np.ndarray:
    mask = np.zeros(grid.shape, dtype=bool)
    mask[margin:grid.ny - margin, margin:grid.nx - margin] = True
    return mask


def equation_residual_exact(S_fields: StressSet, dS_dx: StressSet, dS_dy: StressSet, loads: PlateLoads,
                            source: np.ndarray | None = None) -> np.ndarray:
    """The nine equilibrium residuals from resultants and their derivatives.

    Returns an array (9, ...) in the order ``EQUATION_NAMES``.
    """
    S, Sx, Sy = S_fields, dS_dx, dS_dy
    div = lambda Tx, Ty: Tx[0] + Ty[1]  # d_alpha T_alpha  # noqa: E731
    out = np.zeros((9,) + S.grid_shape)
    for b in range(2):
        out[b] = Sx.M[0, b] + Sy.M[1, b] - S.Q[b]
        out[3 + b] = Sx.R[0, b] + Sy.R[1, b] + sum(
            _eps(b, g) * (S.Qs[g] - S.Q[g]) for g in range(2))
        out[6 + b] = Sx.N[0, b] + Sy.N[1, b]
    out[2] = div(Sx.Qs, Sy.Qs) + loads.p
    out[5] = div(Sx.Ss, Sy.Ss) + S.M[0, 1] - S.M[1, 0]
    out[8] = div(Sx.Ms, Sy.Ms) + S.N[0, 1] - S.N[1, 0] + 2.0 * np.asarray(loads.v)
    if source is not None:
        out = out + source
    return out


def _eps(a: int, b: int) -> float:
    return (0.0, 1.0, -1.0, 0.0)[2 * a + b]


def plate_residual(problem: PlateProblem, solution: PlateSolution, margin: int = 2) -> dict:
    """Residual norms of the nine equilibrium equations.

    ``discrete``: the assembled equations recomputed from the returned fields
    (divided by nodal weights), RMS over interior nodes and max over all
    non-displacement dofs.  ``strong``: the equations evaluated with central
    differences of the returned resultant fields, RMS over nodes at least
    ``margin`` from the boundary; this is a truncation-error measure.
    """
    grid = problem.grid
    N = grid.size
    variant = solution.variant
    U = solution.kinematics.array.reshape(9, N)
    disc_int, disc_max, scale = {}, {}, {}
    interior = _interior_mask(grid, 1).ravel()
    for group in ("bending", "twisting"):
        system = _assemble_group(problem, group, variant)
        _, cols = _GROUPS[group]
        u = U[cols].reshape(-1)
        r = -(system.A @ u - system.b) / system.nodal_weights
        bw = system.b / system.nodal_weights
        fixed = system.fixed
        if variant == "symmetric-m" and group == "bending":
            k = system.fields.index("Om3")
            fixed = fixed.copy()
            fixed[k * N:(k + 1) * N] = True
        for local, gk in enumerate(range(cols.start, cols.stop)):
            name = EQUATION_NAMES[gk]
            rr = r[local * N:(local + 1) * N]
            ff = fixed[local * N:(local + 1) * N]
            sel = interior & ~ff
            disc_int[name] = float(np.sqrt(np.mean(rr[sel] ** 2))) if sel.any() else 0.0
            disc_max[name] = float(np.max(np.abs(rr[~ff]))) if (~ff).any() else 0.0
            scale[name] = float(np.max(np.abs(bw[local * N:(local + 1) * N]))) if N else 0.0

    S = solution.stresses
    Dx, Dy = derivative_operators(grid, "sbp")
    flat = S.array.reshape(20, N)
    Sx = StressSet((Dx @ flat.T).T.reshape((20,) + grid.shape))
    Sy = StressSet((Dy @ flat.T).T.reshape((20,) + grid.shape))
    strong = equation_residual_exact(S, Sx, Sy, problem.loads, problem.source)
    mask = _interior_mask(grid, margin)
    strong_rms = {n: float(np.sqrt(np.mean(strong[k][mask] ** 2))) if mask.any() else 0.0
                  for k, n in enumerate(EQUATION_NAMES)}
    data_scale = max([1e-300] + list(scale.values()))
    return {
        "discrete_interior_rms": disc_int,
        "discrete_max": disc_max,
        "strong_interior_rms": strong_rms,
        "data_scale": data_scale,
        "max_discrete": max(disc_max.values()) if disc_max else 0.0,
    }


# -- 3D reconstruction ----------------------------------------------------------------

def reconstruct_3d(problem: PlateProblem, solution: PlateSolution, zetas=(-1.0, -0.5, 0.0, 0.5, 1.0),
                   margin: int = 2) -> dict:
    """3D fields of a plate solution and their thickness-equilibrium residuals.

    Returns a dict with ``sampler(zeta) -> (sigma, mu, u, phi)``, the force and
    moment residual maxima and RMS over interior nodes (at least ``margin``
    from the boundary) and all ``zetas``, and the face-condition residuals.
    """
    grid = problem.grid
    d: SectionDensities = densities_from_stress_set(solution.stresses, problem.h)
    zs = np.asarray(zetas, dtype=float)
    force, moment = thickness_equilibrium_field(d, problem.loads, zs, grid.dx, grid.dy, margin=margin)
    faces = face_bc_residuals(d, problem.loads)
    U = solution.kinematics

    def sampler(zeta):
        return (stress_at(d, problem.loads, zeta), couple_stress_at(d, problem.loads, zeta),
                displacement_at(U, problem.h, zeta), microrotation_at(U, problem.h, zeta))

    return {
        "sampler": sampler,
        "densities": d,
        "force_max": float(np.max(np.abs(force))) if force.size else 0.0,
        "moment_max": float(np.max(np.abs(moment))) if moment.size else 0.0,
        "force_rms": float(np.sqrt(np.mean(force ** 2))) if force.size else 0.0,
        "moment_rms": float(np.sqrt(np.mean(moment ** 2))) if moment.size else 0.0,
        "face_residuals": faces,
        "zetas": zs,
    }
