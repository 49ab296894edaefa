"""Discrete plate strain-displacement operator and the rigid-motion family.

Grid nodes are ordered row-major: node ``(j, i)`` at ``x = i dx, y = j dy``
has flat index ``j * nx + i``; gridded arrays have shape ``(ny, nx)``.
Vectors of several fields are stacked field-major (all nodes of field 0,
then field 1, ...).

The strain relations are

    e_ab   = Psi_b,a - eps3ab Omega_3      omega_a  = Psi_a - eps3ab Omega0_b
    omega*_a = W,a + eps3ab Omega0_b       tau0_ab  = Omega0_b,a
    tau3_a = Omega_3,a                     ups_ab   = U_b,a - eps3ab Omega0_3
    tau0_3a = Omega0_3,a

which annihilate every rigid motion of the plate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .cosserat3d import LEVI_CIVITA
from .errors import StencilError, ValidationError
from .sets import KINEMATIC_NAMES, STRAIN_NAMES, KinematicSet, StrainSet

__all__ = [
    "FieldGrid",
    "RigidMotionParams",
    "SCHEMES",
    "derivative_1d",
    "derivative_operators",
    "strain_coefficients",
    "strain_operator",
    "strain_from_kinematics",
    "rigid_motion_fields",
    "rigid_basis",
]

SCHEMES = ("sbp", "central2")
EPS3 = LEVI_CIVITA[2, :2, :2]  # eps_3ab


@dataclass(frozen=True)
class FieldGrid:
    """Uniform nx x ny node grid on [0, a] x [0, b]."""

    nx: int
    ny: int
    a: float
    b: float

    def __post_init__(self) -> None:
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValidationError("grid sizes must be integers")
        if self.nx < 3 or self.ny < 3:
            raise StencilError(f"grid must be at least 3x3, got {self.nx}x{self.ny}")
        if not (self.a > 0 and self.b > 0):
            raise ValidationError("domain lengths must be positive")

    @property
    def dx(self) -> float:
        return self.a / (self.nx - 1)

    @property
    def dy(self) -> float:
        return self.b / (self.ny - 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.a, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, self.b, self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y)

    def trapezoid_weights(self) -> np.ndarray:
        """Nodal weights of the 2D trapezoid rule, shape (ny, nx)."""
        return np.outer(_trap(self.ny, self.dy), _trap(self.nx, self.dx))


def _trap(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = 0.5 * step
    return w


@dataclass(frozen=True)
class RigidMotionParams:
    U0_1: float = 0.0
    U0_2: float = 0.0
    W0: float = 0.0
    Omega0_1: float = 0.0
    Omega0_2: float = 0.0
    Omega0_3: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.U0_1, self.U0_2, self.W0, self.Omega0_1, self.Omega0_2, self.Omega0_3])


def derivative_1d(n: int, step: float, scheme: str = "sbp") -> sp.csr_matrix:
    """First-derivative matrix on n nodes.

    Interior rows are central.  ``sbp`` closes with first-order one-sided rows,
    which makes ``diag(w) D`` plus its transpose equal the boundary operator
    for trapezoid weights ``w`` (summation by parts).  ``central2`` closes with
    second-order one-sided rows.
    """
    if n < 3:
        raise StencilError(f"need at least 3 nodes, got {n}")
    D = sp.lil_matrix((n, n))
    for i in range(1, n - 1):
        D[i, i - 1] = -0.5 / step
        D[i, i + 1] = 0.5 / step
    if scheme == "sbp":
        D[0, 0], D[0, 1] = -1.0 / step, 1.0 / step
        D[n - 1, n - 2], D[n - 1, n - 1] = -1.0 / step, 1.0 / step
    elif scheme == "central2":
        D[0, 0], D[0, 1], D[0, 2] = -1.5 / step, 2.0 / step, -0.5 / step
        D[n - 1, n - 3], D[n - 1, n - 2], D[n - 1, n - 1] = 0.5 / step, -2.0 / step, 1.5 / step
    else:
        raise ValidationError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    return D.tocsr()


def derivative_operators(grid: FieldGrid, scheme: str = "sbp") -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """(Dx, Dy) acting on flat node vectors."""
    Dx = sp.kron(sp.identity(grid.ny), derivative_1d(grid.nx, grid.dx, scheme), format="csr")
    Dy = sp.kron(derivative_1d(grid.ny, grid.dy, scheme), sp.identity(grid.nx), format="csr")
    return Dx, Dy


def strain_coefficients() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Constant matrices with E = Gx dU/dx + Gy dU/dy + G0 U (each 20 x 9)."""
    Gd = [np.zeros((20, 9)), np.zeros((20, 9))]
    G0 = np.zeros((20, 9))
    s = {n: i for i, n in enumerate(STRAIN_NAMES)}
    k = {n: i for i, n in enumerate(KINEMATIC_NAMES)}
    for a in range(2):
        for b in range(2):
            Gd[a][s[f"e{a + 1}{b + 1}"], k[f"Psi{b + 1}"]] = 1.0
            G0[s[f"e{a + 1}{b + 1}"], k["Om3"]] = -EPS3[a, b]
            Gd[a][s[f"tau0_{a + 1}{b + 1}"], k[f"Om0{b + 1}"]] = 1.0
            Gd[a][s[f"ups{a + 1}{b + 1}"], k[f"U{b + 1}"]] = 1.0
            G0[s[f"ups{a + 1}{b + 1}"], k["Om03"]] = -EPS3[a, b]
            G0[s[f"om{a + 1}"], k[f"Om0{b + 1}"]] += -EPS3[a, b]
            G0[s[f"oms{a + 1}"], k[f"Om0{b + 1}"]] += EPS3[a, b]
        G0[s[f"om{a + 1}"], k[f"Psi{a + 1}"]] = 1.0
        Gd[a][s[f"oms{a + 1}"], k["W"]] = 1.0
        Gd[a][s[f"tau3{a + 1}"], k["Om3"]] = 1.0
        Gd[a][s[f"tau0_3{a + 1}"], k["Om03"]] = 1.0
    return Gd[0], Gd[1], G0


def strain_operator(grid: FieldGrid, scheme: str = "sbp", rows=slice(None), cols=slice(None)) -> sp.csr_matrix:
    """Sparse map from stacked kinematic fields to stacked strain fields.

    ``rows``/``cols`` select strain components and kinematic fields (e.g. the
    bending group ``slice(0, 14)`` and ``slice(0, 6)``).
    """
    Gx, Gy, G0 = (g[rows][:, cols] for g in strain_coefficients())
    Dx, Dy = derivative_operators(grid, scheme)
    I = sp.identity(grid.size, format="csr")
    return (sp.kron(sp.csr_matrix(Gx), Dx) + sp.kron(sp.csr_matrix(Gy), Dy)
            + sp.kron(sp.csr_matrix(G0), I)).tocsr()


def _kin_grid(U, grid: FieldGrid) -> np.ndarray:
    arr = U.array if isinstance(U, KinematicSet) else np.asarray(U, dtype=float)
    if arr.shape != (9,) + grid.shape:
        raise ValidationError(f"kinematic fields must have shape {(9,) + grid.shape}, got {arr.shape}")
    return arr


def strain_from_kinematics(U, grid: FieldGrid, scheme: str = "sbp") -> StrainSet:
    """Strain fields of gridded kinematic fields."""
    arr = _kin_grid(U, grid)
    E = strain_operator(grid, scheme) @ arr.reshape(-1)
    return StrainSet(E.reshape((20,) + grid.shape))


def rigid_motion_fields(params: RigidMotionParams, grid: FieldGrid) -> KinematicSet:
    """Kinematic fields of the six-parameter rigid motion."""
    X, Y = grid.mesh()
    u01, u02, w0, o1, o2, o3 = params.as_array()
    xs = (X, Y)
    out = np.zeros((9,) + grid.shape)
    Om0 = (o1, o2)
    for a in range(2):
        out[6 + a] = sum(EPS3[b, a] * o3 * xs[b] for b in range(2)) + (u01, u02)[a]
        out[a] = sum(EPS3[a, b] * Om0[b] for b in range(2))
        out[3 + a] = Om0[a]
    out[2] = sum(EPS3[a, b] * Om0[a] * xs[b] for a in range(2) for b in range(2)) + w0
    out[8] = o3
    return KinematicSet(out)


def rigid_basis(grid: FieldGrid) -> np.ndarray:
    """Stacked rigid motions for unit parameters, shape (9 N, 6)."""
    cols = []
    for k in range(6):
        e = np.zeros(6)
        e[k] = 1.0
        cols.append(rigid_motion_fields(RigidMotionParams(*e), grid).array.reshape(-1))
    return np.stack(cols, axis=1)
