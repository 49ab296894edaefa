"""Through-thickness polynomial ansatz for the plate.

The thickness coordinate is ``zeta = 2 x3 / h`` in [-1, 1].  Stress and
couple-stress tensors are returned with the tensor axes last, using the
``sigma[j, i]`` = (face normal j, direction i) convention of ``cosserat3d``.
Density fields may carry grid axes; those come first in every output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cosserat3d import balance_residuals
from .errors import DomainError, StencilError, ValidationError
from .sets import KinematicSet

__all__ = [
    "PlateLoads",
    "SectionDensities",
    "FACE_RESIDUAL_NAMES",
    "check_zeta",
    "stress_at",
    "couple_stress_at",
    "displacement_at",
    "microrotation_at",
    "face_bc_residuals",
    "thickness_equilibrium_residual",
    "thickness_equilibrium_field",
]

K1 = 4.0 / 5.0
K2 = 8.0 / 5.0

FACE_RESIDUAL_NAMES = (
    "sigma33_top", "sigma33_bottom", "sigma3b", "mu33_top", "mu33_bottom", "mu3b",
)


@dataclass(frozen=True)
class PlateLoads:
    """Face tractions (sigma_t, sigma_b) and face couples (mu_t, mu_b).

    Values are scalars or arrays on the grid.  The combinations used by the
    plate equations are derived on access and never stored.
    """

    sigma_t: float | np.ndarray = 0.0
    sigma_b: float | np.ndarray = 0.0
    mu_t: float | np.ndarray = 0.0
    mu_b: float | np.ndarray = 0.0

    def __post_init__(self) -> None:
        for name in ("sigma_t", "sigma_b", "mu_t", "mu_b"):
            val = np.asarray(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(val)):
                raise ValidationError(f"load {name} has non-finite values")
            object.__setattr__(self, name, float(val) if val.ndim == 0 else val)

    @classmethod
    def from_pv(cls, p=0.0, sigma_0=0.0, v=0.0, t=0.0) -> "PlateLoads":
        """Build face data from the combinations (p, sigma_0, v, t)."""
        p, s0, v, t = (np.asarray(a, float) for a in (p, sigma_0, v, t))
        return cls(sigma_t=s0 + p / 2, sigma_b=s0 - p / 2, mu_t=t + v, mu_b=t - v)

    @property
    def p(self):
        return self.sigma_t - self.sigma_b

    @property
    def sigma_0(self):
        return 0.5 * (self.sigma_t + self.sigma_b)

    @property
    def v(self):
        return 0.5 * (self.mu_t - self.mu_b)

    @property
    def t(self):
        return 0.5 * (self.mu_t + self.mu_b)

    def is_zero(self) -> bool:
        return all(not np.any(getattr(self, k)) for k in ("sigma_t", "sigma_b", "mu_t", "mu_b"))


@dataclass(frozen=True)
class SectionDensities:
    """Coefficient functions of the thickness ansatz.

    Shapes: ``n, m, r`` are (2, 2, *grid); ``q, q_star, s_star, m_star`` are
    (2, *grid).  Index order of the 2x2 blocks is [alpha, beta] as in
    ``sigma_alpha_beta``.
    """

    h: float
    n: np.ndarray
    m: np.ndarray
    q: np.ndarray
    q_star: np.ndarray
    r: np.ndarray
    s_star: np.ndarray
    m_star: np.ndarray

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise DomainError(f"thickness must be positive, got {self.h}")
        for name in ("n", "m", "q", "q_star", "r", "s_star", "m_star"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    @classmethod
    def zeros(cls, h: float, grid_shape: tuple[int, ...] = ()) -> "SectionDensities":
        z2 = np.zeros((2, 2) + grid_shape)
        z1 = np.zeros((2,) + grid_shape)
        return cls(h, z2, z2.copy(), z1, z1.copy(), z2.copy(), z1.copy(), z1.copy())

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return self.q.shape[1:]


def check_zeta(zeta) -> np.ndarray:
    z = np.asarray(zeta, dtype=float)
    if np.any(np.abs(z) > 1.0) or not np.all(np.isfinite(z)):
        raise DomainError(f"thickness coordinate outside [-1, 1]: {zeta}")
    return z


def _last(a: np.ndarray, nlead: int) -> np.ndarray:
    """Move the first ``nlead`` component axes to the end."""
    return np.moveaxis(a, tuple(range(nlead)), tuple(range(-nlead, 0)))


def stress_at(d: SectionDensities, loads: PlateLoads, zeta) -> np.ndarray:
    """Reconstructed 3D stress at thickness coordinate ``zeta`` (scalar)."""
    z = float(check_zeta(zeta))
    grid = d.grid_shape
    s = np.zeros(grid + (3, 3))
    s[..., :2, :2] = _last(d.n + 0.5 * d.h * z * d.m, 2)
    s[..., 2, :2] = _last(d.q * (1 - z * z), 1)
    s[..., :2, 2] = _last(d.q_star * (1 - z * z), 1)
    s[..., 2, 2] = -0.75 * (z ** 3 / 3 - z) * np.asarray(loads.p) + np.asarray(loads.sigma_0)
    return s


def couple_stress_at(d: SectionDensities, loads: PlateLoads, zeta) -> np.ndarray:
    """Reconstructed 3D couple stress at ``zeta``; the mu_3beta row is zero."""
    z = float(check_zeta(zeta))
    grid = d.grid_shape
    c = np.zeros(grid + (3, 3))
    c[..., :2, :2] = _last(d.r * (1 - z * z), 2)
    c[..., :2, 2] = _last(z * d.s_star + d.m_star, 1)
    c[..., 2, 2] = z * np.asarray(loads.v) + np.asarray(loads.t)
    return c


def _kin_array(U) -> np.ndarray:
    arr = U.array if isinstance(U, KinematicSet) else np.asarray(U, dtype=float)
    if arr.shape[:1] != (9,):
        raise ValidationError(f"kinematic values need 9 leading components, got {arr.shape}")
    return arr


def displacement_at(U, h: float, zeta) -> np.ndarray:
    """3D displacement: u_alpha = U_alpha + (h/2) zeta Psi_alpha, u_3 = W."""
    z = float(check_zeta(zeta))
    a = _kin_array(U)
    out = np.empty(a.shape[1:] + (3,))
    out[..., 0] = a[6] + 0.5 * h * z * a[0]
    out[..., 1] = a[7] + 0.5 * h * z * a[1]
    out[..., 2] = a[2]
    return out


def microrotation_at(U, h: float, zeta) -> np.ndarray:
    """3D microrotation from the quadratic/cubic thickness profiles."""
    z = float(check_zeta(zeta))
    a = _kin_array(U)
    theta0 = a[3:5] / K1
    theta3 = a[5] * h / K2
    out = np.empty(a.shape[1:] + (3,))
    out[..., 0] = theta0[0] * (1 - z * z)
    out[..., 1] = theta0[1] * (1 - z * z)
    out[..., 2] = a[8] + z * (1 - z * z / 3) * theta3
    return out


def _signed_max(a) -> float:
    a = np.ravel(np.asarray(a, dtype=float))
    return float(a[np.argmax(np.abs(a))]) if a.size else 0.0


def face_bc_residuals(
    d: SectionDensities,
    loads: PlateLoads,
    stress: Callable = stress_at,
    couple: Callable = couple_stress_at,
) -> np.ndarray:
    """Face-condition residuals in the order of ``FACE_RESIDUAL_NAMES``.

    On grids each entry is the signed value of largest magnitude.  ``stress``
    and ``couple`` default to the ansatz evaluators.
    """
    st, sb = stress(d, loads, 1.0), stress(d, loads, -1.0)
    ct, cb = couple(d, loads, 1.0), couple(d, loads, -1.0)
    return np.array([
        _signed_max(st[..., 2, 2] - loads.sigma_t),
        _signed_max(sb[..., 2, 2] - loads.sigma_b),
        _signed_max(np.concatenate([np.ravel(st[..., 2, :2]), np.ravel(sb[..., 2, :2])])),
        _signed_max(ct[..., 2, 2] - loads.mu_t),
        _signed_max(cb[..., 2, 2] - loads.mu_b),
        _signed_max(np.concatenate([np.ravel(ct[..., 2, :2]), np.ravel(cb[..., 2, :2])])),
    ])


def _central(f: np.ndarray, axis: int, step: float, margin: int) -> np.ndarray:
    """Central difference along a grid axis, cropped by ``margin`` on both axes."""
    ny, nx = f.shape[-2:]
    m = margin
    if axis == -1:
        df = (f[..., :, m + 1:nx - m + 1] - f[..., :, m - 1:nx - m - 1]) / (2 * step)
        return df[..., m:ny - m, :]
    df = (f[..., m + 1:ny - m + 1, :] - f[..., m - 1:ny - m - 1, :]) / (2 * step)
    return df[..., :, m:nx - m]


def _crop(f, margin: int, shape: tuple[int, int]):
    f = np.asarray(f, dtype=float)
    if f.ndim < 2:
        return f
    ny, nx = shape
    return f[..., margin:ny - margin, margin:nx - margin]


def thickness_equilibrium_field(
    d: SectionDensities,
    loads: PlateLoads,
    zetas,
    dx: float,
    dy: float,
    margin: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """3D balance residuals of the reconstructed fields on interior nodes.

    In-plane derivatives are second-order central differences; thickness
    derivatives are exact.  Returns ``(force, moment)`` with shape
    ``(len(zetas), ny - 2 margin, nx - 2 margin, 3)``.
    """
    zs = np.atleast_1d(check_zeta(zetas))
    shape = d.grid_shape
    if len(shape) != 2:
        raise StencilError("density fields must live on a 2D grid")
    ny, nx = shape
    if margin < 1 or nx - 2 * margin < 1 or ny - 2 * margin < 1:
        raise StencilError(f"grid {nx}x{ny} too small for margin {margin}")
    h = d.h

    def div2(a):
        # d_alpha a[alpha, ...]
        return _central(a[0], -1, dx, margin) + _central(a[1], -2, dy, margin)

    dn = np.stack([div2(d.n[:, b]) for b in range(2)])
    dm = np.stack([div2(d.m[:, b]) for b in range(2)])
    dr = np.stack([div2(d.r[:, b]) for b in range(2)])
    dqs = div2(d.q_star)
    dss = div2(d.s_star)
    dms = div2(d.m_star)
    q = _crop(d.q, margin, shape)
    n = _crop(d.n, margin, shape)
    m = _crop(d.m, margin, shape)
    p = _crop(loads.p, margin, shape)
    v = _crop(loads.v, margin, shape)
    sub = (ny - 2 * margin, nx - 2 * margin)

    forces, moments = [], []
    for z in zs:
        one = 1 - z * z
        div_sigma = np.zeros(sub + (3,))
        div_mu = np.zeros(sub + (3,))
        # d_alpha sigma_alpha_beta + d_3 sigma_3beta, with d_3 = (2/h) d_zeta
        div_sigma[..., :2] = _last(dn + 0.5 * h * z * dm - (4.0 / h) * z * q, 1)
        div_sigma[..., 2] = one * dqs - (2.0 / h) * 0.75 * (z * z - 1) * p
        div_mu[..., :2] = _last(one * dr, 1)
        div_mu[..., 2] = z * dss + dms + (2.0 / h) * v
        sigma = np.zeros(sub + (3, 3))
        sigma[..., :2, :2] = _last(n + 0.5 * h * z * m, 2)
        sigma[..., 2, :2] = _last(q * one, 1)
        sigma[..., :2, 2] = _last(_crop(d.q_star, margin, shape) * one, 1)
        f, mo = balance_residuals(div_sigma, sigma, div_mu)
        forces.append(f)
        moments.append(mo)
    return np.stack(forces), np.stack(moments)


def thickness_equilibrium_residual(
    d: SectionDensities,
    loads: PlateLoads,
    zeta: float,
    point: tuple[int, int],
    dx: float,
    dy: float,
) -> tuple[np.ndarray, np.ndarray]:
    """3D balance residuals at grid node ``point = (j, i)`` and height ``zeta``."""
    ny, nx = d.grid_shape
    j, i = point
    if not (1 <= i <= nx - 2 and 1 <= j <= ny - 2):
        raise StencilError(f"node {point} has no central stencil on a {nx}x{ny} grid")
    win = (slice(j - 1, j + 2), slice(i - 1, i + 2))

    def cut(a):
        a = np.asarray(a, dtype=float)
        return a if a.ndim < 2 else a[(...,) + win]

    local = SectionDensities(d.h, cut(d.n), cut(d.m), cut(d.q), cut(d.q_star),
                             cut(d.r), cut(d.s_star), cut(d.m_star))
    local_loads = PlateLoads(cut(loads.sigma_t), cut(loads.sigma_b), cut(loads.mu_t), cut(loads.mu_b))
    f, m = thickness_equilibrium_field(local, local_loads, [zeta], dx, dy, margin=1)
    return f[0, 0, 0], m[0, 0, 0]
