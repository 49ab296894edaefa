"""Pointwise 3D micropolar elasticity.

Index conventions (1-based in the text, 0-based in arrays):

* ``sigma[j, i]`` is the force per area acting on the face with normal
  ``e_j`` in direction ``e_i``; balance reads ``d_j sigma_ji = 0``.
* ``grad_u[i, j] = d u_i / d x_j`` (the Jacobian).
* Strains: ``gamma_ij = d_i u_j - eps_ijk phi_k`` and ``chi_ij = d_i phi_j``,
  so a rigid motion ``u = c + w x x``, ``phi = w`` is strain free.
* Moment balance: ``eps_ijk sigma_jk + d_j mu_ji = 0``.

All functions accept arrays with arbitrary leading batch dimensions.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .material import CosseratModuli, PrimedModuli

__all__ = [
    "LEVI_CIVITA",
    "hooke_forward",
    "hooke_inverse",
    "energy_strain",
    "energy_stress",
    "kinematic_relations",
    "balance_residuals",
    "axial_of",
]

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0
LEVI_CIVITA.setflags(write=False)


def _tensor(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.shape[-2:] != (3, 3):
        raise ValidationError(f"{name} must have trailing shape (3, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


def _vector(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValidationError(f"{name} must have trailing shape (3,), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


def _t(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, -1, -2)


def _trace_id(a: np.ndarray) -> np.ndarray:
    tr = np.trace(a, axis1=-2, axis2=-1)
    return tr[..., None, None] * np.eye(3)


def _isotropic(a: np.ndarray, c1: float, c2: float, c3: float) -> np.ndarray:
    return c1 * a + c2 * _t(a) + c3 * _trace_id(a)


def hooke_forward(gamma, chi, m: CosseratModuli) -> tuple[np.ndarray, np.ndarray]:
    """Stress and couple stress from strain and torsion."""
    g = _tensor(gamma, "gamma")
    c = _tensor(chi, "chi")
    sigma = _isotropic(g, m.mu + m.mu_c, m.mu - m.mu_c, m.lam)
    couple = _isotropic(c, m.gamma + m.epsilon, m.gamma - m.epsilon, m.beta)
    return sigma, couple


def hooke_inverse(sigma, mu, p: PrimedModuli) -> tuple[np.ndarray, np.ndarray]:
    """Strain and torsion from stress and couple stress."""
    s = _tensor(sigma, "sigma")
    c = _tensor(mu, "mu")
    gamma = _isotropic(s, p.mu_p + p.mu_c_p, p.mu_p - p.mu_c_p, p.lambda_p)
    chi = _isotropic(c, p.gamma_p + p.epsilon_p, p.gamma_p - p.epsilon_p, p.beta_p)
    return gamma, chi


def _quad(a: np.ndarray, c1: float, c2: float, c3: float) -> np.ndarray:
    aa = np.einsum("...ij,...ij->...", a, a)
    aat = np.einsum("...ij,...ji->...", a, a)
    tr = np.trace(a, axis1=-2, axis2=-1)
    return 0.5 * (c1 * aa + c2 * aat + c3 * tr * tr)


def energy_strain(gamma, chi, m: CosseratModuli):
    """Stored energy per volume as a function of strain and torsion."""
    g = _tensor(gamma, "gamma")
    c = _tensor(chi, "chi")
    w = _quad(g, m.mu + m.mu_c, m.mu - m.mu_c, m.lam)
    w = w + _quad(c, m.gamma + m.epsilon, m.gamma - m.epsilon, m.beta)
    return w if np.ndim(w) else float(w)


def energy_stress(sigma, mu, p: PrimedModuli):
    """Complementary energy per volume as a function of the stresses."""
    s = _tensor(sigma, "sigma")
    c = _tensor(mu, "mu")
    w = _quad(s, p.mu_p + p.mu_c_p, p.mu_p - p.mu_c_p, p.lambda_p)
    w = w + _quad(c, p.gamma_p + p.epsilon_p, p.gamma_p - p.epsilon_p, p.beta_p)
    return w if np.ndim(w) else float(w)


def kinematic_relations(grad_u, phi, grad_phi) -> tuple[np.ndarray, np.ndarray]:
    """Strain ``gamma = grad_u^T - eps.phi`` and torsion ``chi = grad_phi^T``."""
    gu = _tensor(grad_u, "grad_u")
    ph = _vector(phi, "phi")
    gp = _tensor(grad_phi, "grad_phi")
    gamma = _t(gu) - np.einsum("ijk,...k->...ij", LEVI_CIVITA, ph)
    return gamma, _t(gp).copy()


def axial_of(a) -> np.ndarray:
    """``eps_ijk a_jk`` for a second-order tensor."""
    return np.einsum("ijk,...jk->...i", LEVI_CIVITA, _tensor(a, "a"))


def balance_residuals(div_sigma, sigma, div_mu) -> tuple[np.ndarray, np.ndarray]:
    """Force and moment balance residuals.

    ``div_sigma[i] = d_j sigma_ji`` and ``div_mu[i] = d_j mu_ji`` are supplied
    by the caller.
    """
    ds = _vector(div_sigma, "div_sigma")
    dm = _vector(div_mu, "div_mu")
    return ds.copy(), axial_of(sigma) + dm
