"""Weighted thickness integrals: stress set, kinematic set, strain set, work.

All integrals use a fixed 5-point Gauss-Legendre rule on zeta in [-1, 1],
which is exact for every polynomial integrand produced by the ansatz
(degree at most 6).
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, ValidationError
from .profiles import K1, K2, PlateLoads, SectionDensities
from .sets import KinematicSet, StrainSet, StressSet

__all__ = [
    "StressSet",
    "StrainSet",
    "KinematicSet",
    "GAUSS_NODES",
    "GAUSS_WEIGHTS",
    "integrate_stress_set",
    "integrate_kinematic_set",
    "integrate_strain_set",
    "work_density",
    "stress_set_from_densities",
    "densities_from_stress_set",
    "edge_tractions",
    "boundary_work_terms",
    "face_work",
    "psi_sign_diagnostic",
]

GAUSS_NODES, GAUSS_WEIGHTS = leggauss(5)


def _check_h(h: float) -> float:
    h = float(h)
    if not h > 0:
        raise DomainError(f"thickness must be positive, got {h}")
    return h


def _integrate(sampler: Callable, weight: Callable[[float], float]):
    total = None
    for z, w in zip(GAUSS_NODES, GAUSS_WEIGHTS):
        vals = sampler(float(z))
        term = [w * weight(z) * np.asarray(v, dtype=float) for v in vals]
        total = term if total is None else [a + b for a, b in zip(total, term)]
    return total


def _first(a: np.ndarray, nlead: int) -> np.ndarray:
    """Move trailing tensor axes to the front (inverse of profiles._last)."""
    return np.moveaxis(a, tuple(range(-nlead, 0)), tuple(range(nlead)))


def integrate_stress_set(sampler: Callable, h: float) -> StressSet:
    """Resultants of a thickness profile.

    ``sampler(zeta)`` returns ``(sigma, mu)`` with trailing (3, 3) tensor axes.
    """
    h = _check_h(h)
    s0, c0 = _integrate(sampler, lambda z: 1.0)
    s1, c1 = _integrate(sampler, lambda z: z)
    half = 0.5 * h
    M = half ** 2 * _first(s1[..., :2, :2], 2)
    Q = half * _first(s0[..., 2, :2], 1)
    Qs = half * _first(s0[..., :2, 2], 1)
    R = half * _first(c0[..., :2, :2], 2)
    Ss = half ** 2 * _first(c1[..., :2, 2], 1)
    N = half * _first(s0[..., :2, :2], 2)
    Ms = half * _first(c0[..., :2, 2], 1)
    return StressSet.from_parts(M=M, Q=Q, Qs=Qs, R=R, Ss=Ss, N=N, Ms=Ms)


def integrate_kinematic_set(sampler: Callable, h: float) -> KinematicSet:
    """Weighted displacement and microrotation averages.

    ``sampler(zeta)`` returns ``(u, phi)`` with a trailing axis of length 3.
    """
    h = _check_h(h)
    u1, p1 = _integrate(sampler, lambda z: z)
    ub, pb = _integrate(sampler, lambda z: 1.0 - z * z)
    u0, p0 = _integrate(sampler, lambda z: 1.0)
    grid = u0.shape[:-1]
    out = np.empty((9,) + grid)
    out[0:2] = (3.0 / h) * _first(u1[..., :2], 1)
    out[2] = 0.75 * ub[..., 2]
    out[3:5] = 0.75 * _first(pb[..., :2], 1)
    out[5] = (3.0 / h) * p1[..., 2]
    out[6:8] = 0.5 * _first(u0[..., :2], 1)
    out[8] = 0.5 * p0[..., 2]
    return KinematicSet(out)


def integrate_strain_set(sampler: Callable, h: float) -> StrainSet:
    """Weighted strain and torsion averages.

    ``sampler(zeta)`` returns ``(gamma, chi)`` indexed as in ``cosserat3d``.
    """
    h = _check_h(h)
    g1, c1 = _integrate(sampler, lambda z: z)
    gb, cb = _integrate(sampler, lambda z: 1.0 - z * z)
    g0, c0 = _integrate(sampler, lambda z: 1.0)
    grid = g0.shape[:-2]
    parts = [
        (3.0 / h) * g1[..., :2, :2],   # e
        0.75 * gb[..., 2, :2],         # omega
        0.75 * gb[..., :2, 2],         # omega*
        0.75 * cb[..., :2, :2],        # tau0
        (3.0 / h) * c1[..., :2, 2],    # tau3
        0.5 * g0[..., :2, :2],         # upsilon
        0.5 * c0[..., :2, 2],          # tau0_3
    ]
    flat = [p.reshape(grid + (-1,)) for p in parts]
    return StrainSet(np.moveaxis(np.concatenate(flat, axis=-1), -1, 0))


def work_density(S: StressSet, E: StrainSet):
    """Full 20-term contraction S . E."""
    w = np.sum(S.array * E.array, axis=0)
    return w if np.ndim(w) else float(w)


def stress_set_from_densities(d: SectionDensities) -> StressSet:
    h = d.h
    return StressSet.from_parts(
        M=h ** 3 * d.m / 12.0,
        Q=2.0 * h * d.q / 3.0,
        Qs=2.0 * h * d.q_star / 3.0,
        R=2.0 * h * d.r / 3.0,
        Ss=h ** 2 * d.s_star / 6.0,
        N=h * d.n,
        Ms=h * d.m_star,
    )


def densities_from_stress_set(S: StressSet, h: float) -> SectionDensities:
    h = _check_h(h)
    return SectionDensities(
        h=h,
        n=S.N / h,
        m=12.0 * S.M / h ** 3,
        q=1.5 * S.Q / h,
        q_star=1.5 * S.Qs / h,
        r=1.5 * S.R / h,
        s_star=6.0 * S.Ss / h ** 2,
        m_star=S.Ms / h,
    )


def edge_tractions(S: StressSet, normal) -> np.ndarray:
    """Edge resultants S_n, laid out conjugate to the 9 kinematic fields.

    Order: (M_n1, M_n2, Qs_n, R_n1, R_n2, Ss_n, N_n1, N_n2, Ms_n) with
    ``M_n[beta] = n_alpha M_alpha_beta`` and similarly for the others.  The
    couple datum ``Ss_n`` is the single edge quantity conjugate to Omega_3.
    """
    n = np.asarray(normal, dtype=float)
    if n.shape != (2,):
        raise ValidationError("normal must have two components")
    M, R, N = S.M, S.R, S.N
    out = np.empty((9,) + S.grid_shape)
    out[0:2] = n[0] * M[0] + n[1] * M[1]
    out[2] = n[0] * S.Qs[0] + n[1] * S.Qs[1]
    out[3:5] = n[0] * R[0] + n[1] * R[1]
    out[5] = n[0] * S.Ss[0] + n[1] * S.Ss[1]
    out[6:8] = n[0] * N[0] + n[1] * N[1]
    out[8] = n[0] * S.Ms[0] + n[1] * S.Ms[1]
    return out


def boundary_work_terms(S: StressSet, U: KinematicSet, normal):
    """Edge work density S_n . U."""
    w = np.sum(edge_tractions(S, normal) * U.array, axis=0)
    return w if np.ndim(w) else float(w)


def face_work(loads: PlateLoads, U: KinematicSet, h: float):
    """Work of the face tractions and couples on the ansatz fields.

    Equals p W + 2 v Omega0_3 + (5 h / 6) t Omega_3.  The last term is
    matched by an identical internal-work term and so drops out of the plate
    equations.
    """
    h = _check_h(h)
    w = loads.p * U.W + 2.0 * loads.v * U.Om03 + (5.0 * h / 6.0) * loads.t * U.Om3
    return w if np.ndim(w) else float(w)


def psi_sign_diagnostic(h: float = 1.0) -> dict[str, float]:
    """Psi from the integral definition for u_alpha = -(h/2) zeta V_alpha, V = 1."""
    h = _check_h(h)

    def sampler(z):
        return np.array([-0.5 * h * z, -0.5 * h * z, 0.0]), np.zeros(3)

    psi = integrate_kinematic_set(sampler, h).Psi
    return {"V": 1.0, "Psi_integral": float(psi[0]), "relation": "Psi = -V"}


__all__ += ["K1", "K2"]
